#include "conewave/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace conewave {

namespace {

bool power_of_two_at_least_8(int n) { return n >= 8 && (n & (n - 1)) == 0; }

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanDeleter {
  void operator()(fftw_plan_s* p) const {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(p);
  }
};
using Plan = std::unique_ptr<fftw_plan_s, PlanDeleter>;

// Plans are created once per (shape, sign) and thread; the planner itself is
// not thread safe, execution on new arrays is.
fftw_plan plan_for(const std::vector<int>& dims, int sign, cplx* data) {
  thread_local std::map<std::pair<std::vector<int>, int>, Plan> cache;
  auto key = std::make_pair(dims, sign);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second.get();
  auto* buf = reinterpret_cast<fftw_complex*>(data);
  fftw_plan p = nullptr;
  {
    std::lock_guard lock(planner_mutex());
    p = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), buf, buf,
                      sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  if (p == nullptr) throw std::runtime_error("fftw planning failed");
  return cache.emplace(std::move(key), Plan(p)).first->second.get();
}

double bracket(double r2) { return std::sqrt(1.0 + r2); }

}  // namespace

double GridSpec::dxi() const { return 2.0 * std::numbers::pi / spatial_period; }
double GridSpec::dtau() const { return 2.0 * std::numbers::pi / time_period; }

void GridSpec::validate() const {
  if (!power_of_two_at_least_8(nx) || !power_of_two_at_least_8(nt)) {
    throw std::invalid_argument("grid sizes must be powers of two >= 8 (nx=" + std::to_string(nx) +
                                ", nt=" + std::to_string(nt) + ")");
  }
  if (!(spatial_period > 0.0) || !(time_period > 0.0) || !std::isfinite(spatial_period) || !std::isfinite(time_period)) {
    throw std::invalid_argument("grid periods must be positive and finite");
  }
}

double SpatialGrid::dxi() const { return 2.0 * std::numbers::pi / period; }

void SpatialGrid::validate() const {
  if (!power_of_two_at_least_8(nx)) {
    throw std::invalid_argument("grid size must be a power of two >= 8 (nx=" + std::to_string(nx) + ")");
  }
  if (!(period > 0.0) || !std::isfinite(period)) throw std::invalid_argument("grid period must be positive and finite");
}

SpaceTimeField::SpaceTimeField(const GridSpec& g, Rep r) : grid(g), rep(r) {
  grid.validate();
  values.assign(grid.size(), cplx{});
}

Point3 SpaceTimeField::frequency(int it, int i1, int i2) const {
  return {grid.dtau() * signed_index(it, grid.nt), grid.dxi() * signed_index(i1, grid.nx),
          grid.dxi() * signed_index(i2, grid.nx)};
}

SpatialField::SpatialField(const SpatialGrid& g, Rep r) : grid(g), rep(r) {
  grid.validate();
  values.assign(grid.size(), cplx{});
}

Vec2 SpatialField::frequency(int i1, int i2) const {
  return {grid.dxi() * signed_index(i1, grid.nx), grid.dxi() * signed_index(i2, grid.nx)};
}

void unitary_dft(std::vector<cplx>& data, const std::vector<int>& dims, int sign) {
  std::size_t total = 1;
  for (int d : dims) total *= static_cast<std::size_t>(d);
  if (total != data.size()) throw std::invalid_argument("unitary_dft: extent mismatch");
  fftw_plan p = plan_for(dims, sign, data.data());
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(p, buf, buf);
  const double scale = 1.0 / std::sqrt(static_cast<double>(total));
  for (auto& v : data) v *= scale;
}

SpaceTimeField transform(const SpaceTimeField& field, Direction dir) {
  const Rep source = dir == Direction::kForward ? Rep::kPhysical : Rep::kFrequency;
  if (field.rep != source) throw std::logic_error("transform: field representation does not match direction");
  SpaceTimeField out = field;
  unitary_dft(out.values, {field.grid.nt, field.grid.nx, field.grid.nx}, dir == Direction::kForward ? -1 : 1);
  out.rep = dir == Direction::kForward ? Rep::kFrequency : Rep::kPhysical;
  return out;
}

SpatialField transform(const SpatialField& field, Direction dir) {
  const Rep source = dir == Direction::kForward ? Rep::kPhysical : Rep::kFrequency;
  if (field.rep != source) throw std::logic_error("transform: field representation does not match direction");
  SpatialField out = field;
  unitary_dft(out.values, {field.grid.nx, field.grid.nx}, dir == Direction::kForward ? -1 : 1);
  out.rep = dir == Direction::kForward ? Rep::kFrequency : Rep::kPhysical;
  return out;
}

SpaceTimeField project(const SpaceTimeField& field, const FrequencyRegion& region) {
  if (field.rep != Rep::kFrequency) throw std::logic_error("project: field must be in frequency rep");
  SpaceTimeField out = field;
  const auto& g = field.grid;
  for (int it = 0; it < g.nt; ++it) {
    for (int i1 = 0; i1 < g.nx; ++i1) {
      for (int i2 = 0; i2 < g.nx; ++i2) {
        if (!region.contains(field.frequency(it, i1, i2))) out.at(it, i1, i2) = cplx{};
      }
    }
  }
  return out;
}

SpaceTimeField dyadic_restrict(const SpaceTimeField& field, double N, std::optional<double> L,
                               std::optional<Sign> sign, BandMeasure measure) {
  std::vector<FrequencyRegion> parts{band(N, measure)};
  if (L) parts.push_back(modulation(*L));
  if (sign) parts.push_back(half_space(*sign));
  return project(field, intersect(std::move(parts)));
}

SpatialField dyadic_restrict(const SpatialField& field, double N, BandMeasure measure) {
  if (field.rep != Rep::kFrequency) throw std::logic_error("dyadic_restrict: field must be in frequency rep");
  const FrequencyRegion b = band(N, measure);
  SpatialField out = field;
  for (int i1 = 0; i1 < field.grid.nx; ++i1) {
    for (int i2 = 0; i2 < field.grid.nx; ++i2) {
      const Vec2 xi = field.frequency(i1, i2);
      if (!b.contains({0.0, xi.x, xi.y})) out.at(i1, i2) = cplx{};
    }
  }
  return out;
}

namespace {

std::vector<double> bands_up_to(double top) {
  std::vector<double> out;
  for (double n = 1.0; n <= top; n *= 2.0) out.push_back(n);
  return out;
}

}  // namespace

std::vector<double> dyadic_bands(const GridSpec& g) {
  const double m = g.dxi() * g.nx / 2.0;
  return bands_up_to(bracket(2.0 * m * m));
}

std::vector<double> modulation_bands(const GridSpec& g) {
  const double tau = g.dtau() * g.nt / 2.0;
  const double xi = g.dxi() * g.nx / 2.0 * std::numbers::sqrt2;
  const double top = std::max(tau, xi);
  return bands_up_to(bracket(top * top));
}

SpatialField spectral_density(const SpatialField& frequency_field) {
  if (frequency_field.rep != Rep::kFrequency) throw std::logic_error("spectral_density: frequency rep required");
  SpatialField out = frequency_field;
  const double scale = frequency_field.grid.dx() * frequency_field.grid.dx() * frequency_field.grid.nx;
  for (auto& v : out.values) v *= scale;
  return out;
}

SpatialField from_spectral_density(const SpatialField& density) {
  if (density.rep != Rep::kFrequency) throw std::logic_error("from_spectral_density: frequency rep required");
  SpatialField out = density;
  const double scale = density.grid.dx() * density.grid.dx() * density.grid.nx;
  for (auto& v : out.values) v /= scale;
  return out;
}

}  // namespace conewave
