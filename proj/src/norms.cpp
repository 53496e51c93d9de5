#include "conewave/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace conewave {

namespace {

// (sum w_i |a_i|^p)^{1/p} with a max-rescaling so large weights do not overflow.
class PowerSum {
 public:
  explicit PowerSum(double p) : p_(p) {}

  void add(double a) { terms_.push_back(a); }

  double result() const {
    double m = 0.0;
    for (double a : terms_) m = std::max(m, a);
    if (m == 0.0) return 0.0;
    if (std::isinf(p_)) return m;
    double acc = 0.0;
    for (double a : terms_) acc += std::pow(a / m, p_);
    return m * std::pow(acc, 1.0 / p_);
  }

 private:
  double p_;
  std::vector<double> terms_;
};

double cell_factor(double cell, double p) { return std::isinf(p) ? 1.0 : std::pow(cell, 1.0 / p); }

void require_r(double r) {
  if (!(r >= 1.0)) throw std::invalid_argument("Lebesgue exponent r must be >= 1");
}

}  // namespace

LebesgueExponents LebesgueExponents::from_r(const Rational& r) {
  if (r <= 1 || r > 2) throw std::invalid_argument("r must lie in (1, 2]");
  return {r, r / (r - 1)};
}

double japanese_bracket(Vec2 xi) { return std::sqrt(1.0 + xi.x * xi.x + xi.y * xi.y); }

double dual_exponent(double r) {
  require_r(r);
  return r == 1.0 ? std::numeric_limits<double>::infinity() : r / (r - 1.0);
}

NormValue fl_norm(const SpatialField& f, double r, double s, bool homogeneous) {
  if (f.rep != Rep::kFrequency) throw std::logic_error("fl_norm: frequency rep required");
  const double p = dual_exponent(r);
  NormValue out;
  out.kind = homogeneous ? NormKind::kHomogeneousFL : NormKind::kFL;
  PowerSum sum(p);
  for (int i1 = 0; i1 < f.grid.nx; ++i1) {
    for (int i2 = 0; i2 < f.grid.nx; ++i2) {
      const double a = std::abs(f.at(i1, i2));
      const Vec2 xi = f.frequency(i1, i2);
      if (homogeneous && i1 == 0 && i2 == 0) {
        if (a != 0.0) {
          out.excluded_mode = true;
          out.note = "xi = 0 mode excluded from homogeneous norm";
        }
        continue;
      }
      const double w = homogeneous ? std::hypot(xi.x, xi.y) : japanese_bracket(xi);
      sum.add(std::pow(w, s) * a);
    }
  }
  out.value = sum.result() * cell_factor(f.grid.dxi() * f.grid.dxi(), p);
  return out;
}

NormValue xsb_norm(const SpaceTimeField& u, double r, double s, double b) {
  if (u.rep != Rep::kFrequency) throw std::logic_error("xsb_norm: frequency rep required");
  const double p = dual_exponent(r);
  const auto& g = u.grid;
  PowerSum sum(p);
  for (int it = 0; it < g.nt; ++it) {
    for (int i1 = 0; i1 < g.nx; ++i1) {
      for (int i2 = 0; i2 < g.nx; ++i2) {
        const Point3 x = u.frequency(it, i1, i2);
        const double rho = std::hypot(x.xi1, x.xi2);
        const double mod = std::abs(x.tau) - rho;
        const double w = std::pow(1.0 + rho * rho, 0.5 * s) * std::pow(1.0 + mod * mod, 0.5 * b);
        sum.add(w * std::abs(u.at(it, i1, i2)));
      }
    }
  }
  NormValue out;
  out.kind = NormKind::kXsb;
  out.value = sum.result() * cell_factor(g.dtau() * g.dxi() * g.dxi(), p);
  return out;
}

NormValue z_norm(const SpaceTimeField& u, const SpaceTimeField& u_t, double r, double s, double b) {
  if (!(u.grid == u_t.grid)) throw std::invalid_argument("z_norm: grid mismatch");
  NormValue out;
  out.kind = NormKind::kZ;
  out.value = xsb_norm(u, r, s, b).value + xsb_norm(u_t, r, s - 1.0, b).value;
  return out;
}

double lebesgue_norm(const SpatialField& f, double rho) {
  if (f.rep != Rep::kPhysical) throw std::logic_error("lebesgue_norm: physical rep required");
  if (!(rho >= 1.0)) throw std::invalid_argument("lebesgue_norm: exponent must be >= 1");
  PowerSum sum(rho);
  for (const cplx& v : f.values) sum.add(std::abs(v));
  return sum.result() * cell_factor(f.grid.dx() * f.grid.dx(), rho);
}

double time_lebesgue_norm(std::span<const double> slice_norms, double dt, double q) {
  if (!(q >= 1.0)) throw std::invalid_argument("time_lebesgue_norm: exponent must be >= 1");
  PowerSum sum(q);
  for (double v : slice_norms) sum.add(v);
  return sum.result() * cell_factor(dt, q);
}

NormValue mixed_norm(const SpaceTimeField& u, double q_t, double rho_x) {
  if (u.rep != Rep::kPhysical) throw std::logic_error("mixed_norm: physical rep required");
  const auto& g = u.grid;
  std::vector<double> slices;
  slices.reserve(g.nt);
  SpatialField slice(spatial_of(g), Rep::kPhysical);
  for (int it = 0; it < g.nt; ++it) {
    std::copy_n(u.values.begin() + static_cast<std::ptrdiff_t>(u.index(it, 0, 0)), g.spatial_size(),
                slice.values.begin());
    slices.push_back(lebesgue_norm(slice, rho_x));
  }
  NormValue out;
  out.kind = NormKind::kMixed;
  out.value = time_lebesgue_norm(slices, g.dt(), q_t);
  if (std::isinf(rho_x)) out.note = "L^inf_x taken as the lattice maximum";
  return out;
}

Rational sobolev_correspondence(const Rational& s, const Rational& r, int n) {
  if (r < 1 || r > 2) throw std::invalid_argument("sobolev_correspondence: r must lie in [1, 2]");
  return s + n * (Rational(1, 2) - 1 / r);
}

Rational critical_exponent(const Rational& r, int n, EquationKind eq) {
  if (r <= 1 || r > 2) throw std::invalid_argument("critical_exponent: r must lie in (1, 2]");
  const Rational sc = n / r;
  return eq == EquationKind::kGradSquare ? sc : sc - 1;
}

ScalingReport scaling_law_check(const SpatialField& f, double s, double r, double lambda) {
  if (!is_dyadic(lambda)) throw std::invalid_argument("scaling_law_check: lambda must be 2^k");
  SpatialField base = f.rep == Rep::kFrequency ? f : transform(f, Direction::kForward);
  ScalingReport rep;
  rep.lambda = lambda;
  rep.expected = std::pow(lambda, s - 2.0 / r);
  const int n = base.grid.nx;
  // Nyquist lines count as occupied above round-off of the largest mode.
  double peak = 0.0;
  for (const auto& v : base.values) peak = std::max(peak, std::abs(v));
  const double floor = 1e-13 * peak;
  for (int i = 0; i < n; ++i) {
    if (std::abs(base.at(n / 2, i)) > floor || std::abs(base.at(i, n / 2)) > floor) rep.aliased = true;
  }
  if (rep.aliased) return rep;

  // Same samples on the compressed grid: identical unitary coefficients.
  SpatialField scaled = base;
  scaled.grid.period = base.grid.period / lambda;
  const double num = fl_norm(spectral_density(scaled), r, s, true).value;
  const double den = fl_norm(spectral_density(base), r, s, true).value;
  if (den == 0.0) throw std::invalid_argument("scaling_law_check: field has zero homogeneous norm");
  rep.ratio = num / den;
  rep.rel_error = std::abs(rep.ratio - rep.expected) / rep.expected;
  return rep;
}

}  // namespace conewave
