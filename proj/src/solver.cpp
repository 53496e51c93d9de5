#include "conewave/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "conewave/norms.hpp"
#include "conewave/parallel.hpp"
#include "conewave/regression.hpp"

namespace conewave {

namespace {

using Coeffs = std::vector<cplx>;

// Wavenumbers of a spatial grid in storage order.
struct Spectrum {
  SpatialGrid grid;
  std::vector<double> xi1;
  std::vector<double> xi2;
  std::vector<double> xi_abs;
  std::vector<char> keep;      // 2/3-rule band
  std::vector<char> nyquist;   // on a Nyquist line

  explicit Spectrum(const SpatialGrid& g) : grid(g) {
    const int n = g.nx;
    xi1.resize(g.size());
    xi2.resize(g.size());
    xi_abs.resize(g.size());
    keep.resize(g.size());
    nyquist.resize(g.size());
    for (int i1 = 0; i1 < n; ++i1) {
      for (int i2 = 0; i2 < n; ++i2) {
        const std::size_t i = static_cast<std::size_t>(i1) * n + i2;
        const int k1 = signed_index(i1, n);
        const int k2 = signed_index(i2, n);
        xi1[i] = g.dxi() * k1;
        xi2[i] = g.dxi() * k2;
        xi_abs[i] = std::hypot(xi1[i], xi2[i]);
        keep[i] = 3 * std::abs(k1) < n && 3 * std::abs(k2) < n;
        nyquist[i] = i1 == n / 2 || i2 == n / 2;
      }
    }
  }

  std::size_t size() const { return grid.size(); }
  std::vector<int> dims() const { return {grid.nx, grid.nx}; }
};

Coeffs forward(const SpatialField& f) {
  if (f.rep != Rep::kPhysical) throw std::logic_error("solver: physical field expected");
  Coeffs c = f.values;
  unitary_dft(c, {f.grid.nx, f.grid.nx}, -1);
  return c;
}

// Inverse transform keeping the real part: every physical field here is real.
Coeffs real_inverse(Coeffs c, const Spectrum& sp) {
  unitary_dft(c, sp.dims(), 1);
  for (auto& v : c) v = cplx(v.real(), 0.0);
  return c;
}

SpatialField to_physical(const Coeffs& c, const Spectrum& sp) {
  SpatialField out(sp.grid, Rep::kPhysical);
  out.values = real_inverse(c, sp);
  return out;
}

void truncate(Coeffs& c, const Spectrum& sp) {
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (!sp.keep[i]) c[i] = cplx{};
  }
}

// i xi_j c, with the Nyquist lines zeroed so real fields stay real.
Coeffs derivative(const Coeffs& c, const Spectrum& sp, int axis) {
  Coeffs out(c.size());
  const auto& xi = axis == 1 ? sp.xi1 : sp.xi2;
  for (std::size_t i = 0; i < c.size(); ++i) {
    out[i] = sp.nyquist[i] ? cplx{} : cplx(0.0, xi[i]) * c[i];
  }
  return out;
}

Coeffs nonlinearity_hat(Coeffs uh, Coeffs uth, const Nonlinearity& kind, bool dealias, const Spectrum& sp) {
  if (dealias) {
    truncate(uh, sp);
    truncate(uth, sp);
  }
  const std::size_t m = sp.size();
  Coeffs prod(m);
  switch (kind.kind) {
    case NonlinearityKind::kFullGradSquare:
    case NonlinearityKind::kSpatialGradSquare: {
      const Coeffs d1 = real_inverse(derivative(uh, sp, 1), sp);
      const Coeffs d2 = real_inverse(derivative(uh, sp, 2), sp);
      for (std::size_t i = 0; i < m; ++i) {
        prod[i] = d1[i].real() * d1[i].real() + d2[i].real() * d2[i].real();
      }
      if (kind.kind == NonlinearityKind::kFullGradSquare) {
        const Coeffs ut = real_inverse(uth, sp);
        for (std::size_t i = 0; i < m; ++i) prod[i] += ut[i].real() * ut[i].real();
      }
      unitary_dft(prod, sp.dims(), -1);
      break;
    }
    case NonlinearityKind::kDerivOfSquare: {
      const Coeffs u = real_inverse(uh, sp);
      if (kind.axis == Axis::kT) {
        const Coeffs ut = real_inverse(uth, sp);
        for (std::size_t i = 0; i < m; ++i) prod[i] = 2.0 * u[i].real() * ut[i].real();
        unitary_dft(prod, sp.dims(), -1);
      } else {
        for (std::size_t i = 0; i < m; ++i) prod[i] = u[i].real() * u[i].real();
        unitary_dft(prod, sp.dims(), -1);
        prod = derivative(prod, sp, kind.axis == Axis::kX1 ? 1 : 2);
      }
      break;
    }
  }
  if (dealias) truncate(prod, sp);
  return prod;
}

// Trapezoid Duhamel sums at slice k from precomputed lag multipliers.
struct Duhamel {
  const Spectrum& sp;
  double dt;
  std::vector<std::vector<double>> cos_lag;
  std::vector<std::vector<double>> sin_lag;

  Duhamel(const Spectrum& s, double step, std::size_t slices) : sp(s), dt(step) {
    cos_lag.resize(slices);
    sin_lag.resize(slices);
    for (std::size_t lag = 0; lag < slices; ++lag) {
      cos_lag[lag].resize(sp.size());
      sin_lag[lag].resize(sp.size());
      for (std::size_t i = 0; i < sp.size(); ++i) {
        const auto [c, s_over] = halfwave_multipliers(dt * static_cast<double>(lag), sp.xi_abs[i]);
        cos_lag[lag][i] = c;
        sin_lag[lag][i] = s_over;
      }
    }
  }

  std::pair<Coeffs, Coeffs> apply(const std::vector<Coeffs>& forcing, std::size_t k) const {
    Coeffs w(sp.size());
    Coeffs wt(sp.size());
    if (k == 0) return {w, wt};
    for (std::size_t m = 0; m <= k; ++m) {
      const double weight = (m == 0 || m == k) ? 0.5 * dt : dt;
      const auto& c = cos_lag[k - m];
      const auto& s = sin_lag[k - m];
      const Coeffs& f = forcing[m];
      for (std::size_t i = 0; i < sp.size(); ++i) {
        w[i] += weight * s[i] * f[i];
        wt[i] += weight * c[i] * f[i];
      }
    }
    return {w, wt};
  }
};

// Energy-type norm (|grad u|^2 + |u_t|^2)^{1/2} in Fourier space.
double energy_norm(const Coeffs& uh, const Coeffs& uth, const Spectrum& sp) {
  double acc = 0.0;
  for (std::size_t i = 0; i < sp.size(); ++i) {
    acc += sp.xi_abs[i] * sp.xi_abs[i] * std::norm(uh[i]) + std::norm(uth[i]);
  }
  return std::sqrt(acc);
}

void free_hat(const Coeffs& fh, const Coeffs& gh, double t, const Spectrum& sp, Coeffs& uh, Coeffs& uth) {
  uh.resize(sp.size());
  uth.resize(sp.size());
  for (std::size_t i = 0; i < sp.size(); ++i) {
    const auto [c, s_over] = halfwave_multipliers(t, sp.xi_abs[i]);
    const double d_sin = sp.xi_abs[i] * sp.xi_abs[i] * s_over;
    uh[i] = c * fh[i] + s_over * gh[i];
    uth[i] = -d_sin * fh[i] + c * gh[i];
  }
}

void require_data(const CauchyData& data) {
  if (!(data.f.grid == data.g.grid)) throw std::invalid_argument("Cauchy data grids differ");
  data.f.grid.validate();
  if (data.f.rep != Rep::kPhysical || data.g.rep != Rep::kPhysical) {
    throw std::logic_error("Cauchy data must be in physical rep");
  }
}

double unit_from_hash(std::uint64_t h) { return static_cast<double>(h >> 11) * 0x1.0p-53; }

}  // namespace

void SolverConfig::validate() const {
  if (!(T > 0.0)) throw std::invalid_argument("solver: T must be positive");
  if (n_steps < 2) throw std::invalid_argument("solver: n_steps must be >= 2");
  if (!(picard_tol > 0.0)) throw std::invalid_argument("solver: picard_tol must be positive");
  if (picard_max < 1) throw std::invalid_argument("solver: picard_max must be >= 1");
}

std::pair<double, double> halfwave_multipliers(double t, double xi_norm) {
  if (xi_norm == 0.0) return {1.0, t};
  return {std::cos(t * xi_norm), std::sin(t * xi_norm) / xi_norm};
}

std::pair<SpatialField, SpatialField> free_solution(const CauchyData& data, double t) {
  require_data(data);
  const Spectrum sp(data.f.grid);
  Coeffs uh;
  Coeffs uth;
  free_hat(forward(data.f), forward(data.g), t, sp, uh, uth);
  return {to_physical(uh, sp), to_physical(uth, sp)};
}

SpatialField nonlinearity_eval(const SpatialField& u, const SpatialField& u_t, const Nonlinearity& kind,
                               bool dealias) {
  if (!(u.grid == u_t.grid)) throw std::invalid_argument("nonlinearity_eval: grid mismatch");
  const Spectrum sp(u.grid);
  return to_physical(nonlinearity_hat(forward(u), forward(u_t), kind, dealias, sp), sp);
}

std::pair<SpatialField, SpatialField> duhamel_apply(const std::vector<SpatialField>& forcing, double dt,
                                                    std::size_t k) {
  if (k >= forcing.size()) throw std::invalid_argument("duhamel_apply: slice index out of range");
  const Spectrum sp(forcing.front().grid);
  std::vector<Coeffs> fh;
  fh.reserve(k + 1);
  for (std::size_t m = 0; m <= k; ++m) fh.push_back(forward(forcing[m]));
  const Duhamel duhamel(sp, dt, k + 1);
  auto [w, wt] = duhamel.apply(fh, k);
  return {to_physical(w, sp), to_physical(wt, sp)};
}

std::pair<Trajectory, PicardReport> picard_solve(const CauchyData& data, const Nonlinearity& kind,
                                                 const SolverConfig& config) {
  require_data(data);
  config.validate();
  const Spectrum sp(data.f.grid);
  const auto n = static_cast<std::size_t>(config.n_steps);
  const double dt = config.T / static_cast<double>(n);
  const Coeffs fh = forward(data.f);
  const Coeffs gh = forward(data.g);

  std::vector<Coeffs> free_u(n + 1);
  std::vector<Coeffs> free_ut(n + 1);
  for (std::size_t k = 0; k <= n; ++k) free_hat(fh, gh, dt * static_cast<double>(k), sp, free_u[k], free_ut[k]);

  std::vector<Coeffs> u = free_u;
  std::vector<Coeffs> ut = free_ut;
  const Duhamel duhamel(sp, dt, n + 1);
  PicardReport report;
  std::vector<Coeffs> forcing(n + 1);
  for (int iter = 0; iter < config.picard_max; ++iter) {
    for (std::size_t k = 0; k <= n; ++k) forcing[k] = nonlinearity_hat(u[k], ut[k], kind, config.dealias, sp);
    double diff = 0.0;
    double scale = 0.0;
    std::vector<Coeffs> next_u(n + 1);
    std::vector<Coeffs> next_ut(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
      auto [w, wt] = duhamel.apply(forcing, k);
      next_u[k] = free_u[k];
      next_ut[k] = free_ut[k];
      Coeffs du(sp.size());
      Coeffs dut(sp.size());
      for (std::size_t i = 0; i < sp.size(); ++i) {
        next_u[k][i] += w[i];
        next_ut[k][i] += wt[i];
        du[i] = next_u[k][i] - u[k][i];
        dut[i] = next_ut[k][i] - ut[k][i];
      }
      diff = std::max(diff, energy_norm(du, dut, sp));
      scale = std::max(scale, energy_norm(next_u[k], next_ut[k], sp));
    }
    const double residual = scale > 0.0 ? diff / scale : diff;
    const bool finite = std::isfinite(residual);
    const bool grew = !report.residuals.empty() && residual > report.residuals.back();
    report.residuals.push_back(finite ? residual : std::numeric_limits<double>::infinity());
    if (!finite || grew) break;
    u = std::move(next_u);
    ut = std::move(next_ut);
    if (residual < config.picard_tol) {
      report.converged = true;
      break;
    }
  }

  Trajectory traj;
  traj.provenance = Provenance::kPicard;
  for (std::size_t k = 0; k <= n; ++k) {
    traj.times.push_back(dt * static_cast<double>(k));
    traj.u.push_back(to_physical(u[k], sp));
    traj.u_t.push_back(to_physical(ut[k], sp));
  }
  // The first slice is the data itself, not its round trip.
  traj.u.front() = data.f;
  traj.u_t.front() = data.g;
  return {std::move(traj), std::move(report)};
}

Trajectory rk4_solve(const CauchyData& data, const std::optional<Nonlinearity>& kind, const SolverConfig& config,
                     int substeps) {
  require_data(data);
  config.validate();
  if (substeps < 1) throw std::invalid_argument("rk4_solve: substeps must be >= 1");
  const Spectrum sp(data.f.grid);
  const auto n = static_cast<std::size_t>(config.n_steps);
  const double h = config.T / static_cast<double>(n) / substeps;
  Coeffs uh = forward(data.f);
  Coeffs uth = forward(data.g);
  const std::size_t m = sp.size();

  auto rhs = [&](const Coeffs& a, const Coeffs& at, Coeffs& da, Coeffs& dat) {
    da = at;
    dat.resize(m);
    Coeffs f;
    if (kind) f = nonlinearity_hat(a, at, *kind, config.dealias, sp);
    for (std::size_t i = 0; i < m; ++i) {
      dat[i] = -sp.xi_abs[i] * sp.xi_abs[i] * a[i] + (kind ? f[i] : cplx{});
    }
  };
  auto axpy = [m](const Coeffs& x, double s, const Coeffs& y) {
    Coeffs out(m);
    for (std::size_t i = 0; i < m; ++i) out[i] = x[i] + s * y[i];
    return out;
  };

  Trajectory traj;
  traj.provenance = Provenance::kRk4;
  traj.times.push_back(0.0);
  traj.u.push_back(data.f);
  traj.u_t.push_back(data.g);
  const double start = energy_norm(uh, uth, sp) + std::sqrt(std::norm(uh[0]));
  Coeffs k1u, k1v, k2u, k2v, k3u, k3v, k4u, k4v;
  for (std::size_t step = 1; step <= n; ++step) {
    for (int sub = 0; sub < substeps; ++sub) {
      rhs(uh, uth, k1u, k1v);
      rhs(axpy(uh, 0.5 * h, k1u), axpy(uth, 0.5 * h, k1v), k2u, k2v);
      rhs(axpy(uh, 0.5 * h, k2u), axpy(uth, 0.5 * h, k2v), k3u, k3v);
      rhs(axpy(uh, h, k3u), axpy(uth, h, k3v), k4u, k4v);
      for (std::size_t i = 0; i < m; ++i) {
        uh[i] += h / 6.0 * (k1u[i] + 2.0 * k2u[i] + 2.0 * k3u[i] + k4u[i]);
        uth[i] += h / 6.0 * (k1v[i] + 2.0 * k2v[i] + 2.0 * k3v[i] + k4v[i]);
      }
    }
    const double size = energy_norm(uh, uth, sp) + std::sqrt(std::norm(uh[0]));
    traj.times.push_back(config.T * static_cast<double>(step) / static_cast<double>(n));
    traj.u.push_back(to_physical(uh, sp));
    traj.u_t.push_back(to_physical(uth, sp));
    if (!std::isfinite(size) || size > 1e12 * std::max(start, 1e-300)) {
      traj.blew_up = true;
      break;
    }
  }
  return traj;
}

double energy(const SpatialField& u, const SpatialField& u_t) {
  if (!(u.grid == u_t.grid)) throw std::invalid_argument("energy: grid mismatch");
  const Spectrum sp(u.grid);
  const Coeffs uh = forward(u);
  const Coeffs d1 = real_inverse(derivative(uh, sp, 1), sp);
  const Coeffs d2 = real_inverse(derivative(uh, sp, 2), sp);
  double acc = 0.0;
  for (std::size_t i = 0; i < sp.size(); ++i) {
    const double v = u_t.values[i].real();
    acc += v * v + d1[i].real() * d1[i].real() + d2[i].real() * d2[i].real();
  }
  return 0.5 * acc * u.grid.dx() * u.grid.dx();
}

CauchyData random_data(const SpatialGrid& grid, double s, double r, std::uint64_t seed, double band_limit,
                       double delta) {
  grid.validate();
  const double nyquist = grid.dxi() * (grid.nx / 2);
  if (!(band_limit > 0.0) || band_limit >= nyquist) {
    throw std::invalid_argument("random_data: band_limit must lie below the Nyquist frequency");
  }
  const double p = dual_exponent(r);
  const double decay = 2.0 / p + delta;
  SpatialField fd(grid, Rep::kFrequency);
  SpatialField gd(grid, Rep::kFrequency);
  const int n = grid.nx;
  for (int i1 = 0; i1 < n; ++i1) {
    for (int i2 = 0; i2 < n; ++i2) {
      if (i1 == n / 2 || i2 == n / 2) continue;
      const int k1 = signed_index(i1, n);
      const int k2 = signed_index(i2, n);
      const Vec2 xi = fd.frequency(i1, i2);
      if (std::hypot(xi.x, xi.y) > band_limit) continue;
      // Canonical member of the pair {k, -k} carries the phase.
      const bool canonical = k1 > 0 || (k1 == 0 && k2 >= 0);
      const int c1 = canonical ? k1 : -k1;
      const int c2 = canonical ? k2 : -k2;
      const std::uint64_t h = mix_seed(mix_seed(seed, static_cast<std::uint64_t>(c1 + (1 << 20))),
                                       static_cast<std::uint64_t>(c2 + (1 << 20)));
      double theta = 2.0 * std::numbers::pi * unit_from_hash(h);
      double phi = 2.0 * std::numbers::pi * unit_from_hash(mix_seed(h, 1));
      if (k1 == 0 && k2 == 0) {
        theta = 0.0;
        phi = 0.0;
      }
      const double sign = canonical ? 1.0 : -1.0;
      const double b = japanese_bracket(xi);
      fd.at(i1, i2) = std::pow(b, -s - decay) * std::polar(1.0, sign * theta);
      gd.at(i1, i2) = std::pow(b, -(s - 1.0) - decay) * std::polar(1.0, sign * phi);
    }
  }
  CauchyData out{transform(from_spectral_density(fd), Direction::kInverse),
                 transform(from_spectral_density(gd), Direction::kInverse)};
  for (auto& v : out.f.values) v = cplx(v.real(), 0.0);
  for (auto& v : out.g.values) v = cplx(v.real(), 0.0);
  return out;
}

CauchyData plane_wave_data(const SpatialGrid& grid, int k1, int k2, double amplitude) {
  grid.validate();
  CauchyData out{SpatialField(grid, Rep::kPhysical), SpatialField(grid, Rep::kPhysical)};
  for (int i1 = 0; i1 < grid.nx; ++i1) {
    for (int i2 = 0; i2 < grid.nx; ++i2) {
      const double phase = 2.0 * std::numbers::pi * (k1 * i1 + k2 * i2) / grid.nx;
      out.f.at(i1, i2) = amplitude * std::cos(phase);
    }
  }
  return out;
}

CauchyData scaled(const CauchyData& data, double a) {
  CauchyData out = data;
  for (auto& v : out.f.values) v *= a;
  for (auto& v : out.g.values) v *= a;
  return out;
}

ExistenceTable existence_probe(const CauchyData& data, const Nonlinearity& kind, const SolverConfig& config,
                               const std::vector<double>& amplitudes, int bisection_steps) {
  if (!std::is_sorted(amplitudes.begin(), amplitudes.end())) {
    throw std::invalid_argument("existence_probe: amplitudes must be increasing");
  }
  ExistenceTable table;
  auto run = [&](double a) {
    const auto [traj, report] = picard_solve(scaled(data, a), kind, config);
    ExistenceRow row;
    row.amplitude = a;
    row.converged = report.converged;
    row.iterations = static_cast<int>(report.residuals.size());
    row.last_residual = report.residuals.empty() ? 0.0 : report.residuals.back();
    return row;
  };
  for (double a : amplitudes) table.rows.push_back(run(a));
  for (std::size_t i = 1; i < table.rows.size(); ++i) {
    if (table.rows[i - 1].converged && !table.rows[i].converged) {
      double lo = table.rows[i - 1].amplitude;
      double hi = table.rows[i].amplitude;
      for (int step = 0; step < bisection_steps; ++step) {
        const double mid = 0.5 * (lo + hi);
        (run(mid).converged ? lo : hi) = mid;
      }
      table.threshold = 0.5 * (lo + hi);
      break;
    }
  }
  return table;
}

CauchyData rescaled_data(const CauchyData& data, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("rescaled_data: lambda must be positive");
  CauchyData out = data;
  out.f.grid.period /= lambda;
  out.g.grid.period /= lambda;
  for (auto& v : out.g.values) v *= lambda;
  return out;
}

StrichartzTable strichartz_probe(int ensemble_size, double q_t, const std::vector<int>& ladder, std::uint64_t seed,
                                 double T, int n_slices, int workers) {
  if (ensemble_size < 1) throw std::invalid_argument("strichartz_probe: ensemble must be nonempty");
  if (!(q_t >= 4.0) || std::isinf(q_t)) throw std::invalid_argument("strichartz_probe: q_t must be finite and >= 4");
  if (ladder.size() < 2) throw std::invalid_argument("strichartz_probe: ladder needs two rungs");
  StrichartzTable table;
  table.q_t = q_t;
  table.T = T;
  const std::size_t tasks = ladder.size() * static_cast<std::size_t>(ensemble_size);
  std::vector<double> ratios(tasks);
  parallel_for(tasks, workers, [&](std::size_t task) {
    const int nx = ladder[task / static_cast<std::size_t>(ensemble_size)];
    const auto member = static_cast<std::uint64_t>(task % static_cast<std::size_t>(ensemble_size));
    const SpatialGrid grid{nx, 2.0 * std::numbers::pi};
    const Spectrum sp(grid);
    const double band = grid.dxi() * (nx / 3);
    const CauchyData data = random_data(grid, 1.75, 2.0, mix_seed(seed, member), band);
    const double data_norm =
        fl_norm(spectral_density(transform(data.f, Direction::kForward)), 2.0, 1.75).value +
        fl_norm(spectral_density(transform(data.g, Direction::kForward)), 2.0, 0.75).value;
    const Coeffs fh = forward(data.f);
    const Coeffs gh = forward(data.g);
    const int slices = std::max(2, static_cast<int>(std::lround(n_slices * T)));
    const double dt = T / slices;
    std::vector<double> sup(static_cast<std::size_t>(slices) + 1);
    Coeffs uh;
    Coeffs uth;
    for (int k = 0; k <= slices; ++k) {
      free_hat(fh, gh, dt * k, sp, uh, uth);
      const Coeffs d1 = real_inverse(derivative(uh, sp, 1), sp);
      const Coeffs d2 = real_inverse(derivative(uh, sp, 2), sp);
      double m = 0.0;
      for (std::size_t i = 0; i < sp.size(); ++i) m = std::max(m, std::hypot(d1[i].real(), d2[i].real()));
      sup[static_cast<std::size_t>(k)] = m;
    }
    // Trapezoid weights on the slices for the time integral.
    double acc = 0.0;
    for (int k = 0; k <= slices; ++k) {
      const double w = (k == 0 || k == slices) ? 0.5 : 1.0;
      acc += w * std::pow(sup[static_cast<std::size_t>(k)], q_t);
    }
    const double mixed = std::pow(acc * dt, 1.0 / q_t);
    ratios[task] = mixed / data_norm;
  });

  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t rung = 0; rung < ladder.size(); ++rung) {
    StrichartzRow row;
    row.nx = ladder[rung];
    row.ratios.assign(ratios.begin() + static_cast<std::ptrdiff_t>(rung * ensemble_size),
                      ratios.begin() + static_cast<std::ptrdiff_t>((rung + 1) * ensemble_size));
    std::vector<double> logs;
    for (double v : row.ratios) logs.push_back(std::log2(v));
    std::sort(logs.begin(), logs.end());
    const std::size_t half = logs.size() / 2;
    row.median_log2_ratio = logs.size() % 2 == 1 ? logs[half] : 0.5 * (logs[half - 1] + logs[half]);
    lx.push_back(std::log2(static_cast<double>(row.nx)));
    ly.push_back(row.median_log2_ratio);
    table.rows.push_back(std::move(row));
  }
  const LinearFit fit = fit_line(lx, ly);
  table.slope = fit.slope;
  table.r2 = fit.r2;
  return table;
}

bool wave_admissible(std::optional<Rational> p, std::optional<Rational> q, int n) {
  if (n < 2) throw std::invalid_argument("wave_admissible: dimension must be >= 2");
  if (!q) return false;
  if (*q < 2) return false;
  if (p && *p < 2) return false;
  const Rational time_part = p ? Rational(2) / *p : Rational(0);
  return time_part + Rational(n - 1) / *q <= Rational(n - 1, 2);
}

}  // namespace conewave
