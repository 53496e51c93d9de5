#include "conewave/trilinear.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "conewave/parallel.hpp"

namespace conewave {

namespace {

void require_common_grid(const SpaceTimeField& a, const SpaceTimeField& b, const SpaceTimeField& c) {
  if (!(a.grid == b.grid) || !(a.grid == c.grid)) throw std::invalid_argument("eval_J: grid mismatch");
  if (a.rep != Rep::kFrequency || b.rep != Rep::kFrequency || c.rep != Rep::kFrequency) {
    throw std::logic_error("eval_J: fields must be in frequency rep");
  }
}

double cell(const GridSpec& g) { return g.dtau() * g.dxi() * g.dxi(); }

// Lattice index of -X for every X.
std::vector<std::size_t> negation_table(const GridSpec& g) {
  std::vector<std::size_t> out(g.size());
  for (int it = 0; it < g.nt; ++it) {
    for (int i1 = 0; i1 < g.nx; ++i1) {
      for (int i2 = 0; i2 < g.nx; ++i2) {
        const std::size_t from = (static_cast<std::size_t>(it) * g.nx + i1) * g.nx + i2;
        const std::size_t to = (static_cast<std::size_t>(wrap_index(-it, g.nt)) * g.nx + wrap_index(-i1, g.nx)) * g.nx +
                               wrap_index(-i2, g.nx);
        out[from] = to;
      }
    }
  }
  return out;
}

}  // namespace

cplx eval_J(const SpaceTimeField& f0, const SpaceTimeField& f1, const SpaceTimeField& f2, JMode mode) {
  require_common_grid(f0, f1, f2);
  const GridSpec& g = f0.grid;
  const double w = cell(g);
  if (mode == JMode::kFast) {
    std::vector<cplx> a = f0.values;
    std::vector<cplx> b = f1.values;
    std::vector<cplx> c = f2.values;
    const std::vector<int> dims{g.nt, g.nx, g.nx};
    unitary_dft(a, dims, 1);
    unitary_dft(b, dims, 1);
    unitary_dft(c, dims, 1);
    cplx sum{};
    for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i] * c[i];
    return sum * (w * w * std::sqrt(static_cast<double>(g.size())));
  }
  cplx sum{};
  for (int t0 = 0; t0 < g.nt; ++t0) {
    for (int a0 = 0; a0 < g.nx; ++a0) {
      for (int b0 = 0; b0 < g.nx; ++b0) {
        const cplx v0 = f0.at(t0, a0, b0);
        if (v0 == cplx{}) continue;
        cplx inner{};
        for (int t1 = 0; t1 < g.nt; ++t1) {
          const int t2 = wrap_index(-t0 - t1, g.nt);
          for (int a1 = 0; a1 < g.nx; ++a1) {
            const int a2 = wrap_index(-a0 - a1, g.nx);
            for (int b1 = 0; b1 < g.nx; ++b1) {
              inner += f1.at(t1, a1, b1) * f2.at(t2, a2, wrap_index(-b0 - b1, g.nx));
            }
          }
        }
        sum += v0 * inner;
      }
    }
  }
  return sum * (w * w);
}

EstimateForm EstimateForm::make(EstimateKind kind, const Rational& r) {
  if (r <= 1 || r > 2) throw std::invalid_argument("EstimateForm: r must lie in (1, 2]");
  const Rational p = r / (r - 1);
  EstimateForm f;
  f.kind = kind;
  f.r = r;
  if (kind == EstimateKind::kEasy) {
    f.n012_min = 2 / p;
    f.n12_min = 2 / r - 2 / p;
    f.l_min = 1 / r;
    f.l_max = 0;
  } else {
    f.n012_min = 1 / p;
    f.n12_min = Rational(3, 2) / r - 1 / p;
    f.l_min = 1 / r;
    f.l_max = Rational(1, 2) / r;
  }
  return f;
}

double predicted_constant(const EstimateForm& form, const std::array<double, 3>& N, const std::array<double, 2>& L) {
  auto log2_exact = [](double v) {
    if (!is_dyadic(v)) throw std::invalid_argument("predicted_constant: N and L must be dyadic");
    int e = 0;
    std::frexp(v, &e);
    return Rational(e - 1);
  };
  const double n012 = std::min({N[0], N[1], N[2]});
  const double n12 = std::min(N[1], N[2]);
  const Rational total = form.n012_min * log2_exact(n012) + form.n12_min * log2_exact(n12) +
                         form.l_min * log2_exact(std::min(L[0], L[1])) +
                         form.l_max * log2_exact(std::max(L[0], L[1]));
  return std::exp2(to_double(total));
}

std::array<FrequencyRegion, 3> constant_regions(const ConstantSetup& setup) {
  return {band(setup.N[0], BandMeasure::kMagnitude), annular_cone(setup.signs[1], setup.N[1], setup.L[0]),
          annular_cone(setup.signs[2], setup.N[2], setup.L[1])};
}

namespace {

// Alternating ascent state for one restart.
class Ascent {
 public:
  Ascent(const GridSpec& g, const std::array<std::vector<char>, 3>& masks, double r)
      : g_(g), masks_(masks), neg_(negation_table(g)), w_(cell(g)) {
    const double p = r / (r - 1.0);
    q_ = {r, p, p};
    dims_ = {g.nt, g.nx, g.nx};
  }

  void init(std::array<std::vector<double>, 3> start) {
    f_ = std::move(start);
    for (int j = 0; j < 3; ++j) {
      normalise(j);
      refresh(j);
    }
  }

  // Replaces slot j by its duality extremiser; returns the new ratio, or a
  // negative value when the kernel vanishes on the slot's support.
  double step(int j) {
    const int a = (j + 1) % 3;
    const int b = (j + 2) % 3;
    std::vector<cplx> conv(g_.size());
    const double root_m = std::sqrt(static_cast<double>(g_.size()));
    for (std::size_t i = 0; i < conv.size(); ++i) conv[i] = hat_[a][i] * hat_[b][i] * root_m;
    unitary_dft(conv, dims_, 1);
    std::vector<double>& f = f_[j];
    const double q = q_[j];
    const double qd = q / (q - 1.0);
    double gmax = 0.0;
    std::vector<double> kernel(g_.size(), 0.0);
    for (std::size_t i = 0; i < kernel.size(); ++i) {
      if (!masks_[j][i]) continue;
      kernel[i] = std::max(0.0, w_ * conv[neg_[i]].real());
      gmax = std::max(gmax, kernel[i]);
    }
    if (gmax == 0.0) return -1.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < kernel.size(); ++i) {
      const double k = kernel[i] / gmax;
      f[i] = std::pow(k, 1.0 / (q - 1.0));
      if (k > 0.0) acc += std::pow(k, qd);
    }
    normalise(j);
    refresh(j);
    return gmax * std::pow(acc * w_, 1.0 / qd);
  }

  const std::array<std::vector<double>, 3>& fields() const { return f_; }

 private:
  void normalise(int j) {
    double m = 0.0;
    for (double v : f_[j]) m = std::max(m, v);
    if (m == 0.0) return;
    double acc = 0.0;
    for (double v : f_[j]) acc += std::pow(v / m, q_[j]);
    const double norm = m * std::pow(acc * w_, 1.0 / q_[j]);
    for (double& v : f_[j]) v /= norm;
  }

  void refresh(int j) {
    hat_[j].assign(f_[j].begin(), f_[j].end());
    unitary_dft(hat_[j], dims_, -1);
  }

  GridSpec g_;
  const std::array<std::vector<char>, 3>& masks_;
  std::vector<std::size_t> neg_;
  double w_;
  std::array<double, 3> q_{};
  std::vector<int> dims_;
  std::array<std::vector<double>, 3> f_;
  std::array<std::vector<cplx>, 3> hat_;
};

}  // namespace

ConstantMeasurement best_constant(const GridSpec& grid, const FrequencyRegion& a0, const FrequencyRegion& a1,
                                  const FrequencyRegion& a2, const Rational& r, const OptimizerConfig& config) {
  grid.validate();
  if (r <= 1 || r > 2) throw std::invalid_argument("best_constant: r must lie in (1, 2]");
  if (config.restarts < 1 || config.max_iters < 1 || !(config.tol > 0.0)) {
    throw std::invalid_argument("best_constant: restarts, max_iters and tol must be positive");
  }
  ConstantMeasurement out;
  out.r = r;
  out.seed = config.seed;
  out.restarts = config.restarts;

  const SpaceTimeField probe(grid, Rep::kFrequency);
  std::array<std::vector<char>, 3> masks;
  const std::array<const FrequencyRegion*, 3> regions{&a0, &a1, &a2};
  for (int j = 0; j < 3; ++j) {
    masks[j].assign(grid.size(), 0);
    for (int it = 0; it < grid.nt; ++it) {
      for (int i1 = 0; i1 < grid.nx; ++i1) {
        for (int i2 = 0; i2 < grid.nx; ++i2) {
          masks[j][probe.index(it, i1, i2)] = regions[j]->contains(probe.frequency(it, i1, i2)) ? 1 : 0;
        }
      }
    }
    if (std::find(masks[j].begin(), masks[j].end(), 1) == masks[j].end()) {
      out.degenerate = true;
      return out;
    }
  }

  const double rd = to_double(r);
  double best = -1.0;
  for (int restart = 0; restart < config.restarts; ++restart) {
    std::array<std::vector<double>, 3> start;
    std::mt19937_64 eng(mix_seed(config.seed, static_cast<std::uint64_t>(restart)));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int j = 0; j < 3; ++j) {
      start[j].assign(grid.size(), 0.0);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const double v = restart == 0 ? 1.0 : unif(eng);
        if (masks[j][i]) start[j][i] = v;
      }
    }
    Ascent ascent(grid, masks, rd);
    ascent.init(std::move(start));
    std::vector<double> history;
    bool converged = false;
    bool degenerate = false;
    int iters = 0;
    double last_cycle = 0.0;
    for (; iters < config.max_iters && !converged && !degenerate; ++iters) {
      double value = 0.0;
      for (int j = 0; j < 3 && !degenerate; ++j) {
        value = ascent.step(j);
        if (value < 0.0) {
          degenerate = true;
        } else {
          history.push_back(value);
        }
      }
      if (!degenerate && iters > 0 && std::abs(value - last_cycle) <= config.tol * value) converged = true;
      last_cycle = value;
    }
    if (degenerate) {
      if (best < 0.0) {
        out.degenerate = true;
        out.history = history;
        out.iterations = iters;
      }
      continue;
    }
    if (last_cycle > best) {
      best = last_cycle;
      out.measured_C = last_cycle;
      out.iterations = iters;
      out.converged = converged;
      out.history = std::move(history);
      out.degenerate = false;
    }
  }
  if (best < 0.0) out.measured_C = 0.0;
  return out;
}

ConstantMeasurement measure_constant(const GridSpec& grid, const ConstantSetup& setup, const Rational& r,
                                     const OptimizerConfig& config) {
  const auto regions = constant_regions(setup);
  ConstantMeasurement m = best_constant(grid, regions[0], regions[1], regions[2], r, config);
  m.N = setup.N;
  m.L = setup.L;
  m.signs = setup.signs;
  return m;
}

double axis_value(const ConstantMeasurement& m, const std::string& axis) {
  if (axis == "N0") return m.N[0];
  if (axis == "N1") return m.N[1];
  if (axis == "N2") return m.N[2];
  if (axis == "L1") return m.L[0];
  if (axis == "L2") return m.L[1];
  throw std::invalid_argument("unknown axis '" + axis + "'");
}

ExponentFit exponent_regression(const std::vector<ConstantMeasurement>& measurements,
                                const std::vector<std::string>& varied_axes) {
  const auto rows = static_cast<Eigen::Index>(measurements.size());
  const auto k = static_cast<Eigen::Index>(varied_axes.size());
  if (k == 0) throw std::invalid_argument("exponent_regression: no varied axes");
  if (rows < k + 1) throw std::invalid_argument("exponent_regression: fewer measurements than unknowns");
  Eigen::MatrixXd a(rows, k + 1);
  Eigen::VectorXd y(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& m = measurements[static_cast<std::size_t>(i)];
    if (!(m.measured_C > 0.0)) throw std::invalid_argument("exponent_regression: constants must be positive");
    y(i) = std::log2(m.measured_C);
    a(i, 0) = 1.0;
    for (Eigen::Index j = 0; j < k; ++j) {
      const double v = axis_value(m, varied_axes[static_cast<std::size_t>(j)]);
      if (!(v > 0.0)) throw std::invalid_argument("exponent_regression: axis values must be positive");
      a(i, j + 1) = std::log2(v);
    }
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  qr.setThreshold(1e-10);
  if (qr.rank() < k + 1) {
    throw std::invalid_argument("exponent_regression: degenerate design (an axis is constant or axes are collinear)");
  }
  const Eigen::VectorXd beta = qr.solve(y);
  ExponentFit fit;
  fit.axes = varied_axes;
  fit.intercept = beta(0);
  for (Eigen::Index j = 0; j < k; ++j) fit.exponents.push_back(beta(j + 1));
  const double mean = y.mean();
  const double ss_tot = (y.array() - mean).square().sum();
  const double ss_res = (y - a * beta).squaredNorm();
  fit.r2 = ss_tot <= 0.0 ? 1.0 : std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0);
  return fit;
}

}  // namespace conewave
