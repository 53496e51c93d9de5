#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "conewave/grid.hpp"
#include "conewave/rational.hpp"

namespace conewave {

/// (u, u_t) at t = 0, physical rep, real valued.
struct CauchyData {
  SpatialField f;
  SpatialField g;
};

enum class NonlinearityKind {
  kFullGradSquare,     ///< (u_t)^2 + |grad u|^2
  kSpatialGradSquare,  ///< |grad u|^2
  kDerivOfSquare,      ///< d_j (u^2)
};

enum class Axis { kT, kX1, kX2 };

struct Nonlinearity {
  NonlinearityKind kind = NonlinearityKind::kFullGradSquare;
  Axis axis = Axis::kX1;  ///< direction j for kDerivOfSquare
};

struct SolverConfig {
  double T = 0.1;
  int n_steps = 64;
  double picard_tol = 1e-10;
  int picard_max = 50;
  bool dealias = true;

  void validate() const;
};

enum class Provenance { kPicard, kRk4, kFree };

/// Slices t_k = k T / n_steps, k = 0..n_steps, physical rep.
struct Trajectory {
  std::vector<double> times;
  std::vector<SpatialField> u;
  std::vector<SpatialField> u_t;
  Provenance provenance = Provenance::kFree;
  bool blew_up = false;
};

struct PicardReport {
  std::vector<double> residuals;
  bool converged = false;
};

/// (cos(t|xi|), sin(t|xi|)/|xi|), the second taken as t at xi = 0.
std::pair<double, double> halfwave_multipliers(double t, double xi_norm);

/// cos(tD) f + D^{-1} sin(tD) g and its time derivative, physical rep.
std::pair<SpatialField, SpatialField> free_solution(const CauchyData& data, double t);

/// The nonlinearity F(u, u_t) in physical space. Derivatives are spectral;
/// with `dealias` the inputs and the product are cut to |k_j| < nx/3.
SpatialField nonlinearity_eval(const SpatialField& u, const SpatialField& u_t, const Nonlinearity& kind,
                               bool dealias = true);

/// Trapezoid rule for the Duhamel term at slice k over slices 0..k of F
/// (physical, spacing dt): returns (w, w_t) with
/// w = int_0^{t_k} D^{-1} sin((t_k - t') D) F(t') dt' and w_t its t-derivative.
std::pair<SpatialField, SpatialField> duhamel_apply(const std::vector<SpatialField>& forcing, double dt,
                                                    std::size_t k);

/// Picard iteration u <- free + Duhamel(F(u)) from the free solution. The
/// residual of step m is sup_k (|grad du| + |du_t|)_{L^2} / sup_k (|grad u| + |u_t|)_{L^2}
/// for the difference du of successive iterates. Iteration stops on
/// residual < tol (converged), on picard_max, or as soon as the residual
/// grows or stops being finite (not converged).
std::pair<Trajectory, PicardReport> picard_solve(const CauchyData& data, const Nonlinearity& kind,
                                                 const SolverConfig& config);

/// Classical RK4 on (u, u_t) in Fourier space with step T / (n_steps * substeps);
/// an empty kind gives the free equation. Sets blew_up when the state stops
/// being finite or grows by 1e12.
Trajectory rk4_solve(const CauchyData& data, const std::optional<Nonlinearity>& kind, const SolverConfig& config,
                     int substeps = 1);

/// 1/2 sum (u_t^2 + |grad u|^2) dx^2.
double energy(const SpatialField& u, const SpatialField& u_t);

/// Rough random data: f^(xi) = <xi>^{-s - 2/p - delta} e^{i theta_xi}, p = r',
/// g^(xi) = <xi>^{-(s-1) - 2/p - delta} e^{i phi_xi}, for 0 < |xi| <= band_limit
/// (plus the xi = 0 mode), read as transform densities. Phases come from a
/// counter-based hash of (seed, k1, k2), so grids of different size share
/// their common modes. Hermitian symmetric, Nyquist lines left empty.
CauchyData random_data(const SpatialGrid& grid, double s, double r, std::uint64_t seed, double band_limit,
                       double delta = 0.01);

/// Single-mode data a cos(xi0 . x) in f, zero g.
CauchyData plane_wave_data(const SpatialGrid& grid, int k1, int k2, double amplitude);

/// Cauchy data multiplied by a.
CauchyData scaled(const CauchyData& data, double a);

struct ExistenceRow {
  double amplitude = 0.0;
  bool converged = false;
  int iterations = 0;
  double last_residual = 0.0;
};

struct ExistenceTable {
  std::vector<ExistenceRow> rows;
  /// Bisected threshold between the largest converging and the smallest
  /// failing amplitude; absent if the sweep never switches.
  std::optional<double> threshold;
};

/// Runs picard_solve on a * data for each amplitude (increasing), then bisects
/// `bisection_steps` times on the first switch from converged to not.
ExistenceTable existence_probe(const CauchyData& data, const Nonlinearity& kind, const SolverConfig& config,
                               const std::vector<double>& amplitudes, int bisection_steps = 10);

/// Data f(lambda x), lambda g(lambda x) on the grid of period P / lambda: the
/// scaling under which the quadratic derivative equation is invariant.
CauchyData rescaled_data(const CauchyData& data, double lambda);

struct StrichartzRow {
  int nx = 0;
  std::vector<double> ratios;
  double median_log2_ratio = 0.0;
};

struct StrichartzTable {
  double q_t = 4.0;
  double T = 1.0;
  std::vector<StrichartzRow> rows;
  double slope = 0.0;  ///< of median log2 R against log2 nx
  double r2 = 0.0;
};

/// R = |Du|_{L^{q_t}_t L^inf_x(0, T)} / (|f|_{H^{7/4}} + |g|_{H^{3/4}}) for free
/// waves from random H^{7/4} data, ensemble member i using seed mix(seed, i)
/// on every rung of the ladder (so rungs see nested data). Slices are
/// streamed; n_slices per unit time.
StrichartzTable strichartz_probe(int ensemble_size, double q_t, const std::vector<int>& ladder, std::uint64_t seed,
                                 double T = 1.0, int n_slices = 64, int workers = 1);

/// 2 <= p <= inf, 2 <= q < inf, 2/p + (n-1)/q <= (n-1)/2. An empty optional
/// stands for infinity.
bool wave_admissible(std::optional<Rational> p, std::optional<Rational> q, int n);

}  // namespace conewave
