#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "conewave/grid.hpp"
#include "conewave/rational.hpp"

namespace conewave {

enum class JMode { kDirect, kFast };

/// J(F0, F1, F2) = sum over X0 + X1 + X2 = 0 (mod the lattice) of
/// F0(X0) F1(X1) F2(X2), times (dtau dxi^2)^2. Fields must be in frequency
/// rep on one grid. Direct mode is the O(M^2) double sum; fast mode is
/// w^2 sqrt(M) sum_x F0v F1v F2v with Fv the unitary inverse transforms.
cplx eval_J(const SpaceTimeField& f0, const SpaceTimeField& f1, const SpaceTimeField& f2, JMode mode);

enum class EstimateKind { kEasy, kHard };

/// Exponents of the bilinear restriction constant
///   easy: (N012_min)^{2/p} (N12_min)^{2/r - 2/p} (L_min)^{1/r}
///   hard: (N012_min)^{1/p} (N12_min)^{3/(2r) - 1/p} (L_min)^{1/r} (L_max)^{1/(2r)}
struct EstimateForm {
  EstimateKind kind = EstimateKind::kHard;
  Rational r;
  Rational n012_min;
  Rational n12_min;
  Rational l_min;
  Rational l_max;

  static EstimateForm make(EstimateKind kind, const Rational& r);
};

/// Evaluates the shape at dyadic N = (N0, N1, N2), L = (L1, L2). The log2 of
/// the result is summed exactly, so integral totals give exact powers of two.
double predicted_constant(const EstimateForm& form, const std::array<double, 3>& N,
                          const std::array<double, 2>& L);

enum class Interaction { kHLH, kLHH };

/// One dyadic configuration of the restriction estimate. Slot 0 is the
/// output band |xi| in [N0, 2N0) with no tau restriction; slots 1 and 2 are
/// the annular cones K̇^{±j}_{Nj,Lj}. The sign of slot 0 is recorded but, as
/// in the dyadic sum where the output band carries both halves, not imposed.
struct ConstantSetup {
  std::array<double, 3> N{8, 2, 8};
  std::array<double, 2> L{1, 1};
  std::array<Sign, 3> signs{Sign::kPlus, Sign::kPlus, Sign::kPlus};
};

std::array<FrequencyRegion, 3> constant_regions(const ConstantSetup& setup);

struct OptimizerConfig {
  int restarts = 8;
  int max_iters = 200;
  double tol = 1e-9;
  std::uint64_t seed = 1;
};

struct ConstantMeasurement {
  std::array<double, 3> N{};
  std::array<double, 2> L{};
  std::array<Sign, 3> signs{Sign::kPlus, Sign::kPlus, Sign::kPlus};
  Rational r;
  double measured_C = 0.0;
  int iterations = 0;  ///< of the best restart
  bool converged = false;
  int restarts = 0;
  std::uint64_t seed = 0;
  bool degenerate = false;
  std::vector<double> history;  ///< objective after each slot update, best restart
};

/// Largest ratio J(F0, F1, F2) / (|F0|_{L^r} |F1|_{L^p} |F2|_{L^p}) found over
/// nonnegative F_j supported on the lattice points of A_j, p = r'. Norms carry
/// the cell weight dtau dxi^2. Each restart alternates closed-form Hölder
/// duality steps: with two slots fixed, J is linear in the third, so the best
/// third slot is the normalised power of its kernel. Restart 0 starts from
/// indicators, the rest from seeded random densities.
ConstantMeasurement best_constant(const GridSpec& grid, const FrequencyRegion& a0, const FrequencyRegion& a1,
                                  const FrequencyRegion& a2, const Rational& r, const OptimizerConfig& config);

/// best_constant on constant_regions(setup), with the setup echoed.
ConstantMeasurement measure_constant(const GridSpec& grid, const ConstantSetup& setup, const Rational& r,
                                     const OptimizerConfig& config);

/// Axis names: N0, N1, N2, L1, L2.
double axis_value(const ConstantMeasurement& m, const std::string& axis);

struct ExponentFit {
  std::vector<std::string> axes;
  std::vector<double> exponents;
  double intercept = 0.0;
  double r2 = 0.0;
};

/// Least squares of log2 C on log2 of each varied axis (jointly). Rejects
/// nonpositive constants and rank-deficient designs.
ExponentFit exponent_regression(const std::vector<ConstantMeasurement>& measurements,
                                const std::vector<std::string>& varied_axes);

}  // namespace conewave
