#pragma once

#include <cstddef>
#include <span>
#include <string>

#include "conewave/grid.hpp"
#include "conewave/rational.hpp"

namespace conewave {

/// r together with its dual exponent p = r' (1/r + 1/p = 1), kept exact.
struct LebesgueExponents {
  Rational r;
  Rational p;

  /// Throws unless 1 < r <= 2.
  static LebesgueExponents from_r(const Rational& r);
};

/// (s, sigma = s - 1, b, eps) in two space dimensions.
struct RegularityParams {
  double s = 0.0;
  double b = 0.0;
  double eps = 0.0;
  double sigma() const { return s - 1.0; }
  static constexpr int n = 2;
};

enum class NormKind { kFL, kXsb, kZ, kMixed, kHomogeneousFL };

struct NormValue {
  double value = 0.0;
  NormKind kind = NormKind::kFL;
  /// Homogeneous norms skip the xi = 0 mode; set when that mode was nonzero.
  bool excluded_mode = false;
  std::string note;
};

/// <xi> = sqrt(1 + |xi|^2).
double japanese_bracket(Vec2 xi);

/// Dual exponent r / (r - 1); infinity at r = 1.
double dual_exponent(double r);

/// (sum <xi>^{s p} |f(xi)|^p dxi^2)^{1/p}, p = r', reading the stored
/// frequency values as the transform density. With `homogeneous` the weight
/// is |xi|^s and the xi = 0 mode is dropped (flagged when nonzero). r >= 1,
/// r = 1 giving the weighted supremum.
NormValue fl_norm(const SpatialField& f, double r, double s, bool homogeneous = false);

/// (sum <xi>^{s p} <|tau| - |xi|>^{b p} |u|^p dtau dxi^2)^{1/p}.
NormValue xsb_norm(const SpaceTimeField& u, double r, double s, double b);

/// ||u||_{X_{s,b}} + ||u_t||_{X_{s-1,b}}. Grids must match.
NormValue z_norm(const SpaceTimeField& u, const SpaceTimeField& u_t, double r, double s, double b);

/// L^q_t L^rho_x of a physical field with quadrature weights dt and dx^2.
/// Infinite exponents (std::numeric_limits<double>::infinity()) are lattice maxima.
NormValue mixed_norm(const SpaceTimeField& u, double q_t, double rho_x);

/// Spatial L^rho norm of one physical slice, weighted by dx^2.
double lebesgue_norm(const SpatialField& f, double rho);

/// L^q over slices of already computed spatial norms, weight dt.
double time_lebesgue_norm(std::span<const double> slice_norms, double dt, double q);

/// sigma = s + n (1/2 - 1/r): the L^2 Sobolev index with the same scaling.
Rational sobolev_correspondence(const Rational& s, const Rational& r, int n);

enum class EquationKind { kGradSquare, kDerivOfSquare };

/// n/r for (du)^2 nonlinearities, n/r - 1 for d(u^2).
Rational critical_exponent(const Rational& r, int n, EquationKind eq);

struct ScalingReport {
  double lambda = 1.0;
  double ratio = 1.0;     ///< ||f_lambda|| / ||f|| in the homogeneous norm
  double expected = 1.0;  ///< lambda^{s - n/r}
  double rel_error = 0.0;
  bool aliased = false;   ///< support touched the Nyquist line; check skipped
};

/// Compares the homogeneous norm of f_lambda(x) = f(lambda x) with that of f.
/// f_lambda is sampled on the grid of period P / lambda with the same nx, so
/// the two frequency lattices nest (spacing lambda dxi inside dxi) and every
/// mode k of f becomes mode k of f_lambda. lambda must be a power of two.
ScalingReport scaling_law_check(const SpatialField& f, double s, double r, double lambda);

}  // namespace conewave
