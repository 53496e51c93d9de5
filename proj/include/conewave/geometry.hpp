#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "conewave/region.hpp"

namespace conewave {

/// Angle between nonzero vectors, in [0, pi]. Throws on a zero vector.
double angle(Vec2 a, Vec2 b);

/// Maximal gamma-separated subset of the unit circle.
struct AngularNet {
  double gamma = 0.0;
  std::vector<Vec2> points;
};

/// Equally spaced net: M = floor(2*pi/gamma) points at multiples of 2*pi/M,
/// so neighbours sit at least gamma apart and every direction is within gamma.
AngularNet build_net(double gamma);

/// Number of net points within k*gamma of omega (inclusive).
std::size_t count_within(const AngularNet& net, Vec2 omega, double k);

/// Transversality scale sqrt(L2 / N1) separating the two angular regimes.
double gamma0(double N1, double L2);

struct VolumeEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

/// Uniform Monte Carlo estimate of the Lebesgue measure of `region`. The box
/// must enclose the region; this is not checked. Samples are drawn in fixed
/// chunks with one counter-seeded stream per chunk, so the result depends
/// only on (region, box, samples, seed) and not on `workers`.
VolumeEstimate region_volume_mc(const FrequencyRegion& region, const region::Box& bounding_box,
                                std::size_t samples, std::uint64_t seed, int workers = 1);

enum class VolumeCase { kHlhEasy, kHlhHard, kLhhSigma1, kLhhSigma2 };

std::string to_string(VolumeCase c);
VolumeCase parse_volume_case(const std::string& name);

/// Dyadic configuration of one intersection-volume measurement. Which fields
/// matter depends on the case; see volume_setup.
struct VolumeParams {
  double N0 = 512.0;
  double N1 = 64.0;
  double L1 = 1.0;
  double L2 = 1.0;
  double gamma = 0.125;
};

/// The measured set E and an analytic bounding box for it.
struct VolumeSetup {
  FrequencyRegion region;
  region::Box box;
  Point3 witness;  ///< the fixed point X0 (HLH) or X2 (LHH) of the intersection
};

/// Builds E for the case:
///  - HLH hard: E = K̇^+_{N1,L1} ∩ (X0 - K̇^+_{N2,L2}), N0 = N2 = 8 N1,
///    X0 = (1.5 N0, 1.5 N0, 0) on the upper cone.
///  - HLH easy: same with ball cones K^+ in place of the annular ones.
///  - LHH Sigma1: E = K̇^+_{N0,L2,g0}(w) ∩ (X2 + K̇^+_{N1,L1,g0}(w)), g0 = sqrt(L2/N1),
///    X2 = (-1.5 N1, -1.5 N1 w) on the lower cone.
///  - LHH Sigma2: sectors of width gamma whose centres are 6 gamma apart; X2 is
///    raised off the lower cone by at most L2 towards the resonant level.
VolumeSetup volume_setup(VolumeCase c, const VolumeParams& p);

/// Bound shape of the case, without its implicit constant.
double volume_bound(VolumeCase c, const VolumeParams& p);

std::vector<std::string> volume_axes(VolumeCase c);

/// Exponent of the bound shape along an axis.
double predicted_volume_exponent(VolumeCase c, const std::string& axis);

/// Returns p with `axis` set to `value` (gamma0 moves L2 = gamma0^2 N1).
VolumeParams with_axis(VolumeParams p, const std::string& axis, double value);

struct AxisSweep {
  std::string axis;
  std::vector<double> values;
};

struct VolumeSweep {
  VolumeCase kind = VolumeCase::kHlhHard;
  VolumeParams base;
  std::vector<AxisSweep> axes;
};

/// The sweeps used by the acceptance suite and the CLI: three octaves per axis,
/// all in the L_max <= N_min / 8 regime where it applies.
VolumeSweep default_sweep(VolumeCase c);

struct AxisFit {
  std::string axis;
  std::vector<double> values;
  std::vector<VolumeParams> params;  ///< full configuration of each point
  std::vector<VolumeEstimate> volumes;
  std::optional<double> exponent;  ///< absent for a degenerate range
  std::optional<double> r2;
  double predicted = 0.0;
};

struct VolumeFit {
  VolumeCase kind = VolumeCase::kHlhHard;
  std::vector<AxisFit> axes;
};

/// One-axis-at-a-time log2-log2 regression of measured volume. Each
/// measurement gets its own seed derived from `seed` and its position.
VolumeFit volume_exponent_fit(const VolumeSweep& sweep, std::size_t samples, std::uint64_t seed,
                              int workers = 1);

}  // namespace conewave
