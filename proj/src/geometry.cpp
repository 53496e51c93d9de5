#include "conewave/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>

#include "conewave/parallel.hpp"
#include "conewave/regression.hpp"

namespace conewave {

namespace {

constexpr std::size_t kChunk = std::size_t{1} << 16;

Vec2 rotate(Vec2 v, double phi) {
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

double box_volume(const region::Box& b) {
  return (b.hi.tau - b.lo.tau) * (b.hi.xi1 - b.lo.xi1) * (b.hi.xi2 - b.lo.xi2);
}

// Uniform double in [0, 1) from the top 53 bits.
double unit(std::mt19937_64& eng) { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }

}  // namespace

double angle(Vec2 a, Vec2 b) {
  if ((a.x == 0.0 && a.y == 0.0) || (b.x == 0.0 && b.y == 0.0)) {
    throw std::invalid_argument("angle: zero vector");
  }
  const double cross = a.x * b.y - a.y * b.x;
  const double dot = a.x * b.x + a.y * b.y;
  return std::atan2(std::abs(cross), dot);
}

AngularNet build_net(double gamma) {
  if (!(gamma > 0.0 && gamma <= std::numbers::pi)) {
    throw std::invalid_argument("build_net: gamma must lie in (0, pi]");
  }
  // floor keeps the spacing >= gamma; spacing < 2 gamma keeps the net maximal.
  const auto m = static_cast<std::size_t>(std::floor(2.0 * std::numbers::pi / gamma + 1e-9));
  const double spacing = 2.0 * std::numbers::pi / static_cast<double>(m);
  AngularNet net;
  net.gamma = gamma;
  net.points.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double phi = spacing * static_cast<double>(k);
    net.points.push_back({std::cos(phi), std::sin(phi)});
  }
  return net;
}

std::size_t count_within(const AngularNet& net, Vec2 omega, double k) {
  const double limit = k * net.gamma * (1.0 + 1e-12);
  return static_cast<std::size_t>(std::count_if(net.points.begin(), net.points.end(),
                                                [&](Vec2 w) { return angle(w, omega) <= limit; }));
}

double gamma0(double N1, double L2) { return std::sqrt(L2 / N1); }

VolumeEstimate region_volume_mc(const FrequencyRegion& region, const region::Box& bounding_box,
                                std::size_t samples, std::uint64_t seed, int workers) {
  if (samples == 0) throw std::invalid_argument("region_volume_mc: samples must be positive");
  const std::size_t chunks = (samples + kChunk - 1) / kChunk;
  std::vector<std::size_t> hits(chunks, 0);
  const Point3 lo = bounding_box.lo;
  const Point3 span = bounding_box.hi - bounding_box.lo;
  parallel_for(chunks, workers, [&](std::size_t c) {
    std::mt19937_64 eng(mix_seed(seed, c));
    const std::size_t begin = c * kChunk;
    const std::size_t end = std::min(samples, begin + kChunk);
    std::size_t count = 0;
    for (std::size_t i = begin; i < end; ++i) {
      const Point3 x{lo.tau + span.tau * unit(eng), lo.xi1 + span.xi1 * unit(eng),
                     lo.xi2 + span.xi2 * unit(eng)};
      if (region.contains(x)) ++count;
    }
    hits[c] = count;
  });
  std::size_t total = 0;
  for (std::size_t h : hits) total += h;
  const double n = static_cast<double>(samples);
  const double p = static_cast<double>(total) / n;
  const double vol = box_volume(bounding_box);
  VolumeEstimate est;
  est.mean = vol * p;
  // Sample standard deviation of the estimator vol * indicator.
  const double var = samples > 1 ? p * (1.0 - p) * n / (n - 1.0) : 0.0;
  est.std_error = vol * std::sqrt(var / n);
  est.samples = samples;
  est.seed = seed;
  return est;
}

std::string to_string(VolumeCase c) {
  switch (c) {
    case VolumeCase::kHlhEasy:
      return "hlh_easy";
    case VolumeCase::kHlhHard:
      return "hlh_hard";
    case VolumeCase::kLhhSigma1:
      return "lhh_sigma1";
    case VolumeCase::kLhhSigma2:
      return "lhh_sigma2";
  }
  return "unknown";
}

VolumeCase parse_volume_case(const std::string& name) {
  for (auto c : {VolumeCase::kHlhEasy, VolumeCase::kHlhHard, VolumeCase::kLhhSigma1,
                 VolumeCase::kLhhSigma2}) {
    if (to_string(c) == name) return c;
  }
  throw std::invalid_argument("unknown volume case '" + name + "'");
}

VolumeSetup volume_setup(VolumeCase c, const VolumeParams& p) {
  VolumeSetup out;
  switch (c) {
    case VolumeCase::kHlhHard:
    case VolumeCase::kHlhEasy: {
      const bool hard = c == VolumeCase::kHlhHard;
      const double n0 = 8.0 * p.N1;
      const double radius = 1.5 * n0;
      const Point3 x0{radius, radius, 0.0};
      FrequencyRegion a1 = hard ? annular_cone(Sign::kPlus, p.N1, p.L1) : ball_cone(Sign::kPlus, p.N1, p.L1);
      FrequencyRegion a2 = hard ? annular_cone(Sign::kPlus, n0, p.L2) : ball_cone(Sign::kPlus, n0, p.L2);
      out.region = intersect({std::move(a1), translate(reflect(std::move(a2)), x0)});
      out.witness = x0;
      if (hard) {
        // |xi1| + |xi0 - xi1| <= |xi0| + L1 + L2 confines xi1 to a thin ellipse.
        const double ls = p.L1 + p.L2;
        double w = std::sqrt(2.0 * p.N1 * ls * (ls + 2.0 * radius) / radius) * 1.01;
        w = std::min(w, 2.0 * p.N1);
        const double xlo = w < p.N1 ? 0.0 : -2.0 * p.N1;
        out.box = {{p.N1 - p.L1, xlo, -w}, {2.0 * p.N1 + p.L1, 2.0 * p.N1, w}};
      } else {
        out.box = {{0.0, -2.0 * p.N1, -2.0 * p.N1}, {2.0 * p.N1 + p.L1, 2.0 * p.N1, 2.0 * p.N1}};
      }
      return out;
    }
    case VolumeCase::kLhhSigma1: {
      const double g0 = gamma0(p.N1, p.L2);
      const Vec2 w{1.0, 0.0};
      const Point3 x2{-1.5 * p.N1, -1.5 * p.N1 * w.x, -1.5 * p.N1 * w.y};
      FrequencyRegion a0 = sector_cone(Sign::kPlus, p.N0, p.L2, g0, w);
      FrequencyRegion a1 = sector_cone(Sign::kPlus, p.N1, p.L1, g0, w);
      out.region = intersect({std::move(a0), translate(std::move(a1), x2)});
      out.witness = x2;
      const double half = 2.0 * p.N0 * std::sin(std::min(g0, std::numbers::pi / 2));
      const double xlo = g0 < std::numbers::pi / 2 ? p.N0 * std::cos(g0) : -2.0 * p.N0;
      out.box = {{xlo - p.L1, xlo, -half}, {2.0 * p.N0 + p.L1, 2.0 * p.N0, half}};
      return out;
    }
    case VolumeCase::kLhhSigma2: {
      const double g = p.gamma;
      const Vec2 w0{1.0, 0.0};
      const Vec2 w1 = rotate(w0, -6.0 * g);
      const double lift = std::min(p.L2, 1.5 * p.N0 * (1.0 - std::cos(6.0 * g)));
      const Point3 x2{-1.5 * p.N1 + lift, -1.5 * p.N1 * w1.x, -1.5 * p.N1 * w1.y};
      FrequencyRegion a0 = sector_cone(Sign::kPlus, p.N0, p.L2, g, w0);
      FrequencyRegion a1 = sector_cone(Sign::kPlus, p.N1, p.L1, g, w1);
      out.region = intersect({std::move(a0), translate(std::move(a1), x2)});
      out.witness = x2;
      const double half = 2.0 * p.N0 * std::sin(std::min(g, std::numbers::pi / 2));
      const double xlo = g < std::numbers::pi / 2 ? p.N0 * std::cos(g) : -2.0 * p.N0;
      out.box = {{p.N0 - p.L2, xlo, -half}, {2.0 * p.N0 + p.L2, 2.0 * p.N0, half}};
      return out;
    }
  }
  throw std::invalid_argument("volume_setup: unknown case");
}

double volume_bound(VolumeCase c, const VolumeParams& p) {
  const double lmin = std::min(p.L1, p.L2);
  const double lmax = std::max(p.L1, p.L2);
  switch (c) {
    case VolumeCase::kHlhHard:
      return std::pow(p.N1, 1.5) * lmin * std::sqrt(lmax);
    case VolumeCase::kHlhEasy:
      return p.N1 * p.N1 * lmin;
    case VolumeCase::kLhhSigma1:
      return p.N0 * p.N0 * gamma0(p.N1, p.L2) * p.L1;
    case VolumeCase::kLhhSigma2:
      return p.L2 / p.gamma * p.L1 * p.N0;
  }
  return 0.0;
}

std::vector<std::string> volume_axes(VolumeCase c) {
  switch (c) {
    case VolumeCase::kHlhEasy:
    case VolumeCase::kHlhHard:
      return {"N1", "Lmin", "Lmax"};
    case VolumeCase::kLhhSigma1:
      return {"N0", "gamma0", "L1"};
    case VolumeCase::kLhhSigma2:
      return {"N0", "L1", "L2", "gamma"};
  }
  return {};
}

double predicted_volume_exponent(VolumeCase c, const std::string& axis) {
  switch (c) {
    case VolumeCase::kHlhHard:
      if (axis == "N1") return 1.5;
      if (axis == "Lmin") return 1.0;
      if (axis == "Lmax") return 0.5;
      break;
    case VolumeCase::kHlhEasy:
      if (axis == "N1") return 2.0;
      if (axis == "Lmin") return 1.0;
      if (axis == "Lmax") return 0.0;
      break;
    case VolumeCase::kLhhSigma1:
      if (axis == "N0") return 2.0;
      if (axis == "gamma0") return 1.0;
      if (axis == "L1") return 1.0;
      break;
    case VolumeCase::kLhhSigma2:
      if (axis == "N0" || axis == "L1" || axis == "L2") return 1.0;
      if (axis == "gamma") return -1.0;
      break;
  }
  throw std::invalid_argument("no axis '" + axis + "' for case " + to_string(c));
}

VolumeParams with_axis(VolumeParams p, const std::string& axis, double value) {
  if (axis == "N0") {
    p.N0 = value;
  } else if (axis == "N1") {
    p.N1 = value;
  } else if (axis == "L1" || axis == "Lmin") {
    p.L1 = value;
  } else if (axis == "L2" || axis == "Lmax") {
    p.L2 = value;
  } else if (axis == "gamma0") {
    p.L2 = value * value * p.N1;
  } else if (axis == "gamma") {
    p.gamma = value;
  } else {
    throw std::invalid_argument("unknown axis '" + axis + "'");
  }
  return p;
}

VolumeSweep default_sweep(VolumeCase c) {
  VolumeSweep s;
  s.kind = c;
  switch (c) {
    case VolumeCase::kHlhHard:
      s.base = {.N0 = 512, .N1 = 64, .L1 = 1, .L2 = 8, .gamma = 0};
      s.axes = {{"N1", {16, 32, 64, 128}}, {"Lmin", {1, 2, 4, 8}}, {"Lmax", {1, 2, 4, 8}}};
      // The N1 axis runs at L1 = L2 = 1 and the Lmax axis at L1 = 1.
      break;
    case VolumeCase::kHlhEasy:
      s.base = {.N0 = 64, .N1 = 8, .L1 = 1, .L2 = 1024, .gamma = 0};
      s.axes = {{"N1", {4, 8, 16, 32}}, {"Lmin", {1, 2, 4, 8}}, {"Lmax", {256, 512, 1024, 2048}}};
      break;
    case VolumeCase::kLhhSigma1:
      s.base = {.N0 = 16, .N1 = 1024, .L1 = 1, .L2 = 64, .gamma = 0};
      s.axes = {{"N0", {4, 8, 16, 32}}, {"gamma0", {0.0625, 0.125, 0.25, 0.5}}, {"L1", {1, 2, 4, 8}}};
      break;
    case VolumeCase::kLhhSigma2:
      // Sectors 6 gamma apart only meet when N0 (1 - cos 5 gamma) <~ L1 + L2,
      // and gamma must stay above gamma0 = sqrt(L2 / N1).
      s.base = {.N0 = 16, .N1 = 16384, .L1 = 1, .L2 = 4, .gamma = 0.0625};
      s.axes = {{"N0", {8, 16, 32, 64}}, {"L1", {1, 2, 4}}, {"L2", {4, 8, 16, 32}},
                {"gamma", {0.03125, 0.0625, 0.125}}};
      break;
  }
  return s;
}

namespace {

// Base configuration for one axis of a sweep; the hard HLH axes pin the
// other modulation so the axis stays in its own regime.
VolumeParams axis_base(const VolumeSweep& s, const std::string& axis) {
  VolumeParams p = s.base;
  if (s.kind == VolumeCase::kHlhHard) {
    if (axis == "N1") {
      p.L1 = 1;
      p.L2 = 1;
    } else if (axis == "Lmax") {
      p.L1 = 1;
    }
  }
  return p;
}

}  // namespace

VolumeFit volume_exponent_fit(const VolumeSweep& sweep, std::size_t samples, std::uint64_t seed,
                              int workers) {
  struct Task {
    std::size_t axis;
    std::size_t index;
  };
  std::vector<Task> tasks;
  for (std::size_t a = 0; a < sweep.axes.size(); ++a) {
    for (std::size_t i = 0; i < sweep.axes[a].values.size(); ++i) tasks.push_back({a, i});
  }
  std::vector<VolumeEstimate> results(tasks.size());
  parallel_for(tasks.size(), workers, [&](std::size_t t) {
    const auto& ax = sweep.axes[tasks[t].axis];
    const VolumeParams p = with_axis(axis_base(sweep, ax.axis), ax.axis, ax.values[tasks[t].index]);
    const VolumeSetup setup = volume_setup(sweep.kind, p);
    results[t] = region_volume_mc(setup.region, setup.box, samples, mix_seed(seed, 1000003 * t + 17));
  });

  VolumeFit fit;
  fit.kind = sweep.kind;
  std::size_t t = 0;
  for (const auto& ax : sweep.axes) {
    AxisFit af;
    af.axis = ax.axis;
    af.values = ax.values;
    af.predicted = predicted_volume_exponent(sweep.kind, ax.axis);
    std::vector<double> vols;
    for (std::size_t i = 0; i < ax.values.size(); ++i, ++t) {
      af.params.push_back(with_axis(axis_base(sweep, ax.axis), ax.axis, ax.values[i]));
      af.volumes.push_back(results[t]);
      vols.push_back(results[t].mean);
    }
    const bool degenerate =
        ax.values.size() < 2 ||
        std::all_of(ax.values.begin(), ax.values.end(), [&](double v) { return v == ax.values.front(); }) ||
        std::any_of(vols.begin(), vols.end(), [](double v) { return !(v > 0.0); });
    if (!degenerate) {
      const LinearFit lf = fit_power_law(ax.values, vols);
      af.exponent = lf.slope;
      af.r2 = lf.r2;
    }
    fit.axes.push_back(std::move(af));
  }
  return fit;
}

}  // namespace conewave
