#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "conewave/norms.hpp"
#include "conewave/solver.hpp"

namespace cw = conewave;
using cw::Rational;
constexpr double kPi = std::numbers::pi;

namespace {

cw::SpatialField random_spectrum(const cw::SpatialGrid& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  cw::SpatialField f(g, cw::Rep::kFrequency);
  for (auto& v : f.values) v = {d(rng), d(rng)};
  return f;
}

// Weighted l^p sum in long double.
long double fl_oracle(const cw::SpatialField& f, long double r, long double s) {
  const long double p = r / (r - 1);
  const long double w = static_cast<long double>(f.grid.dxi()) * f.grid.dxi();
  long double acc = 0;
  for (int a = 0; a < f.grid.nx; ++a)
    for (int b = 0; b < f.grid.nx; ++b) {
      const auto xi = f.frequency(a, b);
      const long double br = std::sqrt(1.0L + static_cast<long double>(xi.x) * xi.x + static_cast<long double>(xi.y) * xi.y);
      acc += std::pow(br, s * p) * std::pow(static_cast<long double>(std::abs(f.at(a, b))), p) * w;
    }
  return std::pow(acc, 1 / p);
}

}  // namespace

TEST(JapaneseBracket, Basics) {
  EXPECT_EQ(cw::japanese_bracket({0, 0}), 1.0);
  EXPECT_DOUBLE_EQ(cw::japanese_bracket({2, 2}), 3.0);
}

TEST(DualExponent, Values) {
  EXPECT_DOUBLE_EQ(cw::dual_exponent(2), 2.0);
  EXPECT_DOUBLE_EQ(cw::dual_exponent(1.5), 3.0);
  EXPECT_TRUE(std::isinf(cw::dual_exponent(1)));
}

TEST(FlNorm, SingleMode) {
  const cw::SpatialGrid g{16, kPi};  // dxi = 2
  cw::SpatialField f(g, cw::Rep::kFrequency);
  f.at(1, 2) = 1.0;  // xi = (2, 4)
  for (double r : {1.25, 1.5, 2.0}) {
    const double p = r / (r - 1);
    const double expect = std::pow(std::sqrt(21.0), 0.7) * std::pow(4.0, 1 / p);
    EXPECT_NEAR(cw::fl_norm(f, r, 0.7).value, expect, 1e-13 * expect) << r;
  }
}

TEST(FlNorm, PlancherelCase) {
  const cw::SpatialGrid g{16, 2 * kPi};
  const auto f = random_spectrum(g, 1);
  double l2 = 0.0;
  for (const auto& v : f.values) l2 += std::norm(v);
  EXPECT_NEAR(cw::fl_norm(f, 2, 0).value, std::sqrt(l2), 1e-12 * std::sqrt(l2));
}

TEST(FlNorm, MatchesExtendedPrecisionOracle) {
  const cw::SpatialGrid g{32, 3.0};
  for (unsigned seed = 0; seed < 5; ++seed) {
    const auto f = random_spectrum(g, seed);
    const double oracle = static_cast<double>(fl_oracle(f, 1.5L, 0.8L));
    EXPECT_NEAR(cw::fl_norm(f, 1.5, 0.8).value, oracle, 1e-10 * oracle);
  }
}

TEST(FlNorm, HomogeneousFlagsDcMode) {
  const cw::SpatialGrid g{8, 2 * kPi};
  cw::SpatialField f(g, cw::Rep::kFrequency);
  f.at(0, 0) = 5.0;
  f.at(0, 1) = 1.0;
  const auto n = cw::fl_norm(f, 2, 1, true);
  EXPECT_TRUE(n.excluded_mode);
  EXPECT_NEAR(n.value, 1.0, 1e-15);
  EXPECT_FALSE(cw::fl_norm(f, 2, 1, false).excluded_mode);
}

TEST(FlNorm, REqualsOneIsWeightedSupremum) {
  const cw::SpatialGrid g{8, 2 * kPi};
  cw::SpatialField f(g, cw::Rep::kFrequency);
  f.at(0, 1) = 3.0;
  f.at(2, 0) = 1.0;
  EXPECT_NEAR(cw::fl_norm(f, 1, 1).value, std::max(3.0 * std::sqrt(2.0), std::sqrt(5.0)), 1e-14);
}

TEST(XsbNorm, OnConeModulationWeightIsOne) {
  const cw::GridSpec g{8, 8, 2 * kPi, 2 * kPi};
  cw::SpaceTimeField u(g, cw::Rep::kFrequency);
  u.at(3, 3, 0) = 1.0;  // tau = 3 = |xi|
  const double w = 1.0;
  EXPECT_NEAR(cw::xsb_norm(u, 2, 0, 5).value, std::sqrt(w), 1e-15);
  EXPECT_NEAR(cw::xsb_norm(u, 2, 1, 5).value, std::sqrt(10.0), 1e-13);
}

TEST(XsbNorm, DirectWeightedSumAtRTwo) {
  const cw::GridSpec g{8, 16, kPi, 4 * kPi};
  std::mt19937_64 rng(2);
  std::normal_distribution<double> d;
  cw::SpaceTimeField u(g, cw::Rep::kFrequency);
  for (auto& v : u.values) v = {d(rng), d(rng)};
  const double s = 0.75, b = 0.6;
  long double acc = 0;
  for (int it = 0; it < g.nt; ++it)
    for (int a = 0; a < g.nx; ++a)
      for (int c = 0; c < g.nx; ++c) {
        const auto x = u.frequency(it, a, c);
        const long double xi = std::hypot(x.xi1, x.xi2);
        const long double m = std::fabs(std::fabs(x.tau) - xi);
        acc += std::pow(1 + xi * xi, s) * std::pow(1 + m * m, static_cast<long double>(b)) * std::norm(u.at(it, a, c)) *
               g.dtau() * g.dxi() * g.dxi();
      }
  EXPECT_NEAR(cw::xsb_norm(u, 2, s, b).value, static_cast<double>(std::sqrt(acc)), 1e-12 * std::sqrt(acc));
}

TEST(XsbNorm, TimeIndependentSeparates) {
  const cw::GridSpec g{16, 8, 2 * kPi, 4 * kPi};
  const auto f = random_spectrum({g.nx, g.spatial_period}, 4);
  cw::SpaceTimeField u(g, cw::Rep::kFrequency);
  for (int a = 0; a < g.nx; ++a)
    for (int c = 0; c < g.nx; ++c) u.at(0, a, c) = f.at(a, c);
  for (double r : {1.5, 2.0}) {
    const double p = r / (r - 1);
    EXPECT_NEAR(cw::xsb_norm(u, r, 0.5, 0).value, cw::fl_norm(f, r, 0.5).value * std::pow(g.dtau(), 1 / p), 1e-12);
  }
}

TEST(ZNorm, SumsAndRejectsMismatch) {
  const cw::GridSpec g{8, 8, 2 * kPi, 2 * kPi};
  cw::SpaceTimeField u(g, cw::Rep::kFrequency), v(g, cw::Rep::kFrequency);
  u.at(1, 1, 0) = 1.0;
  v.at(2, 0, 1) = 2.0;
  const double z = cw::z_norm(u, v, 2, 1, 0.5).value;
  EXPECT_NEAR(z, cw::xsb_norm(u, 2, 1, 0.5).value + cw::xsb_norm(v, 2, 0, 0.5).value, 1e-14);
  cw::SpaceTimeField other(cw::GridSpec{16, 8, 2 * kPi, 2 * kPi}, cw::Rep::kFrequency);
  EXPECT_THROW(cw::z_norm(u, other, 2, 1, 0.5), std::invalid_argument);
}

TEST(MixedNorm, ConstantField) {
  const cw::GridSpec g{8, 8, 2.0, 4.0};
  cw::SpaceTimeField u(g, cw::Rep::kPhysical);
  for (auto& v : u.values) v = 3.0;
  // |3|_{L^2_x} = 3 * 2, then L^4 over time 4.
  EXPECT_NEAR(cw::mixed_norm(u, 4, 2).value, 6.0 * std::pow(4.0, 0.25), 1e-12);
  EXPECT_NEAR(cw::mixed_norm(u, 4, std::numeric_limits<double>::infinity()).value, 3.0 * std::pow(4.0, 0.25), 1e-12);
}

TEST(Sobolev, Correspondence) {
  EXPECT_EQ(cw::sobolev_correspondence(2, Rational(3, 2), 2), Rational(5, 3));
  EXPECT_EQ(cw::sobolev_correspondence(Rational(7, 5), 2, 2), Rational(7, 5));
  EXPECT_EQ(cw::sobolev_correspondence(Rational(5, 2), 1, 2), Rational(3, 2));
}

TEST(Sobolev, CriticalExponents) {
  EXPECT_EQ(cw::critical_exponent(2, 2, cw::EquationKind::kGradSquare), 1);
  EXPECT_EQ(cw::critical_exponent(Rational(3, 2), 2, cw::EquationKind::kGradSquare), Rational(4, 3));
  EXPECT_EQ(cw::critical_exponent(Rational(3, 2), 2, cw::EquationKind::kDerivOfSquare), Rational(1, 3));
  EXPECT_THROW(cw::critical_exponent(3, 2, cw::EquationKind::kGradSquare), std::invalid_argument);
}

TEST(Scaling, RatioIsPowerLaw) {
  const cw::SpatialGrid g{32, 2 * kPi};
  for (auto [s, r] : {std::pair{1.75, 2.0}, std::pair{2.0, 1.5}}) {
    const auto data = cw::random_data(g, s, r, 17, 10.0);
    for (double lambda : {2.0, 4.0}) {
      const auto rep = cw::scaling_law_check(data.f, s, r, lambda);
      EXPECT_FALSE(rep.aliased);
      EXPECT_NEAR(rep.expected, std::pow(lambda, s - 2 / r), 1e-15);
      EXPECT_LT(rep.rel_error, 1e-12);
    }
  }
}

TEST(Scaling, NyquistSupportIsAliased) {
  const cw::SpatialGrid g{16, 2 * kPi};
  cw::SpatialField f(g, cw::Rep::kFrequency);
  f.at(8, 1) = 1.0;
  EXPECT_TRUE(cw::scaling_law_check(f, 1, 2, 2).aliased);
  EXPECT_THROW(cw::scaling_law_check(f, 1, 2, 3), std::invalid_argument);
}
