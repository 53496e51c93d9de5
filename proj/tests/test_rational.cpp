#include <gtest/gtest.h>

#include <vector>

#include "conewave/rational.hpp"
#include "conewave/regression.hpp"

using conewave::Rational;

TEST(Rational, ParsesFractionsIntegersAndDecimals) {
  EXPECT_EQ(conewave::parse_rational("3/2"), Rational(3, 2));
  EXPECT_EQ(conewave::parse_rational(" -4 "), Rational(-4));
  EXPECT_EQ(conewave::parse_rational("0.76"), Rational(19, 25));
  EXPECT_EQ(conewave::parse_rational("6/4"), Rational(3, 2));
}

TEST(Rational, RejectsGarbage) {
  for (const char* bad : {"", "1/0", "abc", "1.2.3", "2/", "/3"}) {
    EXPECT_THROW(conewave::parse_rational(bad), std::invalid_argument) << bad;
  }
}

TEST(Rational, PrintsNumOverDen) {
  EXPECT_EQ(conewave::to_string(Rational(10, 4)), "5/2");
  EXPECT_EQ(conewave::to_string(Rational(3)), "3/1");
  EXPECT_DOUBLE_EQ(conewave::to_double(Rational(7, 4)), 1.75);
}

TEST(Regression, ExactLine) {
  const std::vector<double> x{1, 2, 3, 4};
  const std::vector<double> y{3, 5, 7, 9};
  const auto f = conewave::fit_line(x, y);
  EXPECT_NEAR(f.slope, 2.0, 1e-14);
  EXPECT_NEAR(f.intercept, 1.0, 1e-14);
  EXPECT_NEAR(f.r2, 1.0, 1e-14);
}

TEST(Regression, SyntheticPowerLaw) {
  std::vector<double> n, v;
  for (double x : {4.0, 8.0, 16.0, 32.0}) {
    n.push_back(x);
    v.push_back(3.0 * x * x);
  }
  EXPECT_NEAR(conewave::fit_power_law(n, v).slope, 2.0, 1e-12);
}

TEST(Regression, DegenerateInputsRejected) {
  const std::vector<double> one{1.0};
  EXPECT_THROW(conewave::fit_line(one, one), std::invalid_argument);
  const std::vector<double> x{2, 2, 2};
  const std::vector<double> y{1, 2, 3};
  EXPECT_THROW(conewave::fit_line(x, y), std::invalid_argument);
  const std::vector<double> neg{-1, 2, 3};
  EXPECT_THROW(conewave::fit_power_law(y, neg), std::invalid_argument);
}
