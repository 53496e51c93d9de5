#pragma once

#include <span>

namespace conewave {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

/// Ordinary least squares y = slope * x + intercept. R² is 1 for a constant y.
/// Throws std::invalid_argument for fewer than two points or constant x.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

/// Least squares on log2 y versus log2 x. All values must be positive.
LinearFit fit_power_law(std::span<const double> x, std::span<const double> y);

}  // namespace conewave
