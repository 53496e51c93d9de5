#include "conewave/regression.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace conewave {

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit_line: size mismatch");
  const std::size_t n = x.size();
  if (n < 2) throw std::invalid_argument("fit_line: need at least two points");
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  const double scale = std::max(1.0, mx * mx);
  if (sxx <= 1e-24 * scale * static_cast<double>(n)) {
    throw std::invalid_argument("fit_line: degenerate design (constant x)");
  }
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy <= 0.0 ? 1.0 : std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
  return fit;
}

LinearFit fit_power_law(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit_power_law: size mismatch");
  std::vector<double> lx(x.size());
  std::vector<double> ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
      throw std::invalid_argument("fit_power_law: values must be positive");
    }
    lx[i] = std::log2(x[i]);
    ly[i] = std::log2(y[i]);
  }
  return fit_line(lx, ly);
}

}  // namespace conewave
