#include "conewave/region.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "conewave/geometry.hpp"

namespace conewave {

namespace {

struct Overloaded {
  const Point3& x;

  static bool in_half_space(Sign s, double tau) { return s == Sign::kPlus ? tau >= 0.0 : tau < 0.0; }

  static bool thickened(Sign s, double L, double tau, double r) {
    return std::abs(tau - sign_value(s) * r) <= L;
  }

  bool operator()(const region::BallCone& c) const {
    const double r = std::hypot(x.xi1, x.xi2);
    return r < 2.0 * c.N && thickened(c.sign, c.L, x.tau, r) && in_half_space(c.sign, x.tau);
  }
  bool operator()(const region::AnnularCone& c) const {
    const double r = std::hypot(x.xi1, x.xi2);
    return r >= c.N && r < 2.0 * c.N && thickened(c.sign, c.L, x.tau, r) &&
           in_half_space(c.sign, x.tau);
  }
  bool operator()(const region::SectorCone& c) const {
    const double r = std::hypot(x.xi1, x.xi2);
    if (!(r >= c.N && r < 2.0 * c.N && thickened(c.sign, c.L, x.tau, r) &&
          in_half_space(c.sign, x.tau))) {
      return false;
    }
    const double s = sign_value(c.sign);
    return angle({s * x.xi1, s * x.xi2}, c.omega) <= c.gamma;
  }
  bool operator()(const region::Band& b) const {
    const double r2 = x.xi1 * x.xi1 + x.xi2 * x.xi2;
    const double w = b.measure == BandMeasure::kBracket ? std::sqrt(1.0 + r2) : std::sqrt(r2);
    return w >= b.N && w < 2.0 * b.N;
  }
  bool operator()(const region::Modulation& m) const {
    const double mod = std::abs(x.tau) - std::hypot(x.xi1, x.xi2);
    const double w = std::sqrt(1.0 + mod * mod);
    return w >= m.L && w < 2.0 * m.L;
  }
  bool operator()(const region::HalfSpace& h) const { return in_half_space(h.sign, x.tau); }
  bool operator()(const region::Box& b) const {
    return x.tau >= b.lo.tau && x.tau < b.hi.tau && x.xi1 >= b.lo.xi1 && x.xi1 < b.hi.xi1 &&
           x.xi2 >= b.lo.xi2 && x.xi2 < b.hi.xi2;
  }
  bool operator()(const region::Whole&) const { return true; }
  bool operator()(const region::Translate& t) const { return t.base->contains(x - t.shift); }
  bool operator()(const region::Reflect& r) const { return r.base->contains(-x); }
  bool operator()(const region::Intersect& i) const {
    for (const auto& part : i.parts) {
      if (!part.contains(x)) return false;
    }
    return true;
  }
};

void require_dyadic(double v, const char* what) {
  if (!is_dyadic(v)) {
    throw std::invalid_argument(std::string(what) + " must be dyadic 2^j, j >= 0 (got " +
                                std::to_string(v) + ")");
  }
}

}  // namespace

bool FrequencyRegion::contains(const Point3& x) const { return std::visit(Overloaded{x}, v_); }

bool is_dyadic(double x) {
  if (!(x >= 1.0) || !std::isfinite(x)) return false;
  int exp = 0;
  const double mant = std::frexp(x, &exp);
  return mant == 0.5;
}

FrequencyRegion ball_cone(Sign sign, double N, double L) {
  require_dyadic(N, "N");
  require_dyadic(L, "L");
  return region::BallCone{sign, N, L};
}

FrequencyRegion annular_cone(Sign sign, double N, double L) {
  require_dyadic(N, "N");
  require_dyadic(L, "L");
  return region::AnnularCone{sign, N, L};
}

FrequencyRegion sector_cone(Sign sign, double N, double L, double gamma, Vec2 omega) {
  require_dyadic(N, "N");
  require_dyadic(L, "L");
  if (!(gamma > 0.0 && gamma <= std::numbers::pi)) {
    throw std::invalid_argument("sector gamma must lie in (0, pi]");
  }
  const double norm = std::hypot(omega.x, omega.y);
  if (std::abs(norm - 1.0) > 1e-12) throw std::invalid_argument("sector omega must be a unit vector");
  return region::SectorCone{sign, N, L, gamma, omega};
}

FrequencyRegion band(double N, BandMeasure measure) {
  require_dyadic(N, "N");
  return region::Band{N, measure};
}

FrequencyRegion modulation(double L) {
  require_dyadic(L, "L");
  return region::Modulation{L};
}

FrequencyRegion half_space(Sign sign) { return region::HalfSpace{sign}; }

FrequencyRegion box(Point3 lo, Point3 hi) { return region::Box{lo, hi}; }

FrequencyRegion whole() { return region::Whole{}; }

FrequencyRegion translate(FrequencyRegion base, Point3 shift) {
  return region::Translate{std::make_shared<const FrequencyRegion>(std::move(base)), shift};
}

FrequencyRegion reflect(FrequencyRegion base) {
  return region::Reflect{std::make_shared<const FrequencyRegion>(std::move(base))};
}

FrequencyRegion intersect(std::vector<FrequencyRegion> parts) {
  return region::Intersect{std::move(parts)};
}

}  // namespace conewave
