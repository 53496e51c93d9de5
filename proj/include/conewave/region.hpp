#pragma once

#include <array>
#include <memory>
#include <variant>
#include <vector>

namespace conewave {

/// Point of space-time frequency space R^{1+2}, ordered (tau, xi1, xi2).
struct Point3 {
  double tau = 0.0;
  double xi1 = 0.0;
  double xi2 = 0.0;

  friend Point3 operator+(const Point3& a, const Point3& b) {
    return {a.tau + b.tau, a.xi1 + b.xi1, a.xi2 + b.xi2};
  }
  friend Point3 operator-(const Point3& a, const Point3& b) {
    return {a.tau - b.tau, a.xi1 - b.xi1, a.xi2 - b.xi2};
  }
  friend Point3 operator-(const Point3& a) { return {-a.tau, -a.xi1, -a.xi2}; }
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

enum class Sign { kPlus = 1, kMinus = -1 };

inline double sign_value(Sign s) { return s == Sign::kPlus ? 1.0 : -1.0; }

/// Which weight a dyadic band is measured in; both readings occur.
enum class BandMeasure {
  kBracket,    ///< <xi> in [N, 2N)
  kMagnitude,  ///< |xi| in [N, 2N)
};

class FrequencyRegion;

namespace region {

/// K^±_{N,L}: |xi| < 2N, |tau ∓ |xi|| <= L, ±tau >= 0 (tau = 0 counts as +).
struct BallCone {
  Sign sign = Sign::kPlus;
  double N = 1.0;
  double L = 1.0;
};

/// K̇^±_{N,L}: as BallCone but |xi| in [N, 2N).
struct AnnularCone {
  Sign sign = Sign::kPlus;
  double N = 1.0;
  double L = 1.0;
};

/// K̇^±_{N,L,gamma}(omega): AnnularCone with theta(±xi, omega) <= gamma.
struct SectorCone {
  Sign sign = Sign::kPlus;
  double N = 1.0;
  double L = 1.0;
  double gamma = 1.0;
  Vec2 omega{1.0, 0.0};
};

/// Spatial band, any tau.
struct Band {
  double N = 1.0;
  BandMeasure measure = BandMeasure::kBracket;
};

/// <|tau| - |xi|> in [L, 2L).
struct Modulation {
  double L = 1.0;
};

/// +: tau >= 0, -: tau < 0.
struct HalfSpace {
  Sign sign = Sign::kPlus;
};

/// Half-open axis-aligned box [lo, hi).
struct Box {
  Point3 lo;
  Point3 hi;
};

struct Whole {};

struct Translate {
  std::shared_ptr<const FrequencyRegion> base;
  Point3 shift;
};

struct Reflect {
  std::shared_ptr<const FrequencyRegion> base;
};

struct Intersect {
  std::vector<FrequencyRegion> parts;
};

}  // namespace region

/// Symbolic frequency set with a total membership predicate.
class FrequencyRegion {
 public:
  using Variant = std::variant<region::BallCone, region::AnnularCone, region::SectorCone,
                               region::Band, region::Modulation, region::HalfSpace, region::Box,
                               region::Whole, region::Translate, region::Reflect,
                               region::Intersect>;

  FrequencyRegion() : v_(region::Whole{}) {}
  template <typename T>
    requires std::is_constructible_v<Variant, T>
  FrequencyRegion(T alt) : v_(std::move(alt)) {}  // NOLINT(google-explicit-constructor)

  [[nodiscard]] bool contains(const Point3& x) const;
  [[nodiscard]] const Variant& variant() const { return v_; }

 private:
  Variant v_;
};

/// Validates parameters (dyadic N, L; gamma in (0, pi]; unit omega). Throws
/// std::invalid_argument.
FrequencyRegion ball_cone(Sign sign, double N, double L);
FrequencyRegion annular_cone(Sign sign, double N, double L);
FrequencyRegion sector_cone(Sign sign, double N, double L, double gamma, Vec2 omega);
FrequencyRegion band(double N, BandMeasure measure = BandMeasure::kBracket);
FrequencyRegion modulation(double L);
FrequencyRegion half_space(Sign sign);
FrequencyRegion box(Point3 lo, Point3 hi);
FrequencyRegion whole();
FrequencyRegion translate(FrequencyRegion base, Point3 shift);
FrequencyRegion reflect(FrequencyRegion base);
FrequencyRegion intersect(std::vector<FrequencyRegion> parts);

/// True when x = 2^j for an integer j >= 0.
bool is_dyadic(double x);

}  // namespace conewave
