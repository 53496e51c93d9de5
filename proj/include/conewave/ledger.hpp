#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "conewave/rational.hpp"

namespace conewave {

/// (r, sigma, b, eps) of the well-posedness argument, all exact.
struct LedgerParams {
  Rational r;
  Rational sigma;
  Rational b;
  Rational eps;

  Rational p() const { return r / (r - 1); }
  Rational s() const { return sigma + 1; }
};

enum class LedgerCase { kGlobal, kHlhSmallL2, kHlhLargeL2, kLhhSmallL2, kLhhLargeL2 };

std::string to_string(LedgerCase c);
const std::vector<LedgerCase>& all_ledger_cases();

enum class Relation { kGreater, kGreaterEq, kLess, kNotEqual };

std::string to_string(Relation rel);

/// c + cb * b + ce * eps with (r, sigma) already substituted.
struct Affine {
  Rational c;
  Rational cb;
  Rational ce;

  Rational at(const Rational& b, const Rational& eps) const { return c + cb * b + ce * eps; }
};

/// One inequality of the argument, symbolic in (b, eps).
struct Constraint {
  LedgerCase case_id = LedgerCase::kGlobal;
  std::string name;
  Affine lhs;
  Relation relation = Relation::kGreater;
  Affine rhs;
};

struct InequalityCheck {
  LedgerCase case_id = LedgerCase::kGlobal;
  std::string name;
  Rational lhs;
  Relation relation = Relation::kGreater;
  Rational rhs;
  bool holds = false;
};

/// Every inequality of one case at (r, sigma). Throws unless 1 < r <= 2.
std::vector<Constraint> case_constraints(const Rational& r, const Rational& sigma, LedgerCase c);

/// The case's inequalities evaluated exactly at params.
std::vector<InequalityCheck> check_case(const LedgerParams& params, LedgerCase c);

struct Verdict {
  bool feasible = false;
  std::vector<InequalityCheck> failing;
  std::optional<std::pair<Rational, Rational>> witness;  ///< (b, eps) when feasible
};

/// Conjunction of all cases at the given (b, eps).
Verdict check_all(const LedgerParams& params);

/// Admissible b at fixed (r, sigma): an interval with open or closed ends,
/// minus finitely many excluded points. For b inside it, admissible eps are
/// those with eps_lower(b) < eps < eps_upper(b) (strictness per bound).
struct FeasibleInterval {
  bool empty = true;
  Rational lo;
  bool lo_open = true;
  Rational hi;
  bool hi_open = true;
  std::vector<Rational> excluded;
  std::vector<Affine> eps_lower;  ///< eps > c + cb b
  std::vector<Affine> eps_upper;  ///< eps < c + cb b

  bool contains(const Rational& b) const;
  /// Tightest eps window at b as (lower, upper); both ends open.
  std::pair<Rational, Rational> eps_window(const Rational& b) const;
};

/// Intersects the half-lines of every case exactly, eliminating eps.
FeasibleInterval feasible_b(const Rational& r, const Rational& sigma);

}  // namespace conewave
