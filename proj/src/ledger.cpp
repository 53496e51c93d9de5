#include "conewave/ledger.hpp"

#include <algorithm>
#include <stdexcept>

namespace conewave {

namespace {

Affine constant(const Rational& c) { return {c, 0, 0}; }
Affine b_term(const Rational& coef, const Rational& c = 0) { return {c, coef, 0}; }
Affine operator-(const Affine& x, const Affine& y) { return {x.c - y.c, x.cb - y.cb, x.ce - y.ce}; }

bool evaluate(const Rational& lhs, Relation rel, const Rational& rhs) {
  switch (rel) {
    case Relation::kGreater:
      return lhs > rhs;
    case Relation::kGreaterEq:
      return lhs >= rhs;
    case Relation::kLess:
      return lhs < rhs;
    case Relation::kNotEqual:
      return lhs != rhs;
  }
  return false;
}

// Summation over N1 <= N0 ~ N2 of N1^A / N0^B: B >= A, B >= 0, and the
// logarithmic case A = B = 0 excluded. B is constant in every use, so the
// exclusion reduces to A != 0 when B = 0 and is void otherwise.
void hlh_summation(std::vector<Constraint>& out, LedgerCase c, const Affine& a, const Affine& b) {
  if (b.cb != 0 || b.ce != 0) throw std::logic_error("hlh_summation: B must be constant");
  out.push_back({c, "summation (i): B >= A", b, Relation::kGreaterEq, a});
  out.push_back({c, "summation (ii): B >= 0", b, Relation::kGreaterEq, constant(0)});
  if (b.c == 0) out.push_back({c, "summation (iii): A = B = 0 excluded", a, Relation::kNotEqual, constant(0)});
}

// Summation over N0 <= N1 ~ N2 of N0^A / N1^B: B > A and B > 0.
void lhh_summation(std::vector<Constraint>& out, LedgerCase c, const Affine& a, const Affine& b) {
  out.push_back({c, "summation (i): B > A", b, Relation::kGreater, a});
  out.push_back({c, "summation (ii): B > 0", b, Relation::kGreater, constant(0)});
}

}  // namespace

std::string to_string(LedgerCase c) {
  switch (c) {
    case LedgerCase::kGlobal:
      return "global";
    case LedgerCase::kHlhSmallL2:
      return "hlh_small_l2";
    case LedgerCase::kHlhLargeL2:
      return "hlh_large_l2";
    case LedgerCase::kLhhSmallL2:
      return "lhh_small_l2";
    case LedgerCase::kLhhLargeL2:
      return "lhh_large_l2";
  }
  return "unknown";
}

const std::vector<LedgerCase>& all_ledger_cases() {
  static const std::vector<LedgerCase> cases{LedgerCase::kGlobal, LedgerCase::kHlhSmallL2,
                                             LedgerCase::kHlhLargeL2, LedgerCase::kLhhSmallL2,
                                             LedgerCase::kLhhLargeL2};
  return cases;
}

std::string to_string(Relation rel) {
  switch (rel) {
    case Relation::kGreater:
      return ">";
    case Relation::kGreaterEq:
      return ">=";
    case Relation::kLess:
      return "<";
    case Relation::kNotEqual:
      return "!=";
  }
  return "?";
}

std::vector<Constraint> case_constraints(const Rational& r, const Rational& sigma, LedgerCase c) {
  if (r <= 1 || r > 2) throw std::invalid_argument("ledger: r must lie in (1, 2]");
  const Rational p = r / (r - 1);
  const Rational inv_r = 1 / r;
  const Rational inv_p = 1 / p;
  std::vector<Constraint> out;
  switch (c) {
    case LedgerCase::kGlobal:
      out.push_back({c, "r > 3/2", constant(r), Relation::kGreater, constant(Rational(3, 2))});
      out.push_back({c, "b > 1/r", b_term(1), Relation::kGreater, constant(inv_r)});
      out.push_back({c, "b < 1", b_term(1), Relation::kLess, constant(1)});
      out.push_back({c, "eps > 0", {0, 0, 1}, Relation::kGreater, constant(0)});
      out.push_back({c, "eps < 1 - b", {0, 0, 1}, Relation::kLess, b_term(-1, 1)});
      out.push_back({c, "b + eps - 1 < 0", {-1, 1, 1}, Relation::kLess, constant(0)});
      break;
    case LedgerCase::kHlhSmallL2:
      out.push_back({c, "L1 sum: 1/r - b < 0", b_term(-1, inv_r), Relation::kLess, constant(0)});
      out.push_back({c, "L2 sum: 1/(2r) - b < 0", b_term(-1, inv_r / 2), Relation::kLess, constant(0)});
      hlh_summation(out, c, constant(Rational(3, 2) * inv_r - sigma), constant(0));
      break;
    case LedgerCase::kHlhLargeL2:
      out.push_back({c, "L1 sum: 1/r - b < 0", b_term(-1, inv_r), Relation::kLess, constant(0)});
      out.push_back({c, "L2 tail: -b < 0", b_term(-1), Relation::kLess, constant(0)});
      hlh_summation(out, c, b_term(-1, 2 * inv_r - sigma), constant(0));
      break;
    case LedgerCase::kLhhSmallL2: {
      out.push_back({c, "L1 sum: 1/r - b < 0", b_term(-1, inv_r), Relation::kLess, constant(0)});
      out.push_back({c, "L2 sum: 1/(2r) - b < 0", b_term(-1, inv_r / 2), Relation::kLess, constant(0)});
      const Affine a = constant(inv_p + sigma);
      const Affine b = constant(2 * sigma - Rational(3, 2) * inv_r + inv_p);
      lhh_summation(out, c, a, b);
      out.push_back({c, "stated: 2 sigma > 3/(2r) - 1/p", constant(2 * sigma), Relation::kGreater,
                     constant(Rational(3, 2) * inv_r - inv_p)});
      out.push_back({c, "stated: 2 sigma - 3/(2r) + 1/p > sigma + 1/p", b, Relation::kGreater, a});
      break;
    }
    case LedgerCase::kLhhLargeL2: {
      out.push_back({c, "L1 sum: 1/r - b < 0", b_term(-1, inv_r), Relation::kLess, constant(0)});
      out.push_back({c, "L2 tail: -b < 0", b_term(-1), Relation::kLess, constant(0)});
      const Affine positivity = b_term(-(2 * r / p - 1), 2 * sigma - 2 * inv_r + 2 * inv_p);
      out.push_back({c, "positivity: 2 sigma - 2/r + 2/p - (2r/p - 1) b > 0", positivity, Relation::kGreater,
                     constant(0)});
      out.push_back({c, "gap: sigma - 2/r + b > 0", b_term(1, sigma - 2 * inv_r), Relation::kGreater, constant(0)});
      break;
    }
  }
  return out;
}

std::vector<InequalityCheck> check_case(const LedgerParams& params, LedgerCase c) {
  std::vector<InequalityCheck> out;
  for (const auto& con : case_constraints(params.r, params.sigma, c)) {
    InequalityCheck chk;
    chk.case_id = con.case_id;
    chk.name = con.name;
    chk.lhs = con.lhs.at(params.b, params.eps);
    chk.relation = con.relation;
    chk.rhs = con.rhs.at(params.b, params.eps);
    chk.holds = evaluate(chk.lhs, chk.relation, chk.rhs);
    out.push_back(std::move(chk));
  }
  return out;
}

Verdict check_all(const LedgerParams& params) {
  Verdict v;
  for (LedgerCase c : all_ledger_cases()) {
    for (auto& chk : check_case(params, c)) {
      if (!chk.holds) v.failing.push_back(std::move(chk));
    }
  }
  v.feasible = v.failing.empty();
  if (v.feasible) v.witness = std::make_pair(params.b, params.eps);
  return v;
}

bool FeasibleInterval::contains(const Rational& b) const {
  if (empty) return false;
  if (lo_open ? b <= lo : b < lo) return false;
  if (hi_open ? b >= hi : b > hi) return false;
  return std::find(excluded.begin(), excluded.end(), b) == excluded.end();
}

std::pair<Rational, Rational> FeasibleInterval::eps_window(const Rational& b) const {
  if (eps_lower.empty() || eps_upper.empty()) throw std::logic_error("eps_window: unbounded eps range");
  Rational lo_eps = eps_lower.front().at(b, 0);
  for (const auto& f : eps_lower) lo_eps = std::max(lo_eps, f.at(b, 0));
  Rational hi_eps = eps_upper.front().at(b, 0);
  for (const auto& f : eps_upper) hi_eps = std::min(hi_eps, f.at(b, 0));
  return {lo_eps, hi_eps};
}

namespace {

struct Bound {
  Rational value;
  bool open = true;
};

void tighten_lower(std::optional<Bound>& cur, const Bound& cand) {
  if (!cur || cand.value > cur->value || (cand.value == cur->value && cand.open)) cur = cand;
}

void tighten_upper(std::optional<Bound>& cur, const Bound& cand) {
  if (!cur || cand.value < cur->value || (cand.value == cur->value && cand.open)) cur = cand;
}

}  // namespace

FeasibleInterval feasible_b(const Rational& r, const Rational& sigma) {
  FeasibleInterval out;
  std::optional<Bound> lo;
  std::optional<Bound> hi;
  bool contradiction = false;

  // d(b) > 0, d(b) >= 0 or d(b) != 0 with d affine in b only.
  auto add_b_constraint = [&](const Affine& d, Relation rel) {
    if (d.cb == 0) {
      if (!evaluate(d.c, rel, 0)) contradiction = true;
      return;
    }
    const Rational root = -d.c / d.cb;
    if (rel == Relation::kNotEqual) {
      out.excluded.push_back(root);
    } else if (d.cb > 0) {
      tighten_lower(lo, {root, rel == Relation::kGreater});
    } else {
      tighten_upper(hi, {root, rel == Relation::kGreater});
    }
  };

  for (LedgerCase c : all_ledger_cases()) {
    for (const auto& con : case_constraints(r, sigma, c)) {
      Affine d = con.lhs - con.rhs;
      Relation rel = con.relation;
      if (rel == Relation::kLess) {
        d = Affine{0, 0, 0} - d;
        rel = Relation::kGreater;
      }
      if (d.ce == 0) {
        add_b_constraint(d, rel);
        continue;
      }
      if (rel != Relation::kGreater) throw std::logic_error("feasible_b: only strict eps constraints supported");
      // d.ce * eps + (c + cb b) > 0.
      const Affine rest{d.c / d.ce, d.cb / d.ce, 0};
      if (d.ce > 0) {
        out.eps_lower.push_back(Affine{0, 0, 0} - rest);
      } else {
        out.eps_upper.push_back(Affine{0, 0, 0} - rest);
      }
    }
  }
  // Eliminate eps: every lower bound must sit strictly below every upper one.
  for (const auto& l : out.eps_lower) {
    for (const auto& u : out.eps_upper) add_b_constraint(u - l, Relation::kGreater);
  }

  if (contradiction || !lo || !hi) return out;
  out.lo = lo->value;
  out.lo_open = lo->open;
  out.hi = hi->value;
  out.hi_open = hi->open;
  out.empty = out.lo > out.hi || (out.lo == out.hi && (out.lo_open || out.hi_open));
  std::erase_if(out.excluded, [&](const Rational& x) {
    return (out.lo_open ? x <= out.lo : x < out.lo) || (out.hi_open ? x >= out.hi : x > out.hi);
  });
  std::sort(out.excluded.begin(), out.excluded.end());
  out.excluded.erase(std::unique(out.excluded.begin(), out.excluded.end()), out.excluded.end());
  if (!out.empty && out.lo == out.hi && !out.excluded.empty()) out.empty = true;
  return out;
}

}  // namespace conewave
