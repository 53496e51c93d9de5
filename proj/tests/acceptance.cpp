// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "conewave/experiments.hpp"
#include "conewave/geometry.hpp"
#include "conewave/grid.hpp"
#include "conewave/ledger.hpp"
#include "conewave/norms.hpp"
#include "conewave/solver.hpp"
#include "conewave/trilinear.hpp"

namespace cw = conewave;
namespace fs = std::filesystem;
using cw::Rational;
constexpr double kPi = std::numbers::pi;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome ledger_region() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  int checked = 0;
  const Rational nudge(1, 1000);
  for (int i = 1; i <= 50; ++i) {
    const Rational r = Rational(3, 2) + Rational(i, 100);
    const Rational edge = Rational(3, 2) / r;
    ok &= cw::feasible_b(r, edge).empty;
    ok &= cw::feasible_b(r, edge - nudge).empty;
    ok &= !cw::feasible_b(r, edge + nudge).empty;
    ok &= !cw::feasible_b(r, edge + 1).empty;
    checked += 4;
  }
  // Endpoints: s > 7/4 at r = 2; s -> 2 as r -> 3/2 from above; r = 3/2 itself excluded.
  const Rational s2 = Rational(3, 2) / Rational(2) + 1;
  ok &= s2 == Rational(7, 4);
  const Rational r_near = Rational(3, 2) + Rational(1, 1000000);
  const Rational s_near = Rational(3, 2) / r_near + 1;
  ok &= s_near < 2 && 2 - s_near < Rational(1, 100000);
  ok &= cw::feasible_b(Rational(3, 2), Rational(5)).empty;
  const double t = seconds_since(t0);
  ok &= t < 1.0;
  return {ok, std::to_string(checked) + " (r, sigma) verdicts, s_min(2) = " + cw::to_string(s2) +
                  ", s_min(3/2+1e-6) = " + fmt("%.7f", cw::to_double(s_near)) + ", " + fmt("%.3f s", t)};
}

Outcome sobolev() {
  using cw::EquationKind;
  const Rational sob = cw::sobolev_correspondence(Rational(2), Rational(3, 2), 2);
  bool ok = sob == Rational(5, 3);
  for (const auto& r : {Rational(2), Rational(7, 4), Rational(3, 2), Rational(8, 5)}) {
    ok &= cw::critical_exponent(r, 2, EquationKind::kGradSquare) == 2 / r;
    ok &= cw::critical_exponent(r, 2, EquationKind::kDerivOfSquare) == 2 / r - 1;
  }
  return {ok, "(2, 3/2, 2) -> " + cw::to_string(sob) + ", s_c = n/r and n/r - 1 on four r"};
}

Outcome volumes() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;
  for (auto c : {cw::VolumeCase::kHlhHard, cw::VolumeCase::kHlhEasy}) {
    const auto sweep = cw::default_sweep(c);
    const auto fit = cw::volume_exponent_fit(sweep, 1000000, 1, 1);
    detail += cw::to_string(c) + " (";
    for (const auto& ax : fit.axes) {
      const bool octaves = ax.values.size() >= 4 && ax.values.back() / ax.values.front() >= 8;
      const bool hit = ax.exponent && std::abs(*ax.exponent - ax.predicted) <= 0.15;
      ok &= octaves && hit;
      detail += ax.axis + " " + (ax.exponent ? fmt("%.3f", *ax.exponent) : std::string("n/a")) + "/" +
                fmt("%g", ax.predicted) + (&ax == &fit.axes.back() ? "" : ", ");
    }
    detail += ") ";
  }
  return {ok, detail + fmt("%.1f s", seconds_since(t0))};
}

Outcome constants() {
  const auto t0 = std::chrono::steady_clock::now();
  const cw::GridSpec grid{32, 64, kPi, 2 * kPi};
  cw::OptimizerConfig opt;
  opt.restarts = 4;
  opt.max_iters = 60;
  opt.tol = 1e-6;
  opt.seed = 1;
  const std::array<cw::Sign, 3> same{cw::Sign::kPlus, cw::Sign::kPlus, cw::Sign::kPlus};
  const std::array<cw::Sign, 3> mixed{cw::Sign::kPlus, cw::Sign::kPlus, cw::Sign::kMinus};
  std::map<int, std::vector<cw::ConstantMeasurement>> by_sign;
  double worst_ratio = 1.0;

  auto measure = [&](std::array<double, 3> N, std::array<double, 2> L, std::vector<cw::ConstantMeasurement>& plus) {
    cw::ConstantSetup s;
    s.N = N;
    s.L = L;
    s.signs = same;
    const auto a = cw::measure_constant(grid, s, Rational(2), opt);
    s.signs = mixed;
    const auto b = cw::measure_constant(grid, s, Rational(2), opt);
    if (a.measured_C > 0 && b.measured_C > 0) {
      worst_ratio = std::max({worst_ratio, a.measured_C / b.measured_C, b.measured_C / a.measured_C});
    } else {
      worst_ratio = INFINITY;
    }
    plus.push_back(a);
  };

  std::vector<cw::ConstantMeasurement> l_sweep, n_sweep;
  for (double L1 : {1.0, 2.0, 4.0, 8.0}) measure({8, 8, 8}, {L1, 8}, l_sweep);
  for (double N1 : {2.0, 4.0, 8.0}) measure({8, N1, 8}, {1, 1}, n_sweep);
  const double eL = cw::exponent_regression(l_sweep, {"L1"}).exponents[0];
  const double eN = cw::exponent_regression(n_sweep, {"N1"}).exponents[0];
  const bool ok = std::abs(eL - 0.5) <= 0.2 && eN <= 0.75 + 0.2 && worst_ratio <= 2.0;
  return {ok, "L1 exponent " + fmt("%.3f", eL) + " (1/2 +- 0.2), N1 exponent " + fmt("%.3f", eN) +
                  " (<= 0.95), worst sign ratio " + fmt("%.3f", worst_ratio) + " (<= 2), " +
                  fmt("%.1f s", seconds_since(t0))};
}

Outcome trilinear() {
  const cw::GridSpec g{8, 8, 2 * kPi, 2 * kPi};
  std::normal_distribution<double> d;
  double worst = 0.0;
  for (int seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng(seed);
    std::array<cw::SpaceTimeField, 3> f{cw::SpaceTimeField(g, cw::Rep::kFrequency),
                                        cw::SpaceTimeField(g, cw::Rep::kFrequency),
                                        cw::SpaceTimeField(g, cw::Rep::kFrequency)};
    for (auto& x : f)
      for (auto& v : x.values) v = {d(rng), d(rng)};
    const auto direct = cw::eval_J(f[0], f[1], f[2], cw::JMode::kDirect);
    const auto fast = cw::eval_J(f[0], f[1], f[2], cw::JMode::kFast);
    worst = std::max(worst, std::abs(direct - fast) / std::abs(direct));
  }
  return {worst <= 1e-10, "100 seeds on 8^3, worst relative gap " + fmt("%.2e", worst)};
}

double l2_diff(const cw::SpatialField& a, const cw::SpatialField& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) acc += std::norm(a.values[i] - b.values[i]);
  return std::sqrt(acc);
}

double l2(const cw::SpatialField& a) {
  double acc = 0.0;
  for (const auto& v : a.values) acc += std::norm(v);
  return std::sqrt(acc);
}

Outcome solver() {
  const cw::SpatialGrid g{16, 2 * kPi};
  const cw::Nonlinearity nl{cw::NonlinearityKind::kFullGradSquare, cw::Axis::kX1};

  cw::SolverConfig cfg;
  cfg.T = 0.1;
  cfg.n_steps = 64;
  const auto small = cw::plane_wave_data(g, 1, 0, 1e-3);
  const auto [picard, report] = cw::picard_solve(small, nl, cfg);
  const auto rk = cw::rk4_solve(small, nl, cfg, 4);
  double pr = 0.0;
  for (std::size_t k = 0; k < rk.u.size(); ++k) pr = std::max(pr, l2_diff(picard.u[k], rk.u[k]) / l2(rk.u[k]));

  const cw::SpatialGrid g32{32, 2 * kPi};
  const auto data = cw::random_data(g32, 1.75, 2.0, 1, 10.0);
  const double e0 = cw::energy(data.f, data.g);
  double drift = 0.0;
  for (int k = 1; k <= 64; ++k) {
    const auto [u, ut] = cw::free_solution(data, k / 64.0);
    drift = std::max(drift, std::abs(cw::energy(u, ut) - e0) / e0);
  }

  // Duhamel: constant forcing cos(2 x1) has w(T) = (1 - cos 2T)/4 cos(2 x1).
  std::vector<double> derr;
  for (int n : {8, 16, 32}) {
    cw::SpatialField F(g, cw::Rep::kPhysical);
    for (int a = 0; a < g.nx; ++a)
      for (int b = 0; b < g.nx; ++b) F.at(a, b) = std::cos(2 * g.dx() * a);
    const auto [w, wt] = cw::duhamel_apply(std::vector<cw::SpatialField>(n + 1, F), 1.0 / n, n);
    double e = 0.0;
    for (int a = 0; a < g.nx; ++a)
      for (int b = 0; b < g.nx; ++b)
        e = std::max(e, std::abs(w.at(a, b).real() - (1 - std::cos(2.0)) / 4 * std::cos(2 * g.dx() * a)));
    derr.push_back(e);
  }
  const double d1 = derr[0] / derr[1], d2 = derr[1] / derr[2];

  cw::CauchyData smooth{cw::SpatialField(g, cw::Rep::kPhysical), cw::SpatialField(g, cw::Rep::kPhysical)};
  for (int a = 0; a < g.nx; ++a)
    for (int b = 0; b < g.nx; ++b) {
      const double x = g.dx() * a, y = g.dx() * b;
      smooth.f.at(a, b) = 0.5 * (std::cos(x) + 0.5 * std::sin(x + 2 * y));
      smooth.g.at(a, b) = 0.15 * std::cos(2 * y);
    }
  std::vector<cw::SpatialField> ends;
  for (int n : {8, 16, 32}) {
    cw::SolverConfig c;
    c.T = 1.0;
    c.n_steps = n;
    ends.push_back(cw::rk4_solve(smooth, nl, c).u.back());
  }
  const double rr = l2_diff(ends[0], ends[1]) / l2_diff(ends[1], ends[2]);

  const bool ok = report.converged && pr <= 1e-4 && drift <= 1e-10 && std::abs(d1 / 4 - 1) <= 0.2 &&
                  std::abs(d2 / 4 - 1) <= 0.2 && std::abs(rr / 16 - 1) <= 0.2;
  return {ok, "Picard vs RK4 " + fmt("%.2e", pr) + " (<= 1e-4), energy drift " + fmt("%.1e", drift) +
                  " (<= 1e-10), Duhamel ratios " + fmt("%.2f", d1) + "/" + fmt("%.2f", d2) + " (4), RK4 ratio " +
                  fmt("%.2f", rr) + " (16)"};
}

Outcome scaling() {
  const cw::SpatialGrid g{32, 2 * kPi};
  double worst = 0.0;
  bool aliased = false;
  for (auto [s, r] : {std::pair{1.75, 2.0}, std::pair{2.0, 1.5}}) {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      const auto data = cw::random_data(g, s, r, seed, 10.0);
      for (double lambda : {2.0, 4.0}) {
        const auto rep = cw::scaling_law_check(data.f, s, r, lambda);
        aliased |= rep.aliased;
        worst = std::max(worst, rep.rel_error);
      }
    }
  }
  return {!aliased && worst <= 1e-12, "(7/4, 2) and (2, 3/2), lambda 2 and 4, worst relative error " + fmt("%.2e", worst)};
}

Outcome strichartz() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto table = cw::strichartz_probe(16, 4.0, {32, 64, 128, 256}, 1, 1.0, 64, 1);
  const bool adm = cw::wave_admissible(Rational(6), Rational(6), 2) && !cw::wave_admissible(Rational(4), std::nullopt, 2);
  const bool ok = std::abs(table.slope) <= 0.1 && adm;
  return {ok, "slope " + fmt("%.4f", table.slope) + " (|.| <= 0.1), (6,6) admissible, (4,inf) not: " +
                  (adm ? "yes" : "no") + ", " + fmt("%.1f s", seconds_since(t0))};
}

double lp_power(const cw::SpaceTimeField& f, double p) {
  double acc = 0.0;
  for (const auto& v : f.values) acc += std::pow(std::abs(v), p);
  return acc;
}

Outcome partitions() {
  const cw::GridSpec g{16, 16, 2 * kPi, 2 * kPi};
  double worst = 0.0;
  std::normal_distribution<double> d;
  for (unsigned seed = 1; seed <= 5; ++seed) {
    std::mt19937_64 rng(seed);
    cw::SpaceTimeField F(g, cw::Rep::kFrequency);
    for (auto& v : F.values) v = {d(rng), d(rng)};
    for (double p : {1.5, 2.0, 3.0}) {
      double sum = 0.0;
      for (double N : cw::dyadic_bands(g)) {
        const auto FN = cw::dyadic_restrict(F, N);
        const double band = lp_power(FN, p);
        sum += band;
        double signed_sum = 0.0;
        for (double L : cw::modulation_bands(g))
          for (auto s : {cw::Sign::kPlus, cw::Sign::kMinus}) signed_sum += lp_power(cw::dyadic_restrict(F, N, L, s), p);
        if (band > 0) worst = std::max(worst, std::abs(signed_sum - band) / band);
      }
      worst = std::max(worst, std::abs(sum - lp_power(F, p)) / lp_power(F, p));
    }
  }
  return {worst <= 1e-12, "band and signed modulation sums, p in {1.5, 2, 3}, worst relative gap " + fmt("%.2e", worst)};
}

std::map<std::string, std::string> run_files(cw::ExperimentConfig cfg, int workers, const fs::path& dir) {
  fs::remove_all(dir);
  cfg.workers = workers;
  cfg.out = dir;
  cfg.echo = cw::parse_config(cw::render_config(cfg)).echo;
  cw::run_experiment(cfg);
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().filename() == "manifest.json") continue;
    std::ifstream is(e.path(), std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    out[e.path().filename().string()] = ss.str();
  }
  return out;
}

Outcome determinism() {
  const auto base = fs::temp_directory_path() / "conewave_acceptance";
  std::vector<cw::ExperimentConfig> configs;
  auto make = [&](cw::ExperimentKind k) {
    cw::ExperimentConfig c;
    c.kind = k;
    c.seed = 20240601;
    return c;
  };
  {
    auto c = make(cw::ExperimentKind::kVolumes);
    c.volumes.samples = 20000;
    configs.push_back(c);
  }
  {
    auto c = make(cw::ExperimentKind::kConstants);
    c.constants.nx = 16;
    c.constants.nt = 16;
    c.constants.N0 = {4};
    c.constants.N1 = {2, 4};
    c.constants.N2 = {4};
    c.constants.restarts = 2;
    c.constants.max_iters = 10;
    configs.push_back(c);
  }
  configs.push_back(make(cw::ExperimentKind::kLedger));
  {
    auto c = make(cw::ExperimentKind::kSolve);
    c.solve.nx = 16;
    c.solve.n_steps = 16;
    c.solve.band_limit = 5;
    c.solve.amplitudes = {1, 100, 10000};
    c.solve.bisection_steps = 3;
    configs.push_back(c);
  }
  {
    auto c = make(cw::ExperimentKind::kScaling);
    c.scaling.nx = 16;
    c.scaling.band_limit = 3;
    configs.push_back(c);
  }
  {
    auto c = make(cw::ExperimentKind::kStrichartz);
    c.strichartz.ensemble = 4;
    c.strichartz.ladder = {16, 32, 64};
    c.strichartz.n_slices = 16;
    configs.push_back(c);
  }
  bool ok = true;
  std::string detail;
  for (auto fmt_kind : {cw::Format::kCsv, cw::Format::kJson}) {
    for (auto c : configs) {
      c.format = fmt_kind;
      const auto name = cw::to_string(c.kind);
      const auto a = run_files(c, 1, base / (name + "_w1"));
      const auto b = run_files(c, 3, base / (name + "_w3"));
      const auto again = run_files(c, 1, base / (name + "_w1b"));
      const bool same = !a.empty() && a == b && a == again;
      ok &= same;
      if (!same) detail += name + " differs; ";
    }
  }
  fs::remove_all(base);
  return {ok, detail.empty() ? "six experiments x {csv, json}, workers 1, 3 and a rerun, byte-identical" : detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"C1 ledger region", ledger_region},     {"C2 Sobolev correspondence", sobolev},
      {"C3 volume exponents", volumes},        {"C4 restriction-constant exponents", constants},
      {"C5 trilinear form oracle", trilinear}, {"C6 solver", solver},
      {"C7 scaling law", scaling},             {"C8 Strichartz probe", strichartz},
      {"C9 partition identities", partitions}, {"C10 determinism", determinism},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures;
}
