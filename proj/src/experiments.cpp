#include "conewave/experiments.hpp"

#include <algorithm>
#include <array>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <functional>
#include <nlohmann/json.hpp>
#include <numbers>
#include <sstream>

#include "conewave/geometry.hpp"
#include "conewave/ledger.hpp"
#include "conewave/norms.hpp"
#include "conewave/parallel.hpp"
#include "conewave/solver.hpp"
#include "conewave/trilinear.hpp"

#ifndef CONEWAVE_VERSION
#define CONEWAVE_VERSION "0.0.0"
#endif

namespace conewave {

ConfigError::ConfigError(const std::string& message, std::string key, std::optional<int> line)
    : std::runtime_error(message), key_(std::move(key)), line_(line) {}

std::string tool_version() { return CONEWAVE_VERSION; }

namespace {

constexpr std::array<std::pair<ExperimentKind, const char*>, 6> kKindNames{{
    {ExperimentKind::kVolumes, "volumes"},
    {ExperimentKind::kConstants, "constants"},
    {ExperimentKind::kLedger, "ledger"},
    {ExperimentKind::kSolve, "solve"},
    {ExperimentKind::kScaling, "scaling"},
    {ExperimentKind::kStrichartz, "strichartz"},
}};

const std::map<std::string, std::vector<std::string>>& known_keys() {
  static const std::map<std::string, std::vector<std::string>> keys{
      {"experiment", {"kind", "seed", "out", "workers", "format"}},
      {"volumes", {"cases", "samples"}},
      {"constants",
       {"nx", "nt", "spatial_period", "time_period", "r", "N0", "N1", "N2", "L1", "L2", "signs", "restarts",
        "max_iters", "tol"}},
      {"ledger", {"r_count", "r_step", "r_values", "s_offsets"}},
      {"solve",
       {"nx", "period", "T", "n_steps", "nonlinearity", "axis", "data", "s", "r", "band_limit", "k1", "k2",
        "amplitudes", "lambdas", "bisection_steps", "rk4_substeps"}},
      {"scaling", {"nx", "period", "pairs", "lambdas", "band_limit", "ensemble"}},
      {"strichartz", {"ensemble", "q_t", "ladder", "T", "n_slices"}},
  };
  return keys;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Line of `key` inside [section], 1-based.
std::optional<int> locate(const std::string& text, const std::string& section, const std::string& key) {
  std::stringstream ss(text);
  std::string line;
  std::string current;
  int number = 0;
  while (std::getline(ss, line)) {
    ++number;
    const std::string t = trim(line);
    if (t.empty() || t[0] == ';' || t[0] == '#') continue;
    if (t.front() == '[' && t.back() == ']') {
      current = trim(t.substr(1, t.size() - 2));
      if (key.empty() && current == section) return number;
      continue;
    }
    const auto eq = t.find('=');
    if (current == section && eq != std::string::npos && trim(t.substr(0, eq)) == key) return number;
  }
  return std::nullopt;
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("trailing characters in '" + s + "'");
  return v;
}

long long parse_int(const std::string& s) {
  std::size_t used = 0;
  const long long v = std::stoll(s, &used);
  if (used != s.size()) throw std::invalid_argument("not an integer: '" + s + "'");
  return v;
}

double parse_period(const std::string& s) {
  if (s.size() >= 2 && s.substr(s.size() - 2) == "pi") {
    const std::string mult = trim(s.substr(0, s.size() - 2));
    return (mult.empty() ? 1.0 : parse_double(mult)) * std::numbers::pi;
  }
  return parse_double(s);
}

bool parse_bool_like_format(const std::string& s, Format& f) {
  if (s == "csv") {
    f = Format::kCsv;
  } else if (s == "json") {
    f = Format::kJson;
  } else {
    return false;
  }
  return true;
}

template <class T, class F>
std::vector<T> parse_list(const std::string& s, F conv) {
  std::vector<T> out;
  for (const auto& item : split_list(s)) out.push_back(conv(item));
  return out;
}

class Reader {
 public:
  Reader(const std::string& text, ExperimentConfig& config) : text_(text), config_(config) {}

  // Applies `apply` to the raw value of section.key if present; conversion
  // failures become ConfigErrors pointing at the key.
  void get(const std::string& section, const std::string& key, const std::function<void(const std::string&)>& apply) {
    const auto sec = config_.echo.find(section);
    if (sec == config_.echo.end()) return;
    const auto it = sec->second.find(key);
    if (it == sec->second.end()) return;
    try {
      apply(it->second);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError("bad value for " + section + "." + key + ": " + e.what(), section + "." + key,
                        locate(text_, section, key));
    }
  }

 private:
  const std::string& text_;
  ExperimentConfig& config_;
};

std::string iso_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::array<char, 32> buf{};
  std::strftime(buf.data(), buf.size(), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf.data();
}

std::string format_list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_value(v[i]);
  }
  return out;
}

std::string format_list(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(v[i]);
  }
  return out;
}

std::string format_list(const std::vector<Rational>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += to_string(v[i]);
  }
  return out;
}

std::string format_list(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += v[i];
  }
  return out;
}

NonlinearityKind parse_nonlinearity(const std::string& s) {
  if (s == "full_grad_square") return NonlinearityKind::kFullGradSquare;
  if (s == "spatial_grad_square") return NonlinearityKind::kSpatialGradSquare;
  if (s == "deriv_of_square") return NonlinearityKind::kDerivOfSquare;
  throw std::invalid_argument("unknown nonlinearity '" + s + "'");
}

Axis parse_axis(const std::string& s) {
  if (s == "t") return Axis::kT;
  if (s == "x1") return Axis::kX1;
  if (s == "x2") return Axis::kX2;
  throw std::invalid_argument("unknown axis '" + s + "'");
}

std::array<Sign, 3> parse_signs(const std::string& s) {
  if (s.size() != 3) throw std::invalid_argument("sign pattern must have three characters: '" + s + "'");
  std::array<Sign, 3> out{};
  for (int i = 0; i < 3; ++i) {
    if (s[i] == '+') {
      out[i] = Sign::kPlus;
    } else if (s[i] == '-') {
      out[i] = Sign::kMinus;
    } else {
      throw std::invalid_argument("bad sign '" + std::string(1, s[i]) + "'");
    }
  }
  return out;
}

// Runs n tasks in parallel; a throwing task leaves its slot empty and adds
// a message to `errors` (in task order, so the list is deterministic).
template <class Row>
std::vector<std::optional<Row>> run_tasks(std::size_t n, int workers, std::vector<std::string>& errors,
                                          const std::string& label, const std::function<Row(std::size_t)>& body) {
  std::vector<std::optional<Row>> out(n);
  std::vector<std::string> messages(n);
  parallel_for(n, workers, [&](std::size_t i) {
    try {
      out[i] = body(i);
    } catch (const std::exception& e) {
      messages[i] = e.what();
    }
  });
  for (std::size_t i = 0; i < n; ++i) {
    if (!out[i]) errors.push_back(label + " task " + std::to_string(i) + ": " + messages[i]);
  }
  return out;
}

Value optional_value(const std::optional<double>& v) {
  if (v) return *v;
  return std::string{};
}

std::vector<Table> volume_tables(const ExperimentConfig& cfg, int workers, std::vector<std::string>& errors) {
  Table points("volumes", {"case", "axis", "value", "volume", "std_error", "samples", "bound"});
  Table fits("volume_fits", {"case", "axis", "exponent", "r2", "predicted"});
  for (const auto& name : cfg.volumes.cases) {
    try {
      const VolumeCase vc = parse_volume_case(name);
      const VolumeSweep sweep = default_sweep(vc);
      const auto case_seed = mix_seed(*cfg.seed, static_cast<std::uint64_t>(vc));
      const VolumeFit fit = volume_exponent_fit(sweep, cfg.volumes.samples, case_seed, workers);
      for (std::size_t a = 0; a < fit.axes.size(); ++a) {
        const auto& ax = fit.axes[a];
        for (std::size_t i = 0; i < ax.values.size(); ++i) {
          const double bound = volume_bound(vc, ax.params[i]);
          points.add_row({{"case", name},
                          {"axis", ax.axis},
                          {"value", ax.values[i]},
                          {"volume", ax.volumes[i].mean},
                          {"std_error", ax.volumes[i].std_error},
                          {"samples", static_cast<std::int64_t>(ax.volumes[i].samples)},
                          {"bound", bound}});
        }
        fits.add_row({{"case", name},
                      {"axis", ax.axis},
                      {"exponent", optional_value(ax.exponent)},
                      {"r2", optional_value(ax.r2)},
                      {"predicted", ax.predicted}});
      }
    } catch (const std::exception& e) {
      errors.push_back("volumes case " + name + ": " + e.what());
    }
  }
  return {points, fits};
}

std::string sign_text(const std::array<Sign, 3>& s) {
  std::string out;
  for (Sign x : s) out += x == Sign::kPlus ? '+' : '-';
  return out;
}

std::vector<Table> constant_tables(const ExperimentConfig& cfg, int workers, std::vector<std::string>& errors) {
  const auto& c = cfg.constants;
  const GridSpec grid{c.nx, c.nt, c.spatial_period, c.time_period};
  std::vector<ConstantSetup> setups;
  for (const auto& sg : c.signs) {
    for (double n0 : c.N0) {
      for (double n1 : c.N1) {
        for (double n2 : c.N2) {
          for (double l1 : c.L1) {
            for (double l2 : c.L2) setups.push_back({{n0, n1, n2}, {l1, l2}, parse_signs(sg)});
          }
        }
      }
    }
  }
  const auto results = run_tasks<ConstantMeasurement>(setups.size(), workers, errors, "constants", [&](std::size_t i) {
    OptimizerConfig oc;
    oc.restarts = c.restarts;
    oc.max_iters = c.max_iters;
    oc.tol = c.tol;
    oc.seed = mix_seed(*cfg.seed, i);
    return measure_constant(grid, setups[i], c.r, oc);
  });

  Table rows("constants", {"N0", "N1", "N2", "L1", "L2", "signs", "r", "C", "predicted_hard", "predicted_easy",
                           "iterations", "converged", "degenerate"});
  const auto hard = EstimateForm::make(EstimateKind::kHard, c.r);
  const auto easy = EstimateForm::make(EstimateKind::kEasy, c.r);
  for (const auto& m : results) {
    if (!m) continue;
    rows.add_row({{"N0", m->N[0]},
                  {"N1", m->N[1]},
                  {"N2", m->N[2]},
                  {"L1", m->L[0]},
                  {"L2", m->L[1]},
                  {"signs", sign_text(m->signs)},
                  {"r", m->r},
                  {"C", m->measured_C},
                  {"predicted_hard", predicted_constant(hard, m->N, m->L)},
                  {"predicted_easy", predicted_constant(easy, m->N, m->L)},
                  {"iterations", static_cast<std::int64_t>(m->iterations)},
                  {"converged", m->converged},
                  {"degenerate", m->degenerate}});
  }

  Table fits("constant_fits", {"signs", "axis", "exponent", "r2", "points"});
  std::vector<std::string> varied;
  const std::vector<std::pair<std::string, std::size_t>> sizes{
      {"N0", c.N0.size()}, {"N1", c.N1.size()}, {"N2", c.N2.size()}, {"L1", c.L1.size()}, {"L2", c.L2.size()}};
  for (const auto& [axis, n] : sizes) {
    if (n > 1) varied.push_back(axis);
  }
  if (!varied.empty()) {
    for (const auto& sg : c.signs) {
      std::vector<ConstantMeasurement> ms;
      for (const auto& m : results) {
        if (m && !m->degenerate && sign_text(m->signs) == sg) ms.push_back(*m);
      }
      try {
        const ExponentFit fit = exponent_regression(ms, varied);
        for (std::size_t a = 0; a < fit.axes.size(); ++a) {
          fits.add_row({{"signs", sg},
                        {"axis", fit.axes[a]},
                        {"exponent", fit.exponents[a]},
                        {"r2", fit.r2},
                        {"points", static_cast<std::int64_t>(ms.size())}});
        }
      } catch (const std::exception& e) {
        errors.push_back("constants fit " + sg + ": " + e.what());
      }
    }
  }
  return {rows, fits};
}

std::vector<Rational> ledger_r_values(const LedgerSettings& l) {
  if (!l.r_values.empty()) return l.r_values;
  std::vector<Rational> out;
  for (int i = 1; i <= l.r_count; ++i) out.push_back(Rational(3, 2) + i * l.r_step);
  return out;
}

std::vector<Table> ledger_tables(const ExperimentConfig& cfg, int workers, std::vector<std::string>& errors) {
  const auto rs = ledger_r_values(cfg.ledger);
  const auto& offsets = cfg.ledger.s_offsets;
  struct Row {
    Rational r, s;
    FeasibleInterval iv;
  };
  const auto results = run_tasks<Row>(rs.size() * offsets.size(), workers, errors, "ledger", [&](std::size_t i) {
    const Rational& r = rs[i / offsets.size()];
    const Rational s = Rational(3, 2) / r + 1 + offsets[i % offsets.size()];
    return Row{r, s, feasible_b(r, s - 1)};
  });
  Table t("ledger", {"r", "s", "feasible", "b_lo", "b_hi"});
  for (const auto& row : results) {
    if (!row) continue;
    const bool ok = !row->iv.empty;
    t.add_row({{"r", row->r},
               {"s", row->s},
               {"feasible", ok},
               {"b_lo", ok ? Value(row->iv.lo) : Value(std::string{})},
               {"b_hi", ok ? Value(row->iv.hi) : Value(std::string{})}});
  }
  return {t};
}

double relative_l2(const SpatialField& a, const SpatialField& b) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    num += std::norm(a.values[i] - b.values[i]);
    den += std::norm(b.values[i]);
  }
  return den == 0.0 ? std::sqrt(num) : std::sqrt(num / den);
}

std::vector<Table> solve_tables(const ExperimentConfig& cfg, int workers, std::vector<std::string>& errors) {
  const auto& sv = cfg.solve;
  const SpatialGrid grid{sv.nx, sv.period};
  const CauchyData data = sv.data == "plane_wave" ? plane_wave_data(grid, sv.k1, sv.k2, 1.0)
                                                  : random_data(grid, sv.s, sv.r, mix_seed(*cfg.seed, 0), sv.band_limit);
  const Nonlinearity nl{parse_nonlinearity(sv.nonlinearity), parse_axis(sv.axis)};
  SolverConfig base;
  base.T = sv.T;
  base.n_steps = sv.n_steps;

  const auto probes =
      run_tasks<ExistenceTable>(sv.lambdas.size(), workers, errors, "existence", [&](std::size_t i) {
        SolverConfig sc = base;
        sc.T = base.T / sv.lambdas[i];
        return existence_probe(rescaled_data(data, sv.lambdas[i]), nl, sc, sv.amplitudes, sv.bisection_steps);
      });
  Table existence("existence", {"lambda", "amplitude", "converged", "iterations", "last_residual"});
  Table thresholds("existence_threshold", {"lambda", "threshold"});
  for (std::size_t i = 0; i < probes.size(); ++i) {
    if (!probes[i]) continue;
    for (const auto& row : probes[i]->rows) {
      existence.add_row({{"lambda", sv.lambdas[i]},
                         {"amplitude", row.amplitude},
                         {"converged", row.converged},
                         {"iterations", static_cast<std::int64_t>(row.iterations)},
                         {"last_residual", row.last_residual}});
    }
    thresholds.add_row({{"lambda", sv.lambdas[i]}, {"threshold", optional_value(probes[i]->threshold)}});
  }

  struct Compare {
    double amplitude;
    bool picard_converged;
    std::int64_t picard_iterations;
    bool rk4_blew_up;
    double rel_diff;
    double energy0;
    double energyT;
  };
  const auto comps = run_tasks<Compare>(sv.amplitudes.size(), workers, errors, "compare", [&](std::size_t i) {
    const CauchyData d = scaled(data, sv.amplitudes[i]);
    const auto [picard, report] = picard_solve(d, nl, base);
    const Trajectory rk = rk4_solve(d, nl, base, sv.rk4_substeps);
    Compare c{sv.amplitudes[i], report.converged, static_cast<std::int64_t>(report.residuals.size()), rk.blew_up,
              0.0, energy(rk.u.front(), rk.u_t.front()), 0.0};
    if (!rk.blew_up) {
      c.rel_diff = relative_l2(picard.u.back(), rk.u.back());
      c.energyT = energy(rk.u.back(), rk.u_t.back());
    } else {
      c.rel_diff = std::numeric_limits<double>::infinity();
      c.energyT = std::numeric_limits<double>::infinity();
    }
    return c;
  });
  Table compare("picard_rk4", {"amplitude", "picard_converged", "picard_iterations", "rk4_blew_up", "rel_l2_diff",
                               "energy_0", "energy_T"});
  for (const auto& c : comps) {
    if (!c) continue;
    compare.add_row({{"amplitude", c->amplitude},
                     {"picard_converged", c->picard_converged},
                     {"picard_iterations", c->picard_iterations},
                     {"rk4_blew_up", c->rk4_blew_up},
                     {"rel_l2_diff", c->rel_diff},
                     {"energy_0", c->energy0},
                     {"energy_T", c->energyT}});
  }
  return {existence, thresholds, compare};
}

std::vector<Table> scaling_tables(const ExperimentConfig& cfg, int workers, std::vector<std::string>& errors) {
  const auto& sc = cfg.scaling;
  const SpatialGrid grid{sc.nx, sc.period};
  const std::size_t per_pair = sc.lambdas.size() * static_cast<std::size_t>(sc.ensemble);
  struct Row {
    Rational s, r;
    double lambda;
    std::int64_t member;
    ScalingReport rep;
  };
  const auto results =
      run_tasks<Row>(sc.pairs.size() * per_pair, workers, errors, "scaling", [&](std::size_t i) {
        const auto& [s, r] = sc.pairs[i / per_pair];
        const std::size_t rest = i % per_pair;
        const double lambda = sc.lambdas[rest / static_cast<std::size_t>(sc.ensemble)];
        const auto member = static_cast<std::uint64_t>(rest % static_cast<std::size_t>(sc.ensemble));
        const CauchyData d = random_data(grid, to_double(s), to_double(r), mix_seed(*cfg.seed, member), sc.band_limit);
        return Row{s, r, lambda, static_cast<std::int64_t>(member),
                   scaling_law_check(d.f, to_double(s), to_double(r), lambda)};
      });
  Table t("scaling", {"s", "r", "lambda", "member", "ratio", "expected", "rel_error", "aliased"});
  for (const auto& row : results) {
    if (!row) continue;
    t.add_row({{"s", row->s},
               {"r", row->r},
               {"lambda", row->lambda},
               {"member", row->member},
               {"ratio", row->rep.ratio},
               {"expected", row->rep.expected},
               {"rel_error", row->rep.rel_error},
               {"aliased", row->rep.aliased}});
  }
  return {t};
}

std::vector<Table> strichartz_tables(const ExperimentConfig& cfg, int workers, std::vector<std::string>& errors) {
  const auto& st = cfg.strichartz;
  Table ratios("strichartz", {"nx", "member", "ratio"});
  Table summary("strichartz_summary", {"nx", "median_log2_ratio"});
  Table fit("strichartz_fit", {"q_t", "T", "ensemble", "slope", "r2"});
  try {
    const StrichartzTable table = strichartz_probe(st.ensemble, st.q_t, st.ladder, *cfg.seed, st.T, st.n_slices, workers);
    for (const auto& row : table.rows) {
      for (std::size_t m = 0; m < row.ratios.size(); ++m) {
        ratios.add_row({{"nx", static_cast<std::int64_t>(row.nx)},
                        {"member", static_cast<std::int64_t>(m)},
                        {"ratio", row.ratios[m]}});
      }
      summary.add_row({{"nx", static_cast<std::int64_t>(row.nx)}, {"median_log2_ratio", row.median_log2_ratio}});
    }
    fit.add_row({{"q_t", table.q_t},
                 {"T", table.T},
                 {"ensemble", static_cast<std::int64_t>(st.ensemble)},
                 {"slope", table.slope},
                 {"r2", table.r2}});
  } catch (const std::exception& e) {
    errors.push_back(std::string("strichartz: ") + e.what());
  }
  return {ratios, summary, fit};
}

void require(bool ok, const std::string& key, const std::string& message) {
  if (!ok) throw ConfigError(key + ": " + message, key);
}

void require_dyadic_list(const std::vector<double>& v, const std::string& key) {
  require(!v.empty(), key, "list must not be empty");
  for (double x : v) require(is_dyadic(x), key, "values must be powers of two");
}

}  // namespace

std::string to_string(ExperimentKind k) {
  for (const auto& [kind, name] : kKindNames) {
    if (kind == k) return name;
  }
  return "unknown";
}

ExperimentKind parse_experiment_kind(const std::string& name) {
  for (const auto& [kind, text] : kKindNames) {
    if (name == text) return kind;
  }
  throw std::invalid_argument("unknown experiment kind '" + name + "'");
}

ExperimentConfig parse_config(const std::string& text) {
  boost::property_tree::ptree tree;
  std::istringstream is(text);
  try {
    boost::property_tree::read_ini(is, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError("config parse error: " + e.message(), {},
                      e.line() > 0 ? std::optional<int>(static_cast<int>(e.line())) : std::nullopt);
  }
  // Empty sections leave no node in the tree; check every header by text.
  {
    std::stringstream ss(text);
    std::string line;
    int number = 0;
    while (std::getline(ss, line)) {
      ++number;
      const std::string t = trim(line);
      if (t.size() < 2 || t.front() != '[' || t.back() != ']') continue;
      const std::string section = trim(t.substr(1, t.size() - 2));
      if (!known_keys().count(section)) throw ConfigError("unknown section [" + section + "]", section, number);
    }
  }
  ExperimentConfig cfg;
  for (const auto& [section, body] : tree) {
    const auto known = known_keys().find(section);
    if (body.empty() && !body.data().empty()) {
      throw ConfigError("key '" + section + "' outside any section", section, locate(text, "", section));
    }
    if (known == known_keys().end()) {
      throw ConfigError("unknown section [" + section + "]", section, locate(text, section, ""));
    }
    for (const auto& [key, value] : body) {
      if (std::find(known->second.begin(), known->second.end(), key) == known->second.end()) {
        throw ConfigError("unknown key " + section + "." + key, section + "." + key, locate(text, section, key));
      }
      cfg.echo[section][key] = trim(value.data());
    }
  }
  if (!cfg.echo.count("experiment") || !cfg.echo["experiment"].count("kind")) {
    throw ConfigError("missing experiment.kind", "experiment.kind", locate(text, "experiment", ""));
  }

  Reader rd(text, cfg);
  rd.get("experiment", "kind", [&](const std::string& v) { cfg.kind = parse_experiment_kind(v); });
  rd.get("experiment", "seed", [&](const std::string& v) {
    std::size_t used = 0;
    if (!v.empty() && v[0] == '-') throw std::invalid_argument("seed must be nonnegative");
    cfg.seed = std::stoull(v, &used);
    if (used != v.size()) throw std::invalid_argument("not an integer: '" + v + "'");
  });
  rd.get("experiment", "out", [&](const std::string& v) { cfg.out = v; });
  rd.get("experiment", "workers", [&](const std::string& v) { cfg.workers = static_cast<int>(parse_int(v)); });
  rd.get("experiment", "format", [&](const std::string& v) {
    if (!parse_bool_like_format(v, cfg.format)) throw std::invalid_argument("format must be csv or json");
  });

  auto& vo = cfg.volumes;
  rd.get("volumes", "cases", [&](const std::string& v) {
    vo.cases = split_list(v);
    for (const auto& c : vo.cases) parse_volume_case(c);
  });
  rd.get("volumes", "samples", [&](const std::string& v) {
    const long long n = parse_int(v);
    if (n <= 1) throw std::invalid_argument("samples must exceed 1");
    vo.samples = static_cast<std::size_t>(n);
  });

  auto& co = cfg.constants;
  rd.get("constants", "nx", [&](const std::string& v) { co.nx = static_cast<int>(parse_int(v)); });
  rd.get("constants", "nt", [&](const std::string& v) { co.nt = static_cast<int>(parse_int(v)); });
  rd.get("constants", "spatial_period", [&](const std::string& v) { co.spatial_period = parse_period(v); });
  rd.get("constants", "time_period", [&](const std::string& v) { co.time_period = parse_period(v); });
  rd.get("constants", "r", [&](const std::string& v) { co.r = parse_rational(v); });
  for (auto [key, list] : std::array<std::pair<const char*, std::vector<double>*>, 5>{
           {{"N0", &co.N0}, {"N1", &co.N1}, {"N2", &co.N2}, {"L1", &co.L1}, {"L2", &co.L2}}}) {
    rd.get("constants", key, [&, list = list](const std::string& v) { *list = parse_list<double>(v, parse_double); });
  }
  rd.get("constants", "signs", [&](const std::string& v) {
    co.signs = split_list(v);
    for (const auto& s : co.signs) parse_signs(s);
  });
  rd.get("constants", "restarts", [&](const std::string& v) { co.restarts = static_cast<int>(parse_int(v)); });
  rd.get("constants", "max_iters", [&](const std::string& v) { co.max_iters = static_cast<int>(parse_int(v)); });
  rd.get("constants", "tol", [&](const std::string& v) { co.tol = parse_double(v); });

  auto& le = cfg.ledger;
  rd.get("ledger", "r_count", [&](const std::string& v) { le.r_count = static_cast<int>(parse_int(v)); });
  rd.get("ledger", "r_step", [&](const std::string& v) { le.r_step = parse_rational(v); });
  rd.get("ledger", "r_values", [&](const std::string& v) {
    le.r_values = parse_list<Rational>(v, [](const std::string& x) { return parse_rational(x); });
  });
  rd.get("ledger", "s_offsets", [&](const std::string& v) {
    le.s_offsets = parse_list<Rational>(v, [](const std::string& x) { return parse_rational(x); });
  });

  auto& so = cfg.solve;
  rd.get("solve", "nx", [&](const std::string& v) { so.nx = static_cast<int>(parse_int(v)); });
  rd.get("solve", "period", [&](const std::string& v) { so.period = parse_period(v); });
  rd.get("solve", "T", [&](const std::string& v) { so.T = parse_double(v); });
  rd.get("solve", "n_steps", [&](const std::string& v) { so.n_steps = static_cast<int>(parse_int(v)); });
  rd.get("solve", "nonlinearity", [&](const std::string& v) {
    parse_nonlinearity(v);
    so.nonlinearity = v;
  });
  rd.get("solve", "axis", [&](const std::string& v) {
    parse_axis(v);
    so.axis = v;
  });
  rd.get("solve", "data", [&](const std::string& v) {
    if (v != "random" && v != "plane_wave") throw std::invalid_argument("data must be random or plane_wave");
    so.data = v;
  });
  rd.get("solve", "s", [&](const std::string& v) { so.s = to_double(parse_rational(v)); });
  rd.get("solve", "r", [&](const std::string& v) { so.r = to_double(parse_rational(v)); });
  rd.get("solve", "band_limit", [&](const std::string& v) { so.band_limit = parse_double(v); });
  rd.get("solve", "k1", [&](const std::string& v) { so.k1 = static_cast<int>(parse_int(v)); });
  rd.get("solve", "k2", [&](const std::string& v) { so.k2 = static_cast<int>(parse_int(v)); });
  rd.get("solve", "amplitudes", [&](const std::string& v) { so.amplitudes = parse_list<double>(v, parse_double); });
  rd.get("solve", "lambdas", [&](const std::string& v) { so.lambdas = parse_list<double>(v, parse_double); });
  rd.get("solve", "bisection_steps", [&](const std::string& v) { so.bisection_steps = static_cast<int>(parse_int(v)); });
  rd.get("solve", "rk4_substeps", [&](const std::string& v) { so.rk4_substeps = static_cast<int>(parse_int(v)); });

  auto& sc = cfg.scaling;
  rd.get("scaling", "nx", [&](const std::string& v) { sc.nx = static_cast<int>(parse_int(v)); });
  rd.get("scaling", "period", [&](const std::string& v) { sc.period = parse_period(v); });
  rd.get("scaling", "pairs", [&](const std::string& v) {
    sc.pairs.clear();
    for (const auto& item : split_list(v)) {
      const auto colon = item.find(':');
      if (colon == std::string::npos) throw std::invalid_argument("pairs are written s:r, got '" + item + "'");
      sc.pairs.emplace_back(parse_rational(trim(item.substr(0, colon))), parse_rational(trim(item.substr(colon + 1))));
    }
  });
  rd.get("scaling", "lambdas", [&](const std::string& v) { sc.lambdas = parse_list<double>(v, parse_double); });
  rd.get("scaling", "band_limit", [&](const std::string& v) { sc.band_limit = parse_double(v); });
  rd.get("scaling", "ensemble", [&](const std::string& v) { sc.ensemble = static_cast<int>(parse_int(v)); });

  auto& st = cfg.strichartz;
  rd.get("strichartz", "ensemble", [&](const std::string& v) { st.ensemble = static_cast<int>(parse_int(v)); });
  rd.get("strichartz", "q_t", [&](const std::string& v) { st.q_t = parse_double(v); });
  rd.get("strichartz", "ladder", [&](const std::string& v) {
    st.ladder = parse_list<int>(v, [](const std::string& x) { return static_cast<int>(parse_int(x)); });
  });
  rd.get("strichartz", "T", [&](const std::string& v) { st.T = parse_double(v); });
  rd.get("strichartz", "n_slices", [&](const std::string& v) { st.n_slices = static_cast<int>(parse_int(v)); });

  try {
    validate_config(cfg);
  } catch (const ConfigError& e) {
    if (e.line() || e.key().empty()) throw;
    const auto dot = e.key().find('.');
    const auto line = dot == std::string::npos ? std::nullopt
                                               : locate(text, e.key().substr(0, dot), e.key().substr(dot + 1));
    throw ConfigError(e.what(), e.key(), line);
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

void validate_config(const ExperimentConfig& cfg) {
  require(cfg.workers >= 0, "experiment.workers", "must be nonnegative");
  switch (cfg.kind) {
    case ExperimentKind::kVolumes: {
      require(!cfg.volumes.cases.empty(), "volumes.cases", "list must not be empty");
      require(cfg.volumes.samples > 1, "volumes.samples", "must exceed 1");
      break;
    }
    case ExperimentKind::kConstants: {
      const auto& c = cfg.constants;
      try {
        GridSpec{c.nx, c.nt, c.spatial_period, c.time_period}.validate();
      } catch (const std::exception& e) {
        throw ConfigError(std::string("constants grid: ") + e.what(), "constants.nx");
      }
      require(c.nx <= 48 && c.nt <= 128 && c.spatial_period > 0, "constants.nx", "grid exceeds the 48^3 point budget");
      require(static_cast<long long>(c.nx) * c.nx * c.nt <= 48LL * 48 * 48, "constants.nt",
              "grid exceeds the 48^3 point budget");
      require(c.r > 1 && c.r <= 2, "constants.r", "r must lie in (1, 2]");
      require_dyadic_list(c.N0, "constants.N0");
      require_dyadic_list(c.N1, "constants.N1");
      require_dyadic_list(c.N2, "constants.N2");
      require_dyadic_list(c.L1, "constants.L1");
      require_dyadic_list(c.L2, "constants.L2");
      require(!c.signs.empty(), "constants.signs", "list must not be empty");
      require(c.restarts >= 1, "constants.restarts", "must be at least 1");
      require(c.max_iters >= 1, "constants.max_iters", "must be at least 1");
      require(c.tol > 0, "constants.tol", "must be positive");
      break;
    }
    case ExperimentKind::kLedger: {
      const auto& l = cfg.ledger;
      if (l.r_values.empty()) {
        require(l.r_count >= 1, "ledger.r_count", "must be at least 1");
        require(l.r_step > 0, "ledger.r_step", "must be positive");
        require(Rational(3, 2) + l.r_count * l.r_step <= 2, "ledger.r_count", "r values must stay in (3/2, 2]");
      }
      for (const auto& r : l.r_values) require(r > 1 && r <= 2, "ledger.r_values", "r must lie in (1, 2]");
      require(!l.s_offsets.empty(), "ledger.s_offsets", "list must not be empty");
      break;
    }
    case ExperimentKind::kSolve: {
      const auto& s = cfg.solve;
      try {
        SpatialGrid{s.nx, s.period}.validate();
      } catch (const std::exception& e) {
        throw ConfigError(std::string("solve grid: ") + e.what(), "solve.nx");
      }
      require(s.T > 0, "solve.T", "must be positive");
      require(s.n_steps >= 1, "solve.n_steps", "must be at least 1");
      require(!s.amplitudes.empty(), "solve.amplitudes", "list must not be empty");
      require(std::is_sorted(s.amplitudes.begin(), s.amplitudes.end()), "solve.amplitudes", "must be increasing");
      for (double a : s.amplitudes) require(a > 0, "solve.amplitudes", "must be positive");
      require(!s.lambdas.empty(), "solve.lambdas", "list must not be empty");
      for (double l : s.lambdas) require(l > 0, "solve.lambdas", "must be positive");
      require(s.r >= 1 && s.r <= 2, "solve.r", "r must lie in [1, 2]");
      require(s.band_limit > 0 && s.band_limit < (2 * std::numbers::pi / s.period) * (s.nx / 2), "solve.band_limit",
              "must lie below the Nyquist frequency");
      require(s.bisection_steps >= 0, "solve.bisection_steps", "must be nonnegative");
      require(s.rk4_substeps >= 1, "solve.rk4_substeps", "must be at least 1");
      break;
    }
    case ExperimentKind::kScaling: {
      const auto& s = cfg.scaling;
      try {
        SpatialGrid{s.nx, s.period}.validate();
      } catch (const std::exception& e) {
        throw ConfigError(std::string("scaling grid: ") + e.what(), "scaling.nx");
      }
      require(!s.pairs.empty(), "scaling.pairs", "list must not be empty");
      for (const auto& [sv, r] : s.pairs) require(r >= 1 && r <= 2, "scaling.pairs", "r must lie in [1, 2]");
      require(!s.lambdas.empty(), "scaling.lambdas", "list must not be empty");
      for (double l : s.lambdas) require(is_dyadic(l), "scaling.lambdas", "values must be powers of two");
      require(s.band_limit > 0 && s.band_limit < (2 * std::numbers::pi / s.period) * (s.nx / 2), "scaling.band_limit",
              "must lie below the Nyquist frequency");
      require(s.ensemble >= 1, "scaling.ensemble", "must be at least 1");
      break;
    }
    case ExperimentKind::kStrichartz: {
      const auto& s = cfg.strichartz;
      require(s.ensemble >= 1, "strichartz.ensemble", "must be at least 1");
      require(s.q_t >= 4 && std::isfinite(s.q_t), "strichartz.q_t", "must be finite and at least 4");
      require(s.ladder.size() >= 2, "strichartz.ladder", "needs at least two rungs");
      for (int n : s.ladder) require(n >= 8 && (n & (n - 1)) == 0, "strichartz.ladder", "powers of two >= 8");
      require(s.T > 0, "strichartz.T", "must be positive");
      require(s.n_slices >= 2, "strichartz.n_slices", "must be at least 2");
      break;
    }
  }
}

std::string render_config(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << "[experiment]\n";
  os << "kind = " << to_string(cfg.kind) << "\n";
  if (cfg.seed) os << "seed = " << *cfg.seed << "\n";
  os << "out = " << cfg.out.string() << "\n";
  os << "workers = " << cfg.workers << "\n";
  os << "format = " << (cfg.format == Format::kCsv ? "csv" : "json") << "\n\n";
  os << "[" << to_string(cfg.kind) << "]\n";
  switch (cfg.kind) {
    case ExperimentKind::kVolumes:
      os << "cases = " << format_list(cfg.volumes.cases) << "\n";
      os << "samples = " << cfg.volumes.samples << "\n";
      break;
    case ExperimentKind::kConstants: {
      const auto& c = cfg.constants;
      os << "nx = " << c.nx << "\nnt = " << c.nt << "\n";
      os << "spatial_period = " << format_value(c.spatial_period) << "\n";
      os << "time_period = " << format_value(c.time_period) << "\n";
      os << "r = " << to_string(c.r) << "\n";
      os << "N0 = " << format_list(c.N0) << "\nN1 = " << format_list(c.N1) << "\nN2 = " << format_list(c.N2) << "\n";
      os << "L1 = " << format_list(c.L1) << "\nL2 = " << format_list(c.L2) << "\n";
      os << "signs = " << format_list(c.signs) << "\n";
      os << "restarts = " << c.restarts << "\nmax_iters = " << c.max_iters << "\ntol = " << format_value(c.tol) << "\n";
      break;
    }
    case ExperimentKind::kLedger: {
      const auto& l = cfg.ledger;
      if (l.r_values.empty()) {
        os << "r_count = " << l.r_count << "\nr_step = " << to_string(l.r_step) << "\n";
      } else {
        os << "r_values = " << format_list(l.r_values) << "\n";
      }
      os << "s_offsets = " << format_list(l.s_offsets) << "\n";
      break;
    }
    case ExperimentKind::kSolve: {
      const auto& s = cfg.solve;
      os << "nx = " << s.nx << "\nperiod = " << format_value(s.period) << "\nT = " << format_value(s.T) << "\n";
      os << "n_steps = " << s.n_steps << "\nnonlinearity = " << s.nonlinearity << "\naxis = " << s.axis << "\n";
      os << "data = " << s.data << "\ns = " << format_value(s.s) << "\nr = " << format_value(s.r) << "\n";
      os << "band_limit = " << format_value(s.band_limit) << "\nk1 = " << s.k1 << "\nk2 = " << s.k2 << "\n";
      os << "amplitudes = " << format_list(s.amplitudes) << "\nlambdas = " << format_list(s.lambdas) << "\n";
      os << "bisection_steps = " << s.bisection_steps << "\nrk4_substeps = " << s.rk4_substeps << "\n";
      break;
    }
    case ExperimentKind::kScaling: {
      const auto& s = cfg.scaling;
      os << "nx = " << s.nx << "\nperiod = " << format_value(s.period) << "\npairs = ";
      for (std::size_t i = 0; i < s.pairs.size(); ++i) {
        os << (i ? ", " : "") << to_string(s.pairs[i].first) << ":" << to_string(s.pairs[i].second);
      }
      os << "\nlambdas = " << format_list(s.lambdas) << "\nband_limit = " << format_value(s.band_limit) << "\n";
      os << "ensemble = " << s.ensemble << "\n";
      break;
    }
    case ExperimentKind::kStrichartz: {
      const auto& s = cfg.strichartz;
      os << "ensemble = " << s.ensemble << "\nq_t = " << format_value(s.q_t) << "\nladder = " << format_list(s.ladder)
         << "\nT = " << format_value(s.T) << "\nn_slices = " << s.n_slices << "\n";
      break;
    }
  }
  return os.str();
}

std::vector<Table> compute_tables(const ExperimentConfig& config, std::vector<std::string>& errors) {
  validate_config(config);
  if (!config.seed) throw ConfigError("seed is mandatory", "experiment.seed");
  const int workers = resolve_workers(config.workers);
  switch (config.kind) {
    case ExperimentKind::kVolumes:
      return volume_tables(config, workers, errors);
    case ExperimentKind::kConstants:
      return constant_tables(config, workers, errors);
    case ExperimentKind::kLedger:
      return ledger_tables(config, workers, errors);
    case ExperimentKind::kSolve:
      return solve_tables(config, workers, errors);
    case ExperimentKind::kScaling:
      return scaling_tables(config, workers, errors);
    case ExperimentKind::kStrichartz:
      return strichartz_tables(config, workers, errors);
  }
  return {};
}

ResultManifest run_experiment(const ExperimentConfig& config) {
  ResultManifest m;
  m.version = tool_version();
  m.kind = to_string(config.kind);
  m.started = iso_now();
  m.config = config.echo;
  m.workers = resolve_workers(config.workers);
  if (config.seed) m.seed = *config.seed;

  std::vector<Table> tables;
  try {
    tables = compute_tables(config, m.errors);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    m.errors.push_back(e.what());
  }

  std::filesystem::create_directories(config.out);
  for (const auto& t : tables) {
    const auto path = emit_results(t, config.format, config.out);
    std::ifstream is(path, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    FileRecord f;
    f.name = path.filename().string();
    f.sha256 = sha256_hex(ss.str());
    f.rows = t.rows().size();
    // Record checksums hash the CSV rendering of each row, whatever the file format.
    const std::string csv = to_csv(t);
    std::size_t pos = csv.find('\n') + 1;
    while (pos < csv.size()) {
      const std::size_t end = csv.find('\n', pos);
      f.record_sha256.push_back(sha256_hex(csv.substr(pos, end - pos)));
      pos = end + 1;
    }
    m.files.push_back(std::move(f));
  }
  m.complete = m.errors.empty();
  m.finished = iso_now();
  std::ofstream os(config.out / "manifest.json", std::ios::binary);
  os << manifest_json(m);
  return m;
}

std::string manifest_json(const ResultManifest& m) {
  nlohmann::json j;
  j["tool"] = "conewave";
  j["version"] = m.version;
  j["kind"] = m.kind;
  j["seed"] = m.seed;
  j["workers"] = m.workers;
  j["started"] = m.started;
  j["finished"] = m.finished;
  j["config"] = m.config;
  j["complete"] = m.complete;
  j["errors"] = m.errors;
  j["files"] = nlohmann::json::array();
  for (const auto& f : m.files) {
    j["files"].push_back({{"name", f.name}, {"sha256", f.sha256}, {"rows", f.rows}, {"records", f.record_sha256}});
  }
  return j.dump(2) + "\n";
}

std::string write_error_record(const std::filesystem::path& dir, const std::string& kind, const std::string& message,
                               const std::string& key, std::optional<int> line) {
  nlohmann::json j;
  j["error"] = message;
  j["kind"] = kind;
  j["key"] = key.empty() ? nlohmann::json(nullptr) : nlohmann::json(key);
  j["line"] = line ? nlohmann::json(*line) : nlohmann::json(nullptr);
  const std::string text = j.dump(2) + "\n";
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (!ec) {
    std::ofstream os(dir / "error.json", std::ios::binary);
    os << text;
  }
  return text;
}

}  // namespace conewave
