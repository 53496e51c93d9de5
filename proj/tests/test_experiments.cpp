#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "conewave/experiments.hpp"
#include "conewave/results.hpp"

namespace cw = conewave;
namespace fs = std::filesystem;
using cw::Rational;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("conewave_test_" + name);
  fs::remove_all(dir);
  return dir;
}

cw::ConfigError config_error(const std::string& text) {
  try {
    cw::parse_config(text);
  } catch (const cw::ConfigError& e) {
    return e;
  }
  ADD_FAILURE() << "no ConfigError for:\n" << text;
  return cw::ConfigError("none");
}

std::string tables_text(const std::vector<cw::Table>& tables) {
  std::string out;
  for (const auto& t : tables) out += t.name() + "\n" + cw::to_csv(t);
  return out;
}

}  // namespace

TEST(Results, CsvRoundTripKeepsDoubles) {
  cw::Table t("t", {"x", "label", "q", "flag", "n"});
  const std::vector<double> xs{0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-310, 7.0};
  for (double x : xs) {
    t.add_row({{"x", x}, {"label", std::string("a,\"b\"")}, {"q", Rational(-3, 7)}, {"flag", x > 1}, {"n", std::int64_t{-4}}});
  }
  std::istringstream in(cw::to_csv(t));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "x,label,q,flag,n");
  for (double x : xs) {
    ASSERT_TRUE(std::getline(in, line));
    const auto cells = cw::parse_csv_line(line);
    ASSERT_EQ(cells.size(), 5u);
    EXPECT_EQ(std::strtod(cells[0].c_str(), nullptr), x);
    EXPECT_EQ(cells[1], "a,\"b\"");
    EXPECT_EQ(cw::parse_rational(cells[2]), Rational(-3, 7));
    EXPECT_EQ(cells[3], x > 1 ? "true" : "false");
    EXPECT_EQ(cells[4], "-4");
  }
}

TEST(Results, EmptyTableIsHeaderOnly) {
  const cw::Table t("t", {"a", "b"});
  EXPECT_EQ(cw::to_csv(t), "a,b\n");
  EXPECT_EQ(nlohmann::json::parse(cw::to_json(t)), nlohmann::json::array());
  EXPECT_THROW(cw::Table("t", {}), std::invalid_argument);
}

TEST(Results, JsonSortedKeysAndRationalStrings) {
  cw::Table t("t", {"zeta", "alpha", "r", "bad"});
  t.add_row({{"zeta", 1.5}, {"alpha", std::int64_t{2}}, {"r", Rational(7, 4)}, {"bad", std::nan("")}});
  const std::string text = cw::to_json(t);
  EXPECT_LT(text.find("\"alpha\""), text.find("\"zeta\""));
  const auto j = nlohmann::json::parse(text);
  EXPECT_EQ(j[0]["r"], "7/4");
  EXPECT_EQ(j[0]["bad"], "nan");
  EXPECT_EQ(j[0]["zeta"], 1.5);
}

TEST(Results, MixedSchemaRejected) {
  cw::Table t("t", {"a", "b"});
  EXPECT_THROW(t.add_row({{"a", 1.0}}), std::invalid_argument);
  EXPECT_THROW(t.add_row({{"b", 1.0}, {"a", 2.0}}), std::invalid_argument);
  EXPECT_NO_THROW(t.add_row({{"a", 1.0}, {"b", 2.0}}));
}

TEST(Results, Sha256KnownVector) {
  EXPECT_EQ(cw::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Config, ParsesAndRendersBack) {
  const std::string text =
      "[experiment]\nkind = constants\nseed = 9\nworkers = 2\nformat = json\n"
      "[constants]\nN1 = 2, 4\nr = 7/4\nspatial_period = 0.5pi\n";
  const auto cfg = cw::parse_config(text);
  EXPECT_EQ(cfg.kind, cw::ExperimentKind::kConstants);
  EXPECT_EQ(cfg.seed, 9u);
  EXPECT_EQ(cfg.workers, 2);
  EXPECT_EQ(cfg.format, cw::Format::kJson);
  EXPECT_EQ(cfg.constants.N1, (std::vector<double>{2, 4}));
  EXPECT_EQ(cfg.constants.r, Rational(7, 4));
  EXPECT_DOUBLE_EQ(cfg.constants.spatial_period, 0.5 * 3.141592653589793);
  const auto again = cw::parse_config(cw::render_config(cfg));
  EXPECT_EQ(again.constants.N1, cfg.constants.N1);
  EXPECT_EQ(again.constants.r, cfg.constants.r);
  EXPECT_EQ(again.constants.spatial_period, cfg.constants.spatial_period);
  EXPECT_EQ(again.seed, cfg.seed);
}

TEST(Config, EmptyDyadicListNamesKeyAndLine) {
  const auto e = config_error("[experiment]\nkind = constants\nseed = 1\n[constants]\nnx = 16\nN1 =\n");
  EXPECT_EQ(e.key(), "constants.N1");
  EXPECT_EQ(e.line(), 6);
}

TEST(Config, NonDyadicRejected) {
  const auto e = config_error("[experiment]\nkind = constants\n[constants]\nL2 = 3\n");
  EXPECT_EQ(e.key(), "constants.L2");
  EXPECT_EQ(e.line(), 4);
}

TEST(Config, UnknownKeyAndSection) {
  auto e = config_error("[experiment]\nkind = ledger\n[ledger]\nr_cont = 4\n");
  EXPECT_EQ(e.key(), "ledger.r_cont");
  EXPECT_EQ(e.line(), 4);
  e = config_error("[experiment]\nkind = ledger\n[ledgr]\n");
  EXPECT_EQ(e.line(), 3);
}

TEST(Config, BadValueNamesKey) {
  const auto e = config_error("[experiment]\nkind = solve\n\n[solve]\nT = fast\n");
  EXPECT_EQ(e.key(), "solve.T");
  EXPECT_EQ(e.line(), 5);
}

TEST(Config, MissingKindAndSyntaxErrors) {
  EXPECT_EQ(config_error("[experiment]\nseed = 1\n").key(), "experiment.kind");
  EXPECT_TRUE(config_error("[experiment\nkind = ledger\n").line().has_value());
  EXPECT_EQ(config_error("[experiment]\nkind = bogus\n").key(), "experiment.kind");
}

TEST(Config, LedgerRangeChecked) {
  const auto e = config_error("[experiment]\nkind = ledger\n[ledger]\nr_count = 60\n");
  EXPECT_EQ(e.key(), "ledger.r_count");
}

TEST(Experiments, SeedIsMandatory) {
  cw::ExperimentConfig cfg;
  cfg.kind = cw::ExperimentKind::kLedger;
  std::vector<std::string> errors;
  EXPECT_THROW(cw::compute_tables(cfg, errors), cw::ConfigError);
}

TEST(Experiments, LedgerTableBoundary) {
  cw::ExperimentConfig cfg;
  cfg.kind = cw::ExperimentKind::kLedger;
  cfg.seed = 1;
  cfg.ledger.r_values = {Rational(2), Rational(8, 5)};
  std::vector<std::string> errors;
  const auto tables = cw::compute_tables(cfg, errors);
  ASSERT_TRUE(errors.empty());
  ASSERT_EQ(tables.size(), 1u);
  const auto& rows = tables[0].rows();
  ASSERT_EQ(rows.size(), 6u);
  // Offsets -1/100, 0, +1/100 around s = 3/(2r) + 1: only the last is feasible.
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(std::get<bool>(rows[i][2]), i % 3 == 2) << i;
  }
  EXPECT_EQ(std::get<Rational>(rows[2][1]), Rational(7, 4) + Rational(1, 100));
  EXPECT_EQ(std::get<std::string>(rows[0][3]), "");
}

TEST(Experiments, WorkerCountDoesNotChangeResults) {
  std::vector<cw::ExperimentConfig> configs;
  {
    cw::ExperimentConfig c;
    c.kind = cw::ExperimentKind::kVolumes;
    c.volumes.cases = {"hlh_hard"};
    c.volumes.samples = 2000;
    configs.push_back(c);
  }
  {
    cw::ExperimentConfig c;
    c.kind = cw::ExperimentKind::kConstants;
    c.constants.nx = 16;
    c.constants.nt = 16;
    c.constants.N0 = {4};
    c.constants.N1 = {2, 4};
    c.constants.N2 = {4};
    c.constants.restarts = 2;
    c.constants.max_iters = 5;
    configs.push_back(c);
  }
  {
    cw::ExperimentConfig c;
    c.kind = cw::ExperimentKind::kSolve;
    c.solve.nx = 16;
    c.solve.n_steps = 16;
    c.solve.band_limit = 4;
    c.solve.amplitudes = {1, 1000};
    c.solve.bisection_steps = 2;
    configs.push_back(c);
  }
  {
    cw::ExperimentConfig c;
    c.kind = cw::ExperimentKind::kScaling;
    c.scaling.nx = 16;
    c.scaling.band_limit = 2;
    c.scaling.ensemble = 2;
    configs.push_back(c);
  }
  {
    cw::ExperimentConfig c;
    c.kind = cw::ExperimentKind::kStrichartz;
    c.strichartz.ensemble = 3;
    c.strichartz.ladder = {16, 32};
    c.strichartz.n_slices = 16;
    configs.push_back(c);
  }
  for (auto& c : configs) {
    c.seed = 17;
    std::vector<std::string> e1, e3;
    c.workers = 1;
    const auto a = tables_text(cw::compute_tables(c, e1));
    c.workers = 3;
    const auto b = tables_text(cw::compute_tables(c, e3));
    EXPECT_EQ(a, b) << cw::to_string(c.kind);
    EXPECT_TRUE(e1.empty() && e3.empty()) << cw::to_string(c.kind);
  }
}

TEST(Experiments, ManifestListsFilesWithChecksums) {
  cw::ExperimentConfig cfg;
  cfg.kind = cw::ExperimentKind::kLedger;
  cfg.seed = 3;
  cfg.ledger.r_count = 5;
  cfg.ledger.r_step = Rational(1, 10);
  cfg.out = scratch("manifest");
  cfg.echo = cw::parse_config(cw::render_config(cfg)).echo;
  const auto m = cw::run_experiment(cfg);
  EXPECT_TRUE(m.complete);
  ASSERT_EQ(m.files.size(), 1u);
  EXPECT_EQ(m.files[0].name, "ledger.csv");
  EXPECT_EQ(m.files[0].rows, 15u);
  const std::string csv = slurp(cfg.out / "ledger.csv");
  EXPECT_EQ(m.files[0].sha256, cw::sha256_hex(csv));
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  for (const auto& h : m.files[0].record_sha256) {
    ASSERT_TRUE(std::getline(in, line));
    EXPECT_EQ(h, cw::sha256_hex(line));
  }
  const auto j = nlohmann::json::parse(slurp(cfg.out / "manifest.json"));
  EXPECT_EQ(j["seed"], 3);
  EXPECT_EQ(j["kind"], "ledger");
  EXPECT_EQ(j["complete"], true);
  EXPECT_EQ(j["version"], cw::tool_version());
  EXPECT_EQ(j["config"]["ledger"]["r_count"], "5");
  fs::remove_all(cfg.out);
}

TEST(Experiments, FailedTaskMarksManifestIncomplete) {
  // The second scale pushes the rescaled period to infinity, which the
  // solver rejects; the first scale's rows survive.
  cw::ExperimentConfig cfg;
  cfg.kind = cw::ExperimentKind::kSolve;
  cfg.seed = 5;
  cfg.solve.nx = 16;
  cfg.solve.n_steps = 8;
  cfg.solve.band_limit = 4;
  cfg.solve.amplitudes = {1};
  cfg.solve.lambdas = {1, 1e-320};
  cfg.solve.bisection_steps = 0;
  cfg.out = scratch("partial");
  const auto m = cw::run_experiment(cfg);
  EXPECT_FALSE(m.complete);
  ASSERT_EQ(m.errors.size(), 1u);
  EXPECT_NE(m.errors[0].find("existence task 1"), std::string::npos);
  const auto j = nlohmann::json::parse(slurp(cfg.out / "manifest.json"));
  EXPECT_EQ(j["complete"], false);
  const std::string existence = slurp(cfg.out / "existence.csv");
  EXPECT_EQ(std::count(existence.begin(), existence.end(), '\n'), 2);
  fs::remove_all(cfg.out);
}

TEST(Experiments, ErrorRecord) {
  const auto dir = scratch("error");
  const auto text = cw::write_error_record(dir, "config", "bad", "constants.N1", 6);
  const auto j = nlohmann::json::parse(slurp(dir / "error.json"));
  EXPECT_EQ(j["key"], "constants.N1");
  EXPECT_EQ(j["line"], 6);
  EXPECT_EQ(nlohmann::json::parse(text), j);
  fs::remove_all(dir);
}

TEST(Experiments, KindNames) {
  for (auto k : {cw::ExperimentKind::kVolumes, cw::ExperimentKind::kConstants, cw::ExperimentKind::kLedger,
                 cw::ExperimentKind::kSolve, cw::ExperimentKind::kScaling, cw::ExperimentKind::kStrichartz}) {
    EXPECT_EQ(cw::parse_experiment_kind(cw::to_string(k)), k);
  }
  EXPECT_THROW(cw::parse_experiment_kind("nope"), std::invalid_argument);
}
