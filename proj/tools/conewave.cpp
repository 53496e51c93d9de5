// conewave: run one experiment sweep and write its tables plus manifest.json.
//
//   conewave ledger --seed 1 --out results/ledger
//   conewave constants --config constants.ini --workers 4

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "conewave/experiments.hpp"

namespace cw = conewave;

namespace {

std::optional<int> env_workers() {
  const char* v = std::getenv("CONEWAVE_WORKERS");
  if (v == nullptr || *v == '\0') return std::nullopt;
  try {
    return std::stoi(v);
  } catch (const std::exception&) {
    throw cw::ConfigError(std::string("CONEWAVE_WORKERS is not an integer: ") + v, "CONEWAVE_WORKERS");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dyadic restriction and wave-equation experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", cw::tool_version());

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::string out;
  std::string format;

  for (const char* name : {"volumes", "constants", "ledger", "solve", "scaling", "strichartz"}) {
    auto* sub = app.add_subcommand(name, std::string("run the ") + name + " experiment");
    sub->add_option("--config", config_path, "INI config file")->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "base seed (u64), overrides the config");
    sub->add_option("--workers", workers, "worker threads, overrides CONEWAVE_WORKERS and the config");
    sub->add_option("--out", out, "output directory");
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  }
  CLI11_PARSE(app, argc, argv);

  const std::string kind_name = app.get_subcommands().front()->get_name();
  std::filesystem::path out_dir = out.empty() ? std::filesystem::path("results") / kind_name : std::filesystem::path(out);

  cw::ExperimentConfig cfg;
  try {
    if (!config_path.empty()) {
      cfg = cw::load_config(config_path);
      if (cw::to_string(cfg.kind) != kind_name) {
        throw cw::ConfigError("config describes a '" + cw::to_string(cfg.kind) + "' experiment, not '" + kind_name + "'",
                              "experiment.kind");
      }
      if (out.empty()) out_dir = cfg.out;
    } else {
      cfg.kind = cw::parse_experiment_kind(kind_name);
    }
    if (seed) cfg.seed = seed;
    if (auto w = env_workers()) cfg.workers = *w;
    if (workers) cfg.workers = *workers;
    cfg.out = out_dir;
    if (format == "json") cfg.format = cw::Format::kJson;
    if (format == "csv") cfg.format = cw::Format::kCsv;
    if (!cfg.seed) throw cw::ConfigError("seed is mandatory (config experiment.seed or --seed)", "experiment.seed");
    // Echo the effective configuration, defaults included.
    auto echo = cw::parse_config(cw::render_config(cfg)).echo;
    cfg.echo = std::move(echo);
    cw::validate_config(cfg);
  } catch (const cw::ConfigError& e) {
    std::cerr << cw::write_error_record(out_dir, "config", e.what(), e.key(), e.line());
    return 2;
  }

  try {
    const cw::ResultManifest m = cw::run_experiment(cfg);
    for (const auto& f : m.files) std::cout << (cfg.out / f.name).string() << "  " << f.rows << " rows\n";
    std::cout << (cfg.out / "manifest.json").string() << "\n";
    if (!m.complete) {
      for (const auto& e : m.errors) std::cerr << "task failed: " << e << "\n";
      return 3;
    }
  } catch (const std::exception& e) {
    std::cerr << cw::write_error_record(out_dir, "runtime", e.what());
    return 1;
  }
  return 0;
}
