#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "conewave/rational.hpp"
#include "conewave/results.hpp"

namespace conewave {

enum class ExperimentKind { kVolumes, kConstants, kLedger, kSolve, kScaling, kStrichartz };

std::string to_string(ExperimentKind k);
ExperimentKind parse_experiment_kind(const std::string& name);

/// Rejected configuration. `line` is 1-based when the offending text could be
/// located, `key` is "section.name" when a single key is at fault.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& message, std::string key = {}, std::optional<int> line = {});
  const std::string& key() const { return key_; }
  std::optional<int> line() const { return line_; }

 private:
  std::string key_;
  std::optional<int> line_;
};

struct VolumesSettings {
  std::vector<std::string> cases{"hlh_hard", "hlh_easy", "lhh_sigma1", "lhh_sigma2"};
  std::size_t samples = 1000000;
};

struct ConstantsSettings {
  int nx = 32;
  int nt = 64;
  double spatial_period = 3.141592653589793;
  double time_period = 6.283185307179586;
  Rational r{2};
  std::vector<double> N0{8};
  std::vector<double> N1{2, 4, 8};
  std::vector<double> N2{8};
  std::vector<double> L1{1};
  std::vector<double> L2{1};
  std::vector<std::string> signs{"+++", "++-"};
  int restarts = 4;
  int max_iters = 60;
  double tol = 1e-6;
};

struct LedgerSettings {
  /// r_i = 3/2 + i * r_step for i = 1..r_count unless r_values is given.
  int r_count = 50;
  Rational r_step{1, 100};
  std::vector<Rational> r_values;
  /// s = 3/(2r) + 1 + offset.
  std::vector<Rational> s_offsets{Rational(-1, 100), Rational(0), Rational(1, 100)};
};

struct SolveSettings {
  int nx = 32;
  double period = 6.283185307179586;
  double T = 0.1;
  int n_steps = 64;
  std::string nonlinearity = "full_grad_square";
  std::string axis = "x1";
  std::string data = "random";  ///< random | plane_wave
  double s = 1.75;
  double r = 2.0;
  double band_limit = 8.0;
  int k1 = 1;
  int k2 = 0;
  std::vector<double> amplitudes{1, 4, 16, 64, 256, 1024};
  std::vector<double> lambdas{1, 2};
  int bisection_steps = 8;
  int rk4_substeps = 4;
};

struct ScalingSettings {
  int nx = 32;
  double period = 6.283185307179586;
  std::vector<std::pair<Rational, Rational>> pairs{{Rational(7, 4), Rational(2)}, {Rational(2), Rational(3, 2)}};
  std::vector<double> lambdas{2, 4};
  double band_limit = 10.0;
  int ensemble = 4;
};

struct StrichartzSettings {
  int ensemble = 16;
  double q_t = 4.0;
  std::vector<int> ladder{32, 64, 128, 256};
  double T = 1.0;
  int n_slices = 64;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kLedger;
  std::optional<std::uint64_t> seed;
  std::filesystem::path out = "results";
  int workers = 0;  ///< 0: machine parallelism
  Format format = Format::kCsv;

  VolumesSettings volumes;
  ConstantsSettings constants;
  LedgerSettings ledger;
  SolveSettings solve;
  ScalingSettings scaling;
  StrichartzSettings strichartz;

  /// Raw key/value text as read, echoed into the manifest.
  std::map<std::string, std::map<std::string, std::string>> echo;
};

/// INI text: an [experiment] section (kind, seed, out, workers, format) and
/// one section named after each kind holding its parameters. Unknown
/// sections or keys are errors. Lists are comma separated; rationals may be
/// written "a/b"; periods accept a "pi" suffix ("2pi", "0.5pi").
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Checks every referenced parameter against the owning module's
/// preconditions; throws ConfigError naming the key.
void validate_config(const ExperimentConfig& config);

/// The INI text that parse_config would read back into `config`.
std::string render_config(const ExperimentConfig& config);

struct FileRecord {
  std::string name;
  std::string sha256;
  std::size_t rows = 0;
  std::vector<std::string> record_sha256;  ///< one per data line, in order
};

struct ResultManifest {
  std::string version;
  std::string kind;
  std::uint64_t seed = 0;
  int workers = 1;
  std::string started;
  std::string finished;
  std::map<std::string, std::map<std::string, std::string>> config;
  std::vector<FileRecord> files;
  std::vector<std::string> errors;  ///< failed tasks; results of the rest kept
  bool complete = true;
};

/// Tables of one experiment. Task failures are appended to `errors` and the
/// failed tasks' rows left out.
std::vector<Table> compute_tables(const ExperimentConfig& config, std::vector<std::string>& errors);

/// Validates, computes, writes one file per table and manifest.json into
/// config.out, and returns the manifest.
ResultManifest run_experiment(const ExperimentConfig& config);

std::string manifest_json(const ResultManifest& manifest);

/// Writes error.json ({"error", "kind", "key", "line"}) into `dir`, creating
/// it; returns the JSON text.
std::string write_error_record(const std::filesystem::path& dir, const std::string& kind, const std::string& message,
                               const std::string& key = {}, std::optional<int> line = {});

/// Current tool version string.
std::string tool_version();

}  // namespace conewave
