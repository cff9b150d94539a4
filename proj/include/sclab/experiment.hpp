#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace sclab {

inline constexpr const char* kVersion = "sclab 0.1.0";

/// One flat bag of parameters for every subcommand; list-like parameters
/// keep their textual form so that config files, flags and manifests share
/// one representation. Unset trials/u_grid pick per-command defaults.
struct ExperimentConfig {
  std::string command;
  double rate = 1.0;
  double horizon = 100.0;
  std::string psi = "exp";
  std::string eps = "0.01,0.02,0.03,0.04,0.05,0.1";
  std::string u_grid;  // "lo:hi:step" or comma list; empty = command default
  std::uint64_t trials = 0;
  int steps = 10000;
  std::uint64_t seed = 20240814;
  int workers = 0;
  std::string out = "out";
  bool quick = false;
  std::string tests = "score";
  std::string thresholds;  // path to a calibrate output
  bool inline_thresholds = false;
  bool svg = false;
  std::string dump_stats;  // per-path statistic dump file (power-finite)
  std::uint64_t dump_limit = 1000;
  std::string power;  // power-limit CSV consumed by compare
};

/// Parse "lo:hi:step" or a comma-separated list into numbers.
std::vector<double> parse_number_list(const std::string& text);
std::vector<std::string> parse_name_list(const std::string& text);

/// Apply key=value pairs (config file or manifest) onto a config; unknown
/// keys and meta./output. entries are ignored.
void apply_key_values(ExperimentConfig& config, const std::map<std::string, std::string>& kv);

/// Calibrate a/b/c/e threshold tables and write thresholds.csv + manifest.
int cmd_calibrate(const ExperimentConfig& config);

/// Finite-horizon power curves by direct simulation of the self-correcting
/// alternative; writes power_finite.csv + manifest (+ optional dump/SVG).
int cmd_power_finite(const ExperimentConfig& config);

/// Limit power curves (closed-form score, reweighted lr/wald, envelope) on
/// a common path ensemble; writes power_limit.csv, thresholds_d.csv,
/// manifest (+ optional SVG).
int cmd_power_limit(const ExperimentConfig& config);

/// Tabulate per-u gaps between the limit power curves with their combined
/// standard errors and flag 3-sigma ordering violations.
int cmd_compare(const ExperimentConfig& config);

/// Pretty-print a calibrated threshold table.
int cmd_tables(const ExperimentConfig& config);

}  // namespace sclab
