#include <CLI11.hpp>
#include <iostream>

#include "sclab/csv.hpp"
#include "sclab/experiment.hpp"

namespace {

// Flags land in `flags`; file values are applied first, then any flag the
// user actually passed overrides them.
struct FlagSet {
  sclab::ExperimentConfig values;
  std::string config_file;
};

void add_common_flags(CLI::App* cmd, FlagSet& fs) {
  cmd->add_option("--config", fs.config_file,
                  "flat key=value config file (a run manifest also works); flags override it");
  cmd->add_option("--rate", fs.values.rate, "null intensity S* (events per unit time)");
  cmd->add_option("--horizon", fs.values.horizon, "observation horizon T");
  cmd->add_option("--psi", fs.values.psi, "shape function: 'exp' or a psi spec file");
  cmd->add_option("--eps", fs.values.eps, "comma list of test sizes");
  cmd->add_option("--u-grid", fs.values.u_grid, "drift grid, 'lo:hi:step' or comma list");
  cmd->add_option("--trials", fs.values.trials, "Monte Carlo trajectories");
  cmd->add_option("--steps", fs.values.steps, "grid steps per unit-interval path");
  cmd->add_option("--seed", fs.values.seed, "master seed");
  cmd->add_option("--workers", fs.values.workers, "worker threads (0 = hardware)");
  cmd->add_option("--out", fs.values.out, "output directory");
  cmd->add_flag("--quick", fs.values.quick, "CI scale: 1e4 trials, <=1e3 steps");
  cmd->add_option("--tests", fs.values.tests, "subset of score,lr,wald (power-finite)");
  cmd->add_option("--thresholds", fs.values.thresholds, "thresholds.csv from calibrate");
  cmd->add_flag("--inline-thresholds", fs.values.inline_thresholds,
                "power-limit: calibrate thresholds from the same ensemble");
  cmd->add_flag("--svg", fs.values.svg, "also write SVG charts");
  cmd->add_option("--dump-stats", fs.values.dump_stats,
                  "per-path statistic dump CSV (first u of the grid)");
  cmd->add_option("--dump-limit", fs.values.dump_limit, "max rows in the statistic dump");
  cmd->add_option("--power", fs.values.power, "power_limit.csv consumed by compare");
}

sclab::ExperimentConfig merge(const CLI::App* cmd, const FlagSet& fs) {
  sclab::ExperimentConfig cfg;  // defaults
  if (!fs.config_file.empty())
    sclab::apply_key_values(cfg, sclab::read_key_values(fs.config_file));
  // Re-apply explicitly passed flags on top of the file.
  auto passed = [&](const std::string& name) { return cmd->count(name) > 0; };
  const auto& v = fs.values;
  if (passed("--rate")) cfg.rate = v.rate;
  if (passed("--horizon")) cfg.horizon = v.horizon;
  if (passed("--psi")) cfg.psi = v.psi;
  if (passed("--eps")) cfg.eps = v.eps;
  if (passed("--u-grid")) cfg.u_grid = v.u_grid;
  if (passed("--trials")) cfg.trials = v.trials;
  if (passed("--steps")) cfg.steps = v.steps;
  if (passed("--seed")) cfg.seed = v.seed;
  if (passed("--workers")) cfg.workers = v.workers;
  if (passed("--out")) cfg.out = v.out;
  if (passed("--quick")) cfg.quick = v.quick;
  if (passed("--tests")) cfg.tests = v.tests;
  if (passed("--thresholds")) cfg.thresholds = v.thresholds;
  if (passed("--inline-thresholds")) cfg.inline_thresholds = v.inline_thresholds;
  if (passed("--svg")) cfg.svg = v.svg;
  if (passed("--dump-stats")) cfg.dump_stats = v.dump_stats;
  if (passed("--dump-limit")) cfg.dump_limit = v.dump_limit;
  if (passed("--power")) cfg.power = v.power;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo lab for testing a stationary Poisson stream against a "
               "self-correcting alternative: threshold calibration, finite-horizon and "
               "limit power curves, test comparison"};
  app.require_subcommand(1);

  FlagSet fs_calibrate, fs_finite, fs_limit, fs_compare, fs_tables;
  CLI::App* calibrate =
      app.add_subcommand("calibrate", "calibrate a/b/c/e threshold tables");
  add_common_flags(calibrate, fs_calibrate);
  CLI::App* finite =
      app.add_subcommand("power-finite", "finite-horizon power curves by simulation");
  add_common_flags(finite, fs_finite);
  CLI::App* limit = app.add_subcommand("power-limit", "limit power curves and NP envelope");
  add_common_flags(limit, fs_limit);
  CLI::App* compare = app.add_subcommand("compare", "gap/ordering report for limit powers");
  add_common_flags(compare, fs_compare);
  CLI::App* tables = app.add_subcommand("tables", "pretty-print a threshold table");
  add_common_flags(tables, fs_tables);

  CLI11_PARSE(app, argc, argv);

  try {
    if (calibrate->parsed()) return sclab::cmd_calibrate(merge(calibrate, fs_calibrate));
    if (finite->parsed()) return sclab::cmd_power_finite(merge(finite, fs_finite));
    if (limit->parsed()) return sclab::cmd_power_limit(merge(limit, fs_limit));
    if (compare->parsed()) return sclab::cmd_compare(merge(compare, fs_compare));
    if (tables->parsed()) return sclab::cmd_tables(merge(tables, fs_tables));
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}
