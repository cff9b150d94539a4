#include "sclab/experiment.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "sclab/csv.hpp"
#include "sclab/limit.hpp"
#include "sclab/math_util.hpp"
#include "sclab/parallel.hpp"
#include "sclab/statistics.hpp"
#include "sclab/svg.hpp"

namespace sclab {

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> values;
  if (text.empty()) return values;
  if (text.find(':') != std::string::npos) {
    double lo = 0, hi = 0, step = 0;
    char c1 = 0, c2 = 0;
    std::istringstream in(text);
    if (!(in >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' || step <= 0.0)
      throw std::invalid_argument("bad grid '" + text + "', expected lo:hi:step");
    for (double v = lo; v <= hi + 1e-9 * std::max(1.0, std::fabs(hi)); v += step)
      values.push_back(std::min(v, hi));
    return values;
  }
  std::istringstream in(text);
  std::string token;
  while (std::getline(in, token, ',')) {
    if (token.find_first_not_of(" \t") == std::string::npos) continue;
    values.push_back(std::stod(token));
  }
  return values;
}

std::vector<std::string> parse_name_list(const std::string& text) {
  std::vector<std::string> names;
  std::istringstream in(text);
  std::string token;
  while (std::getline(in, token, ',')) {
    const auto b = token.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    const auto e = token.find_last_not_of(" \t");
    names.push_back(token.substr(b, e - b + 1));
  }
  return names;
}

namespace {

bool parse_bool(const std::string& text) {
  return text == "1" || text == "true" || text == "yes" || text == "on";
}

}  // namespace

void apply_key_values(ExperimentConfig& config, const std::map<std::string, std::string>& kv) {
  for (const auto& [key, value] : kv) {
    if (key == "rate") config.rate = std::stod(value);
    else if (key == "horizon") config.horizon = std::stod(value);
    else if (key == "psi") config.psi = value;
    else if (key == "eps") config.eps = value;
    else if (key == "u-grid") config.u_grid = value;
    else if (key == "trials") config.trials = std::stoull(value);
    else if (key == "steps") config.steps = std::stoi(value);
    else if (key == "seed") config.seed = std::stoull(value);
    else if (key == "workers") config.workers = std::stoi(value);
    else if (key == "out") config.out = value;
    else if (key == "quick") config.quick = parse_bool(value);
    else if (key == "tests") config.tests = value;
    else if (key == "thresholds") config.thresholds = value;
    else if (key == "inline-thresholds") config.inline_thresholds = parse_bool(value);
    else if (key == "svg") config.svg = parse_bool(value);
    else if (key == "dump-stats") config.dump_stats = value;
    else if (key == "dump-limit") config.dump_limit = std::stoull(value);
    else if (key == "power") config.power = value;
    // meta.*, output.*, command and unknown keys are ignored so a manifest
    // can be fed back through --config.
  }
}

namespace {

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

/// Fill per-command defaults and honor --quick; returns the resolved copy
/// that is echoed into the manifest (so a manifest re-run is explicit).
ExperimentConfig resolve(const ExperimentConfig& raw, std::uint64_t default_trials,
                         const char* default_u_grid) {
  ExperimentConfig cfg = raw;
  if (cfg.quick) {
    if (cfg.trials == 0) cfg.trials = 10000;
    cfg.steps = std::min(cfg.steps, 1000);
  }
  if (cfg.trials == 0) cfg.trials = default_trials;
  if (cfg.u_grid.empty()) cfg.u_grid = default_u_grid;
  return cfg;
}

void echo_config(RunManifest& manifest, const ExperimentConfig& cfg) {
  manifest.set("command", cfg.command);
  manifest.set("rate", cfg.rate);
  manifest.set("horizon", cfg.horizon);
  manifest.set("psi", cfg.psi);
  manifest.set("eps", cfg.eps);
  manifest.set("u-grid", cfg.u_grid);
  manifest.set("trials", cfg.trials);
  manifest.set("steps", std::to_string(cfg.steps));
  manifest.set("seed", cfg.seed);
  manifest.set("workers", std::to_string(cfg.workers));
  manifest.set("out", cfg.out);
  manifest.set("quick", cfg.quick ? "1" : "0");
  manifest.set("tests", cfg.tests);
  manifest.set("thresholds", cfg.thresholds);
  manifest.set("inline-thresholds", cfg.inline_thresholds ? "1" : "0");
  manifest.set("svg", cfg.svg ? "1" : "0");
  manifest.set("dump-stats", cfg.dump_stats);
  manifest.set("dump-limit", cfg.dump_limit);
  manifest.set("power", cfg.power);
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir + ": " + ec.message());
}

std::vector<double> parse_eps_list(const std::string& text) {
  auto eps = parse_number_list(text);
  if (eps.empty()) throw std::invalid_argument("empty epsilon list");
  for (double e : eps)
    if (!(e > 0.0 && e < 1.0)) throw std::invalid_argument("epsilon must be in (0,1)");
  return eps;
}

const char* kThresholdHeader[] = {"kind", "epsilon", "u",       "threshold", "ci_lo",
                                  "ci_hi", "trials", "n_steps", "seed"};

CsvTable make_threshold_table() {
  CsvTable t;
  t.header.assign(std::begin(kThresholdHeader), std::end(kThresholdHeader));
  return t;
}

/// b and c thresholds per epsilon loaded from a calibrate CSV.
std::map<double, Thresholds> load_thresholds(const std::string& path) {
  const CsvTable table = read_csv(path);
  const int kind = table.require_column("kind", path);
  const int eps_col = table.require_column("epsilon", path);
  const int thr_col = table.require_column("threshold", path);
  std::map<double, Thresholds> by_eps;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const std::string& k = table.rows[r][static_cast<std::size_t>(kind)];
    if (k != "a" && k != "b" && k != "c") continue;
    const double eps = table.number_at(r, eps_col, path);
    const double value = table.number_at(r, thr_col, path);
    auto& thr = by_eps[eps];
    if (k == "a") thr.a = value;
    else if (k == "b") thr.b = value;
    else thr.c = value;
  }
  for (auto& [eps, thr] : by_eps) thr.a = a_epsilon(eps);  // closed form wins
  return by_eps;
}

Thresholds thresholds_for(const std::map<double, Thresholds>& by_eps, double eps,
                          const std::string& origin) {
  for (const auto& [e, thr] : by_eps)
    if (std::fabs(e - eps) < 1e-9) return thr;
  throw std::runtime_error("no calibrated thresholds for epsilon=" + format_double(eps) +
                           " in " + origin + "; run `sclab calibrate` first");
}

}  // namespace

int cmd_calibrate(const ExperimentConfig& raw) {
  Timer timer;
  ExperimentConfig cfg = resolve(raw, 10000000, "");
  cfg.command = "calibrate";
  const auto eps_list = parse_eps_list(cfg.eps);
  ensure_out_dir(cfg.out);

  const LimitEnsemble ensemble =
      simulate_limit_ensemble(cfg.trials, cfg.steps, cfg.seed, cfg.workers);

  CsvTable table = make_threshold_table();
  auto add_row = [&](const std::string& kind, double eps, double value, double lo, double hi,
                     bool mc) {
    table.rows.push_back({kind, format_double(eps), "", format_double(value),
                          format_double(lo), format_double(hi),
                          mc ? std::to_string(cfg.trials) : "",
                          mc ? std::to_string(cfg.steps) : "",
                          mc ? std::to_string(cfg.seed) : ""});
  };
  for (double eps : eps_list) {
    const double a = a_epsilon(eps);
    add_row("a", eps, a, a, a, false);
  }
  for (auto [kind, name] : {std::pair{ThresholdKind::Lambda, "b"},
                            std::pair{ThresholdKind::Gamma, "c"},
                            std::pair{ThresholdKind::SmallJ, "e"}}) {
    for (double eps : eps_list) {
      const double value = calibrate_threshold(kind, eps, ensemble);
      const ThresholdCi ci = threshold_ci(kind, eps, ensemble);
      add_row(name, eps, value, ci.lo, ci.hi, true);
    }
  }
  const std::string csv_path = join_path(cfg.out, "thresholds.csv");
  write_csv(csv_path, table);

  RunManifest manifest;
  echo_config(manifest, cfg);
  manifest.set("meta.version", std::string(kVersion));
  manifest.set("meta.degenerate_resampled", ensemble.resampled);
  manifest.set("meta.wallclock_sec", timer.seconds());
  manifest.add_output(csv_path);
  manifest.write(join_path(cfg.out, "calibrate_manifest.txt"));

  std::cout << "calibrate: wrote " << csv_path << " (trials=" << cfg.trials
            << ", n_steps=" << cfg.steps << ", " << format_double(timer.seconds()) << "s)\n";
  return 0;
}

int cmd_power_limit(const ExperimentConfig& raw) {
  Timer timer;
  ExperimentConfig cfg = resolve(raw, 10000000, "0:15:0.5");
  cfg.command = "power-limit";
  const auto eps_list = parse_eps_list(cfg.eps);
  const auto u_grid = parse_number_list(cfg.u_grid);
  if (u_grid.empty()) throw std::invalid_argument("power-limit: empty u grid");
  ensure_out_dir(cfg.out);

  std::map<double, Thresholds> by_eps;
  if (!cfg.thresholds.empty()) {
    by_eps = load_thresholds(cfg.thresholds);
  } else if (!cfg.inline_thresholds) {
    throw std::runtime_error(
        "power-limit: no thresholds available; run `sclab calibrate --out <dir>` and pass "
        "--thresholds <dir>/thresholds.csv, or pass --inline-thresholds");
  }

  const LimitEnsemble ensemble =
      simulate_limit_ensemble(cfg.trials, cfg.steps, cfg.seed, cfg.workers);
  if (cfg.inline_thresholds && cfg.thresholds.empty()) {
    for (double eps : eps_list)
      by_eps[eps] = {a_epsilon(eps), calibrate_threshold(ThresholdKind::Lambda, eps, ensemble),
                     calibrate_threshold(ThresholdKind::Gamma, eps, ensemble)};
  }

  CsvTable power;
  power.header = {"test", "epsilon", "u", "power", "stderr", "trials"};
  CsvTable dtable = make_threshold_table();
  double ess_min = static_cast<double>(cfg.trials);
  auto add_power = [&](const std::string& test, double eps, double u, double p, double se) {
    power.rows.push_back({test, format_double(eps), format_double(u), format_double(p),
                          format_double(se), std::to_string(cfg.trials)});
  };
  for (double eps : eps_list) {
    const Thresholds thr = thresholds_for(by_eps, eps, "the supplied table");
    std::vector<SvgSeries> series(4);
    series[0] = {"score (closed form)", "#1f77b4", {}};
    series[1] = {"likelihood ratio", "#2ca02c", {}};
    series[2] = {"wald", "#d62728", {}};
    series[3] = {"np envelope", "#7f7f7f", {}};
    for (double u : u_grid) {
      const double score = limit_power_score(u, eps);
      add_power("score", eps, u, score, 0.0);
      const PowerEstimate lr = limit_power_reweighted(TestKind::Lr, u, eps, thr, ensemble);
      add_power("lr", eps, u, lr.power, lr.std_error);
      const PowerEstimate wald = limit_power_reweighted(TestKind::Wald, u, eps, thr, ensemble);
      add_power("wald", eps, u, wald.power, wald.std_error);
      const NpEstimate np = np_envelope(u, eps, ensemble);
      add_power("np", eps, u, np.power, np.std_error);
      dtable.rows.push_back({"d", format_double(eps), format_double(u),
                             format_double(np.d_threshold), "", "",
                             std::to_string(cfg.trials), std::to_string(cfg.steps),
                             std::to_string(cfg.seed)});
      if (u > 0.0) ess_min = std::min(ess_min, effective_sample_size(u, ensemble));
      series[0].points.emplace_back(u, score);
      series[1].points.emplace_back(u, lr.power);
      series[2].points.emplace_back(u, wald.power);
      series[3].points.emplace_back(u, np.power);
    }
    if (cfg.svg) {
      std::ostringstream name;
      name << "power_limit_eps" << format_double(eps) << ".svg";
      write_svg_chart(join_path(cfg.out, name.str()),
                      "Limit powers, eps=" + format_double(eps), "u", "power", series);
    }
  }
  const std::string power_path = join_path(cfg.out, "power_limit.csv");
  const std::string d_path = join_path(cfg.out, "thresholds_d.csv");
  write_csv(power_path, power);
  write_csv(d_path, dtable);

  RunManifest manifest;
  echo_config(manifest, cfg);
  manifest.set("meta.version", std::string(kVersion));
  manifest.set("meta.degenerate_resampled", ensemble.resampled);
  manifest.set("meta.ess_min", ess_min);
  manifest.set("meta.wallclock_sec", timer.seconds());
  manifest.add_output(power_path);
  manifest.add_output(d_path);
  manifest.write(join_path(cfg.out, "power_limit_manifest.txt"));
  std::cout << "power-limit: wrote " << power_path << " (" << format_double(timer.seconds())
            << "s)\n";
  return 0;
}

namespace {

struct FinitePathRecord {
  double delta = 0.0;
  double j = 0.0;
  double sup_l = 0.0;
  double u_hat = 0.0;
  long count = 0;
};

}  // namespace

int cmd_power_finite(const ExperimentConfig& raw) {
  Timer timer;
  ExperimentConfig cfg = resolve(raw, 1000000, "0:20:0.5");
  cfg.command = "power-finite";
  const auto eps_list = parse_eps_list(cfg.eps);
  const auto u_grid = parse_number_list(cfg.u_grid);
  if (u_grid.empty()) throw std::invalid_argument("power-finite: empty u grid");
  const auto tests = parse_name_list(cfg.tests);
  for (const auto& t : tests)
    if (t != "score" && t != "lr" && t != "wald")
      throw std::invalid_argument("power-finite: unknown test '" + t + "'");
  const bool want_score = std::count(tests.begin(), tests.end(), "score") > 0;
  const bool want_lr = std::count(tests.begin(), tests.end(), "lr") > 0;
  const bool want_wald = std::count(tests.begin(), tests.end(), "wald") > 0;
  const bool want_dump = !cfg.dump_stats.empty();
  const bool need_mle = want_lr || want_wald || want_dump;
  ensure_out_dir(cfg.out);

  const PsiSpec psi = psi_from_selector(cfg.psi);
  const double gamma = cfg.rate * psi.deriv_at_zero;
  const double k_t = (cfg.horizon > 1.0) ? default_alt_upper(cfg.rate, cfg.horizon)
                                         : std::numeric_limits<double>::infinity();

  // Thresholds for the lr/wald decisions: calibrated file if given,
  // otherwise the reference table for the standard epsilon values.
  std::map<double, Thresholds> by_eps;
  if (!cfg.thresholds.empty()) by_eps = load_thresholds(cfg.thresholds);
  auto thresholds_lookup = [&](double eps) -> Thresholds {
    if (!cfg.thresholds.empty()) return thresholds_for(by_eps, eps, cfg.thresholds);
    for (const auto& [e, thr] : reference_thresholds())
      if (std::fabs(e - eps) < 1e-9) return thr;
    throw std::runtime_error(
        "power-finite: no reference thresholds for epsilon=" + format_double(eps) +
        "; run `sclab calibrate` and pass --thresholds");
  };
  std::vector<Thresholds> thr_list;
  if (want_lr || want_wald || want_dump)
    for (double eps : eps_list) thr_list.push_back(thresholds_lookup(eps));

  CsvTable power;
  power.header = {"test", "epsilon", "rate", "horizon", "u", "power", "stderr", "trials"};
  CsvTable dump;
  dump.header = {"path_id", "count", "delta",        "j",         "mle_u",
                 "l_at_mle", "score_reject", "lr_reject", "wald_reject"};

  const std::size_t m = cfg.trials;
  std::vector<FinitePathRecord> records(m);
  std::map<double, std::vector<std::pair<double, double>>> curves;  // eps -> (u, power)

  for (std::size_t ui = 0; ui < u_grid.size(); ++ui) {
    const double u = u_grid[ui];
    if (u < 0.0) throw std::invalid_argument("power-finite: u must be >= 0");
    if (u > k_t)
      std::cerr << "power-finite: warning: u=" << format_double(u)
                << " lies outside the alternative set U_T (K_T=" << format_double(k_t)
                << "); simulating the requested drift anyway\n";
    const double theta = u / (gamma * cfg.horizon);
    const std::uint64_t seed_u = derive_seed(cfg.seed, 1000 + ui);
    const bool dump_this_u = want_dump && ui == 0;
    const TestConfig tc = make_test_config(
        cfg.rate, cfg.horizon, psi, eps_list.front(),
        (cfg.horizon > 1.0) ? default_alt_upper(cfg.rate, cfg.horizon) : 1.0);
    parallel_chunks(m, cfg.workers, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        RngStream stream(seed_u, i);
        const PointProcessPath path =
            simulate_self_correcting(psi, theta, cfg.rate, cfg.horizon, stream);
        FinitePathRecord rec;
        rec.count = path.count();
        rec.delta = delta_T(path, tc);
        if (need_mle) {
          const MaxResult mle = mle_result(path, tc);
          rec.sup_l = mle.value;
          rec.u_hat = mle.arg;
        }
        if (dump_this_u && i < cfg.dump_limit) rec.j = j_T(path, tc);
        records[i] = rec;
      }
    });
    for (std::size_t ei = 0; ei < eps_list.size(); ++ei) {
      const double eps = eps_list[ei];
      const double a = a_epsilon(eps);
      const Thresholds thr = thr_list.empty() ? Thresholds{} : thr_list[ei];
      long score_hits = 0, lr_hits = 0, wald_hits = 0;
      for (const auto& rec : records) {
        if (rec.delta > a) ++score_hits;
        if (want_lr && rec.sup_l > thr.b * thr.b) ++lr_hits;
        if (want_wald && rec.u_hat >= thr.c) ++wald_hits;
      }
      auto add_row = [&](const std::string& test, long hits) {
        const double p = static_cast<double>(hits) / static_cast<double>(m);
        const double se = std::sqrt(std::max(0.0, p * (1.0 - p) / static_cast<double>(m)));
        power.rows.push_back({test, format_double(eps), format_double(cfg.rate),
                              format_double(cfg.horizon), format_double(u), format_double(p),
                              format_double(se), std::to_string(m)});
        if (test == (want_score ? "score" : tests.front()))
          curves[eps].emplace_back(u, p);
      };
      if (want_score) add_row("score", score_hits);
      if (want_lr) add_row("lr", lr_hits);
      if (want_wald) add_row("wald", wald_hits);
    }
    if (dump_this_u) {
      const double eps = eps_list.front();
      const double a = a_epsilon(eps);
      const Thresholds thr = thr_list.empty() ? thresholds_lookup(eps) : thr_list.front();
      for (std::size_t i = 0; i < std::min<std::size_t>(cfg.dump_limit, m); ++i) {
        const auto& rec = records[i];
        dump.rows.push_back({std::to_string(i), std::to_string(rec.count),
                             format_double(rec.delta), format_double(rec.j),
                             format_double(rec.u_hat), format_double(rec.sup_l),
                             rec.delta > a ? "1" : "0",
                             rec.sup_l > thr.b * thr.b ? "1" : "0",
                             rec.u_hat >= thr.c ? "1" : "0"});
      }
    }
  }

  const std::string power_path = join_path(cfg.out, "power_finite.csv");
  write_csv(power_path, power);
  if (want_dump) write_csv(cfg.dump_stats, dump);
  if (cfg.svg) {
    std::vector<SvgSeries> series;
    const char* colors[] = {"#1f77b4", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2"};
    std::size_t k = 0;
    for (const auto& [eps, pts] : curves)
      series.push_back({"eps=" + format_double(eps), colors[k++ % 6], pts});
    write_svg_chart(join_path(cfg.out, "power_finite.svg"),
                    "Finite-horizon power, T=" + format_double(cfg.horizon), "u", "power",
                    series);
  }

  RunManifest manifest;
  echo_config(manifest, cfg);
  manifest.set("meta.version", std::string(kVersion));
  manifest.set("meta.k_t", k_t);
  manifest.set("meta.wallclock_sec", timer.seconds());
  // Size annotation: the u=0 row of each epsilon is the empirical size.
  for (const auto& row : power.rows)
    if (row[4] == "0" && row[0] == "score")
      manifest.set("meta.size.eps" + row[1], row[5]);
  manifest.add_output(power_path);
  if (want_dump) manifest.add_output(cfg.dump_stats);
  manifest.write(join_path(cfg.out, "power_finite_manifest.txt"));
  std::cout << "power-finite: wrote " << power_path << " (" << format_double(timer.seconds())
            << "s)\n";
  return 0;
}

int cmd_compare(const ExperimentConfig& raw) {
  ExperimentConfig cfg = raw;
  cfg.command = "compare";
  const std::string input =
      cfg.power.empty() ? join_path(cfg.out, "power_limit.csv") : cfg.power;
  const CsvTable table = read_csv(input);
  const int test_col = table.require_column("test", input);
  const int eps_col = table.require_column("epsilon", input);
  const int u_col = table.require_column("u", input);
  const int power_col = table.require_column("power", input);
  const int se_col = table.require_column("stderr", input);

  struct Point {
    double power = 0.0, se = 0.0;
    bool present = false;
  };
  // eps -> u -> per-test point (0 score, 1 lr, 2 wald, 3 np)
  std::map<double, std::map<double, std::array<Point, 4>>> grid;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const std::string& name = table.rows[r][static_cast<std::size_t>(test_col)];
    int idx = -1;
    if (name == "score") idx = 0;
    else if (name == "lr") idx = 1;
    else if (name == "wald") idx = 2;
    else if (name == "np") idx = 3;
    else continue;
    const double eps = table.number_at(r, eps_col, input);
    const double u = table.number_at(r, u_col, input);
    auto& point = grid[eps][u][static_cast<std::size_t>(idx)];
    point.power = table.number_at(r, power_col, input);
    point.se = table.number_at(r, se_col, input);
    point.present = true;
  }

  std::ostringstream report;
  report << "limit power ordering report (expected score <= lr <= wald <= np)\n";
  report << "input: " << input << "\n";
  long violations_total = 0, violations_u10 = 0;
  for (const auto& [eps, by_u] : grid) {
    report << "\nepsilon = " << format_double(eps) << "\n";
    report << "      u     score        lr      wald        np   lr-score   wald-lr   np-wald  flags\n";
    for (const auto& [u, pts] : by_u) {
      for (const auto& p : pts)
        if (!p.present)
          throw std::runtime_error(input +
                                   ": mismatched grids: missing test curve at epsilon=" +
                                   format_double(eps) + ", u=" + format_double(u));
      auto gap = [&](int hi, int lo) {
        const double g = pts[hi].power - pts[lo].power;
        const double se = std::sqrt(pts[hi].se * pts[hi].se + pts[lo].se * pts[lo].se);
        return std::pair<double, double>(g, se);
      };
      const auto [g1, s1] = gap(1, 0);
      const auto [g2, s2] = gap(2, 1);
      const auto [g3, s3] = gap(3, 2);
      std::string flags;
      auto check = [&](double g, double s, const char* tag) {
        if (g < -3.0 * s) {
          flags += flags.empty() ? tag : std::string(",") + tag;
          ++violations_total;
          if (u >= 10.0) ++violations_u10;
        }
      };
      check(g1, s1, "lr<score");
      check(g2, s2, "wald<lr");
      check(g3, s3, "np<wald");
      char line[256];
      std::snprintf(line, sizeof(line),
                    "%7.3f %9.5f %9.5f %9.5f %9.5f %10.5f %9.5f %9.5f  %s", u, pts[0].power,
                    pts[1].power, pts[2].power, pts[3].power, g1, g2, g3,
                    flags.empty() ? "-" : flags.c_str());
      report << line << "\n";
    }
  }
  report << "\nordering_violations_total=" << violations_total << "\n";
  report << "ordering_violations_u_ge_10=" << violations_u10 << "\n";

  ensure_out_dir(cfg.out);
  const std::string report_path = join_path(cfg.out, "compare_report.txt");
  std::ofstream out(report_path, std::ios::binary);
  if (!out) throw std::runtime_error("compare: cannot open " + report_path);
  out << report.str();
  std::cout << report.str();
  return 0;
}

int cmd_tables(const ExperimentConfig& raw) {
  ExperimentConfig cfg = raw;
  cfg.command = "tables";
  const std::string input =
      cfg.thresholds.empty() ? join_path(cfg.out, "thresholds.csv") : cfg.thresholds;
  const CsvTable table = read_csv(input);
  const int kind_col = table.require_column("kind", input);
  const int eps_col = table.require_column("epsilon", input);
  const int thr_col = table.require_column("threshold", input);
  std::map<std::string, std::map<double, double>> by_kind;
  for (std::size_t r = 0; r < table.rows.size(); ++r)
    by_kind[table.rows[r][static_cast<std::size_t>(kind_col)]]
           [table.number_at(r, eps_col, input)] = table.number_at(r, thr_col, input);

  std::vector<double> eps_values;
  for (const auto& [kind, entries] : by_kind)
    for (const auto& [eps, value] : entries)
      if (std::find(eps_values.begin(), eps_values.end(), eps) == eps_values.end())
        eps_values.push_back(eps);
  std::sort(eps_values.begin(), eps_values.end());

  std::ostringstream out;
  out << "thresholds (" << input << ")\n";
  out << "epsilon ";
  for (double e : eps_values) out << "  " << format_double(e);
  out << "\n";
  for (const auto& [kind, entries] : by_kind) {
    if (kind == "d") continue;  // per-u thresholds live in thresholds_d.csv
    out << kind << "       ";
    for (double e : eps_values) {
      auto it = entries.find(e);
      char cell[32];
      if (it == entries.end()) std::snprintf(cell, sizeof(cell), "  %8s", "-");
      else std::snprintf(cell, sizeof(cell), "  %8.5f", it->second);
      out << cell;
    }
    out << "\n";
  }
  ensure_out_dir(cfg.out);
  std::ofstream file(join_path(cfg.out, "tables.txt"), std::ios::binary);
  file << out.str();
  std::cout << out.str();
  return 0;
}

}  // namespace sclab
