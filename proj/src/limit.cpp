#include "sclab/limit.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

#include "sclab/math_util.hpp"
#include "sclab/parallel.hpp"

namespace sclab {

namespace {

StatSummary summary_from(double endpoint, double j) {
  StatSummary s;
  s.delta = 0.5 * (1.0 - endpoint * endpoint);
  s.j = j;
  if (!(j > 0.0)) throw DegeneratePath("limit path has zero quadratic functional");
  s.lambda = s.delta / std::sqrt(2.0 * j);
  s.gamma = s.delta / j;
  return s;
}

double trapezoid_sq(const Eigen::ArrayXd& values, int n_steps) {
  // Index-order accumulation; the fused ensemble loops replicate this
  // operation sequence exactly (values[0] = 0 contributes nothing).
  double acc = 0.0;
  for (int k = 1; k < n_steps; ++k) acc += values[k] * values[k];
  acc += 0.5 * values[n_steps] * values[n_steps];
  return acc / n_steps;
}

/// Fused generation of (endpoint, trapezoid of squares) for one Wiener path.
void wiener_endpoint_j(int n_steps, RngStream& stream, double& endpoint, double& j) {
  const double step_sd = std::sqrt(1.0 / n_steps);
  double w = 0.0;
  double acc = 0.0;
  for (int k = 1; k < n_steps; ++k) {
    w += step_sd * stream.normal();
    acc += w * w;
  }
  w += step_sd * stream.normal();
  acc += 0.5 * w * w;
  endpoint = w;
  j = acc / n_steps;
}

void ou_endpoint_j(double drift, int n_steps, RngStream& stream, double& endpoint, double& j) {
  const double h = 1.0 / n_steps;
  const double decay = std::exp(-drift * h);
  const double step_var = drift == 0.0 ? h : -std::expm1(-2.0 * drift * h) / (2.0 * drift);
  const double step_sd = std::sqrt(step_var);
  double y = 0.0;
  double acc = 0.0;
  for (int k = 1; k < n_steps; ++k) {
    y = decay * y + step_sd * stream.normal();
    acc += y * y;
  }
  y = decay * y + step_sd * stream.normal();
  acc += 0.5 * y * y;
  endpoint = y;
  j = acc / n_steps;
}

template <typename PathFn>
LimitEnsemble build_ensemble(std::size_t trials, int n_steps, std::uint64_t seed, int workers,
                             double drift, PathFn&& one_path) {
  if (trials == 0) throw std::invalid_argument("ensemble: trials must be >= 1");
  if (n_steps < 2) throw std::invalid_argument("ensemble: n_steps must be >= 2");
  LimitEnsemble ens;
  ens.delta.resize(static_cast<Eigen::Index>(trials));
  ens.j.resize(static_cast<Eigen::Index>(trials));
  ens.trials = trials;
  ens.n_steps = n_steps;
  ens.seed = seed;
  ens.drift = drift;
  std::atomic<std::uint64_t> resampled{0};
  parallel_chunks(trials, workers, [&](std::size_t begin, std::size_t end) {
    std::uint64_t local = 0;
    for (std::size_t i = begin; i < end; ++i) {
      double endpoint = 0.0, jj = 0.0;
      // Degenerate draws (j == 0) are resampled from a reserved stream
      // range so the result stays a pure function of (seed, index).
      for (std::uint64_t attempt = 0;; ++attempt) {
        RngStream stream(seed, i + attempt * trials);
        one_path(stream, endpoint, jj);
        if (jj > 0.0) break;
        ++local;
      }
      ens.delta[static_cast<Eigen::Index>(i)] = 0.5 * (1.0 - endpoint * endpoint);
      ens.j[static_cast<Eigen::Index>(i)] = jj;
    }
    resampled.fetch_add(local);
  });
  ens.resampled = resampled.load();
  return ens;
}

double ascending_order_statistic(Eigen::ArrayXd values, std::size_t rank_1based) {
  const std::size_t n = static_cast<std::size_t>(values.size());
  const std::size_t idx = std::min(std::max<std::size_t>(rank_1based, 1), n) - 1;
  std::nth_element(values.data(), values.data() + idx, values.data() + n);
  return values[static_cast<Eigen::Index>(idx)];
}

Eigen::ArrayXd statistic_values(ThresholdKind kind, const LimitEnsemble& ens) {
  switch (kind) {
    case ThresholdKind::Lambda:
      return ens.delta / (2.0 * ens.j).sqrt();
    case ThresholdKind::Gamma:
      return ens.delta / ens.j;
    case ThresholdKind::SmallJ:
      return ens.j;
  }
  throw std::logic_error("statistic_values: unknown kind");
}

std::size_t threshold_rank(ThresholdKind kind, double epsilon, std::size_t trials) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("calibrate_threshold: epsilon must be in (0,1)");
  const double frac = (kind == ThresholdKind::SmallJ) ? epsilon : 1.0 - epsilon;
  return static_cast<std::size_t>(std::llround(frac * static_cast<double>(trials)));
}

}  // namespace

StatSummary wiener_functionals(const WienerPath& path) {
  return summary_from(path.values[path.n_steps], trapezoid_sq(path.values, path.n_steps));
}

StatSummary ou_functionals(const OuPath& path) {
  return summary_from(path.values[path.n_steps], trapezoid_sq(path.values, path.n_steps));
}

double a_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("a_epsilon: epsilon must be in (0,1)");
  const double z = upper_quantile(0.5 * (1.0 - epsilon));
  return 0.5 * (1.0 - z * z);
}

double h_of_u(double u) {
  if (u < 0.0) throw std::invalid_argument("h_of_u: u must be >= 0");
  if (u == 0.0) return 1.0;
  return std::sqrt(2.0 * u / -std::expm1(-2.0 * u));
}

double limit_power_score(double u, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("limit_power_score: epsilon must be in (0,1)");
  if (u < 0.0) throw std::invalid_argument("limit_power_score: u must be >= 0");
  const double z = upper_quantile(0.5 * (1.0 - epsilon));
  return 2.0 * normal_cdf(h_of_u(u) * z) - 1.0;
}

double z_of_u(double u, const StatSummary& summary) {
  if (u < 0.0) throw std::invalid_argument("z_of_u: u must be >= 0");
  return std::exp(u * summary.delta - 0.5 * u * u * summary.j);
}

LimitEnsemble simulate_limit_ensemble(std::size_t trials, int n_steps, std::uint64_t seed,
                                      int workers) {
  return build_ensemble(trials, n_steps, seed, workers, 0.0,
                        [n_steps](RngStream& stream, double& endpoint, double& j) {
                          wiener_endpoint_j(n_steps, stream, endpoint, j);
                        });
}

LimitEnsemble simulate_ou_ensemble(double drift, std::size_t trials, int n_steps,
                                   std::uint64_t seed, int workers) {
  if (drift < 0.0) throw std::invalid_argument("simulate_ou_ensemble: drift must be >= 0");
  return build_ensemble(trials, n_steps, seed, workers, drift,
                        [drift, n_steps](RngStream& stream, double& endpoint, double& j) {
                          ou_endpoint_j(drift, n_steps, stream, endpoint, j);
                        });
}

double calibrate_threshold(ThresholdKind kind, double epsilon, const LimitEnsemble& ensemble) {
  return ascending_order_statistic(statistic_values(kind, ensemble),
                                   threshold_rank(kind, epsilon, ensemble.trials));
}

double calibrate_threshold(ThresholdKind kind, double epsilon, std::size_t trials, int n_steps,
                           std::uint64_t seed, int workers) {
  if (trials < 10000) throw std::invalid_argument("calibrate_threshold: trials must be >= 1e4");
  return calibrate_threshold(kind, epsilon, simulate_limit_ensemble(trials, n_steps, seed, workers));
}

ThresholdCi threshold_ci(ThresholdKind kind, double epsilon, const LimitEnsemble& ensemble,
                         double level) {
  const auto values = statistic_values(kind, ensemble);
  const double rank = static_cast<double>(threshold_rank(kind, epsilon, ensemble.trials));
  const double z = upper_quantile(0.5 * (1.0 - level));
  const double spread = z * std::sqrt(static_cast<double>(ensemble.trials) * epsilon * (1.0 - epsilon));
  const auto clamp_rank = [&](double r) {
    return static_cast<std::size_t>(
        std::min(std::max(std::llround(r), 1ll),
                 static_cast<long long>(ensemble.trials)));
  };
  return {ascending_order_statistic(values, clamp_rank(rank - spread)),
          ascending_order_statistic(values, clamp_rank(rank + spread))};
}

const std::vector<std::pair<double, Thresholds>>& reference_thresholds() {
  static const std::vector<std::pair<double, Thresholds>> table = [] {
    std::vector<std::pair<double, Thresholds>> rows = {
        {0.01, {0.0, 1.814, 13.692}}, {0.02, {0.0, 1.636, 11.224}},
        {0.03, {0.0, 1.524, 9.803}},  {0.04, {0.0, 1.440, 8.806}},
        {0.05, {0.0, 1.373, 8.042}},  {0.10, {0.0, 1.144, 5.719}},
    };
    for (auto& [eps, thr] : rows) thr.a = a_epsilon(eps);
    return rows;
  }();
  return table;
}

namespace {

template <typename Indicator>
PowerEstimate reweighted_mean(double u, const LimitEnsemble& ens, Indicator&& keep) {
  const Eigen::Index n = ens.delta.size();
  double sum = 0.0, sumsq = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = ens.delta[i];
    const double jj = ens.j[i];
    if (!keep(d, jj)) continue;
    const double w = std::exp(u * d - 0.5 * u * u * jj);
    sum += w;
    sumsq += w * w;
  }
  const double m = static_cast<double>(n);
  const double mean = sum / m;
  const double var = std::max(0.0, (sumsq - m * mean * mean) / (m - 1.0));
  return {mean, std::sqrt(var / m)};
}

}  // namespace

PowerEstimate limit_power_reweighted(TestKind test, double u, double epsilon,
                                     const Thresholds& thresholds,
                                     const LimitEnsemble& ensemble) {
  if (u < 0.0) throw std::invalid_argument("limit_power_reweighted: u must be >= 0");
  (void)epsilon;
  switch (test) {
    case TestKind::Score:
      return reweighted_mean(u, ensemble,
                             [&](double d, double) { return d > thresholds.a; });
    case TestKind::Lr:
      return reweighted_mean(u, ensemble, [&](double d, double jj) {
        return d / std::sqrt(2.0 * jj) > thresholds.b;
      });
    case TestKind::Wald:
      return reweighted_mean(u, ensemble,
                             [&](double d, double jj) { return d / jj > thresholds.c; });
  }
  throw std::logic_error("limit_power_reweighted: unknown test");
}

PowerEstimate limit_power_reweighted(TestKind test, double u, double epsilon,
                                     const Thresholds& thresholds, std::size_t trials,
                                     int n_steps, std::uint64_t seed, int workers) {
  return limit_power_reweighted(test, u, epsilon, thresholds,
                                simulate_limit_ensemble(trials, n_steps, seed, workers));
}

NpEstimate np_envelope(double u, double epsilon, const LimitEnsemble& ensemble) {
  if (u < 0.0) throw std::invalid_argument("np_envelope: u must be >= 0");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("np_envelope: epsilon must be in (0,1)");
  if (u == 0.0) return {epsilon, 0.0, 0.0};  // ln Z(0) is identically zero
  Eigen::ArrayXd lnz = u * ensemble.delta - (0.5 * u * u) * ensemble.j;
  const std::size_t rank = static_cast<std::size_t>(
      std::llround((1.0 - epsilon) * static_cast<double>(ensemble.trials)));
  Eigen::ArrayXd scratch = lnz;
  const double d = ascending_order_statistic(std::move(scratch), rank);
  const Eigen::Index n = lnz.size();
  double sum = 0.0, sumsq = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (lnz[i] > d) {
      const double w = std::exp(lnz[i]);
      sum += w;
      sumsq += w * w;
    }
  }
  const double m = static_cast<double>(n);
  const double mean = sum / m;
  const double var = std::max(0.0, (sumsq - m * mean * mean) / (m - 1.0));
  return {mean, std::sqrt(var / m), d};
}

PowerEstimate ou_cross_check(TestKind test, double u, double epsilon,
                             const Thresholds& thresholds, std::size_t trials, int n_steps,
                             std::uint64_t seed, int workers) {
  const LimitEnsemble ens = simulate_ou_ensemble(u, trials, n_steps, seed, workers);
  (void)epsilon;
  const Eigen::Index n = ens.delta.size();
  long hits = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = ens.delta[i];
    const double jj = ens.j[i];
    bool keep = false;
    switch (test) {
      case TestKind::Score: keep = d > thresholds.a; break;
      case TestKind::Lr: keep = d / std::sqrt(2.0 * jj) > thresholds.b; break;
      case TestKind::Wald: keep = d / jj > thresholds.c; break;
    }
    if (keep) ++hits;
  }
  const double m = static_cast<double>(n);
  const double p = static_cast<double>(hits) / m;
  return {p, std::sqrt(std::max(0.0, p * (1.0 - p)) / m)};
}

double effective_sample_size(double u, const LimitEnsemble& ensemble) {
  const Eigen::ArrayXd w = (u * ensemble.delta - (0.5 * u * u) * ensemble.j).exp();
  const double sum = w.sum();
  const double sumsq = w.square().sum();
  return sumsq > 0.0 ? sum * sum / sumsq : 0.0;
}

}  // namespace sclab
