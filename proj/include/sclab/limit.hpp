#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "sclab/simulate.hpp"

namespace sclab {

/// Functionals of a limit-experiment path W on [0,1]:
///   delta = (1 - W(1)^2)/2,  j = int_0^1 W(s)^2 ds,
///   lambda = delta / sqrt(2 j),  gamma = delta / j.
struct StatSummary {
  double delta = 0.0;
  double j = 0.0;
  double lambda = 0.0;
  double gamma = 0.0;
};

struct DegeneratePath : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// delta from the closed form in the endpoint (no discretized stochastic
/// integral anywhere), j by the trapezoidal rule on W(s)^2.
StatSummary wiener_functionals(const WienerPath& path);

/// Same functional forms applied to an Ornstein-Uhlenbeck path.
StatSummary ou_functionals(const OuPath& path);

/// Closed-form score threshold a_eps = (1 - z_{(1-eps)/2}^2)/2.
double a_epsilon(double epsilon);

/// h(u) = sqrt(2u / (1 - e^{-2u})), continuously extended to h(0) = 1.
double h_of_u(double u);

/// Limiting power of the score test, 2 Phi(h(u) z_{(1-eps)/2}) - 1.
double limit_power_score(double u, double epsilon);

/// Limiting likelihood ratio Z(u) = exp(u delta - u^2 j / 2); underflows
/// gracefully to 0 for large u^2 j.
double z_of_u(double u, const StatSummary& summary);

/// Per-path (delta, j) for a batch of simulated limit paths. Values are a
/// pure function of (seed, index), independent of the worker count.
/// Degenerate paths (j == 0) are resampled from a reserved stream range and
/// counted in `resampled`.
struct LimitEnsemble {
  Eigen::ArrayXd delta;
  Eigen::ArrayXd j;
  std::size_t trials = 0;
  int n_steps = 0;
  std::uint64_t seed = 0;
  std::uint64_t resampled = 0;
  double drift = 0.0;  // 0 for Wiener, u for Ornstein-Uhlenbeck
};

LimitEnsemble simulate_limit_ensemble(std::size_t trials, int n_steps, std::uint64_t seed,
                                      int workers = 0);
LimitEnsemble simulate_ou_ensemble(double drift, std::size_t trials, int n_steps,
                                   std::uint64_t seed, int workers = 0);

enum class ThresholdKind { Lambda, Gamma, SmallJ };  // b, c and e thresholds

/// Empirical quantile of Lambda(W), Gamma(W) or J(W) over the ensemble:
/// the (1-eps)M-th ascending order statistic for Lambda/Gamma (upper-eps
/// tail), the eps*M-th smallest of J for SmallJ.
double calibrate_threshold(ThresholdKind kind, double epsilon, const LimitEnsemble& ensemble);

/// Convenience overload that simulates its own Wiener ensemble.
double calibrate_threshold(ThresholdKind kind, double epsilon, std::size_t trials, int n_steps,
                           std::uint64_t seed, int workers = 0);

/// Order-statistic confidence interval for the same quantile (binomial
/// ranks at +-z_level standard deviations).
struct ThresholdCi {
  double lo = 0.0;
  double hi = 0.0;
};
ThresholdCi threshold_ci(ThresholdKind kind, double epsilon, const LimitEnsemble& ensemble,
                         double level = 0.99);

enum class TestKind { Score, Lr, Wald };

/// Thresholds for one epsilon.
struct Thresholds {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

/// Reference thresholds for epsilon in {0.01,...,0.05, 0.1}; reproducible
/// with the calibrate command at trials = 1e7, n_steps = 1e4.
const std::vector<std::pair<double, Thresholds>>& reference_thresholds();

struct PowerEstimate {
  double power = 0.0;
  double std_error = 0.0;
};

/// Limit power under drift u by reweighting the null ensemble with Z(u)
/// (score: delta > a; lr: lambda > b; wald: gamma > c).
PowerEstimate limit_power_reweighted(TestKind test, double u, double epsilon,
                                     const Thresholds& thresholds,
                                     const LimitEnsemble& ensemble);

/// Convenience overload simulating its own ensemble.
PowerEstimate limit_power_reweighted(TestKind test, double u, double epsilon,
                                     const Thresholds& thresholds, std::size_t trials,
                                     int n_steps, std::uint64_t seed, int workers = 0);

struct NpEstimate {
  double power = 0.0;
  double std_error = 0.0;
  double d_threshold = 0.0;
};

/// Most-powerful-test envelope at drift u: per-u threshold d_eps(u) from the
/// upper-eps quantile of ln Z(u) over the same ensemble, then the reweighted
/// rejection mean. At u = 0 the rule degenerates and the size eps is
/// reported directly.
NpEstimate np_envelope(double u, double epsilon, const LimitEnsemble& ensemble);

/// Direct (non-reweighted) power estimate from Ornstein-Uhlenbeck paths at
/// drift u, using the same thresholds; cross-checks the reweighting.
PowerEstimate ou_cross_check(TestKind test, double u, double epsilon,
                             const Thresholds& thresholds, std::size_t trials, int n_steps,
                             std::uint64_t seed, int workers = 0);

/// Reweighting diagnostics: effective sample size (sum w)^2 / sum w^2.
double effective_sample_size(double u, const LimitEnsemble& ensemble);

}  // namespace sclab
