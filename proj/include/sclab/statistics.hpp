#pragma once

#include <cmath>
#include <stdexcept>

#include "sclab/psi.hpp"
#include "sclab/rng.hpp"
#include "sclab/simulate.hpp"

namespace sclab {

/// Observation window and test parameters. alt_upper is the right end of
/// the alternative set U_T = [0, alt_upper) that the likelihood-ratio and
/// Wald statistics maximize over; the default is sqrt(rate*horizon)/ln(horizon).
struct TestConfig {
  double rate = 1.0;
  double horizon = 1.0;
  PsiSpec psi;
  double epsilon = 0.05;
  double alt_upper = 1.0;
};

double default_alt_upper(double rate, double horizon);

TestConfig make_test_config(double rate, double horizon, PsiSpec psi, double epsilon);
TestConfig make_test_config(double rate, double horizon, PsiSpec psi, double epsilon,
                            double alt_upper);

struct PathStats {
  double delta = 0.0;  // score statistic
  double j = 0.0;      // normalized quadratic information
  long count = 0;
};

struct TestVerdict {
  bool reject = false;
  double statistic_value = 0.0;
  double threshold = 0.0;
};

/// Score statistic (X_T - (X_T - S*T)^2) / (2 S*T), the derivative of the
/// log-likelihood ratio at u = 0.
double delta_T(const PointProcessPath& path, const TestConfig& config);

/// The same statistic through its event-sum representation
///   (1/(S*T)) [ sum_i (S*t_i - X_{t_i-}) - S* int_0^T (S*t - X_t) dt ];
/// agrees with delta_T to roundoff on every path.
double delta_T_event_sum(const PointProcessPath& path, const TestConfig& config);

/// (1/(S*T^2)) int_0^T (S*t - X_t)^2 dt, integrated piecewise in closed form.
double j_T(const PointProcessPath& path, const TestConfig& config);

PathStats path_stats(const PointProcessPath& path, const TestConfig& config);

/// Log-likelihood ratio at local parameter u (theta = u / (gamma T) with
/// gamma = rate * psi'(0)). Closed-form compensator for exactly integrable
/// psi, fixed-order Gauss-Legendre per inter-event interval otherwise.
double log_likelihood(double u, const PointProcessPath& path, const TestConfig& config,
                      int quad_order = 8);

/// Quadrature evaluation regardless of the closed-form flag.
double log_likelihood_quadrature(double u, const PointProcessPath& path,
                                 const TestConfig& config, int quad_order = 8);

struct MaxResult {
  double arg = 0.0;
  double value = 0.0;
};

/// Coarse grid over [lo, hi] (endpoints included) followed by golden-section
/// refinement around the best grid point. Ties break toward the smallest
/// argument; tol is absolute in the argument.
template <typename F>
MaxResult maximize_grid_golden(F&& f, double lo, double hi, int grid_points = 512,
                               double tol = 1e-6) {
  if (!(hi >= lo)) throw std::invalid_argument("maximize_grid_golden: empty interval");
  if (grid_points < 2) grid_points = 2;
  MaxResult best{lo, f(lo)};
  if (hi == lo) return best;
  const double step = (hi - lo) / (grid_points - 1);
  int best_idx = 0;
  for (int k = 1; k < grid_points; ++k) {
    const double x = (k == grid_points - 1) ? hi : lo + k * step;
    const double v = f(x);
    if (v > best.value) {
      best = {x, v};
      best_idx = k;
    }
  }
  double a = std::max(lo, best.arg - step);
  double b = std::min(hi, best.arg + step);
  (void)best_idx;
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (b - a > tol) {
    if (f1 > f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    }
    if (f1 > best.value) best = {x1, f1};
    if (f2 > best.value) best = {x2, f2};
  }
  return best;
}

struct MleOptions {
  int grid_points = 512;
  double tol = 1e-6;
  int quad_order = 8;
};

/// Maximizer of the log-likelihood over U_T = [0, alt_upper]; boundary
/// maxima are returned as the boundary value.
MaxResult mle_result(const PointProcessPath& path, const TestConfig& config,
                     const MleOptions& options = {});

double mle_u(const PointProcessPath& path, const TestConfig& config,
             const MleOptions& options = {});

/// Score test: reject iff delta_T > a_eps.
TestVerdict score_test(const PointProcessPath& path, const TestConfig& config);

/// Likelihood-ratio test: reject iff sup_{u in U_T} l_T(u) > b_eps^2.
TestVerdict lr_test(const PointProcessPath& path, const TestConfig& config, double b_eps,
                    const MleOptions& options = {});

/// Wald test: reject iff gamma*T*theta_hat = mle_u >= c_eps.
TestVerdict wald_test(const PointProcessPath& path, const TestConfig& config, double c_eps,
                      const MleOptions& options = {});

struct SequentialResult {
  TestVerdict verdict;
  double tau = 0.0;  // realized stopping time
};

struct SequentialTimeout : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Stopping-time score test: observe until int_0^tau (S*t - X_t)^2 S* dt
/// reaches d_bound^2, then reject iff the normalized score exceeds the
/// upper-eps normal quantile. hard_cap <= 0 selects the default cap of
/// 1e3 * d_bound^2 / rate time units.
SequentialResult sequential_score_test(const PsiSpec& psi, double theta, double rate,
                                       double d_bound, double epsilon, RngStream& stream,
                                       double hard_cap = -1.0);

}  // namespace sclab
