#include "sclab/statistics.hpp"

#include <cmath>

#include "sclab/limit.hpp"
#include "sclab/math_util.hpp"

namespace sclab {

namespace {

void check_match(const PointProcessPath& path, const TestConfig& config) {
  if (std::fabs(path.rate - config.rate) > 1e-12 * std::max(1.0, config.rate) ||
      std::fabs(path.horizon - config.horizon) > 1e-12 * std::max(1.0, config.horizon))
    throw std::invalid_argument("path rate/horizon do not match the test config");
}

}  // namespace

double default_alt_upper(double rate, double horizon) {
  if (!(horizon > 1.0))
    throw std::invalid_argument("default_alt_upper: needs horizon > 1; set alt_upper explicitly");
  return std::sqrt(rate * horizon) / std::log(horizon);
}

TestConfig make_test_config(double rate, double horizon, PsiSpec psi, double epsilon) {
  return make_test_config(rate, horizon, std::move(psi), epsilon,
                          default_alt_upper(rate, horizon));
}

TestConfig make_test_config(double rate, double horizon, PsiSpec psi, double epsilon,
                            double alt_upper) {
  if (!(rate > 0.0)) throw std::invalid_argument("make_test_config: rate must be > 0");
  if (!(horizon > 0.0)) throw std::invalid_argument("make_test_config: horizon must be > 0");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("make_test_config: epsilon must be in (0,1)");
  if (!(alt_upper > 0.0)) throw std::invalid_argument("make_test_config: alt_upper must be > 0");
  TestConfig config;
  config.rate = rate;
  config.horizon = horizon;
  config.psi = std::move(psi);
  config.epsilon = epsilon;
  config.alt_upper = alt_upper;
  return config;
}

double delta_T(const PointProcessPath& path, const TestConfig& config) {
  check_match(path, config);
  const double st = config.rate * config.horizon;
  const double x = static_cast<double>(path.count());
  return (x - (x - st) * (x - st)) / (2.0 * st);
}

double delta_T_event_sum(const PointProcessPath& path, const TestConfig& config) {
  check_match(path, config);
  const double s = config.rate;
  double event_sum = 0.0;
  for (std::size_t i = 0; i < path.events.size(); ++i)
    event_sum += s * path.events[i] - static_cast<double>(i);
  // int_0^T (S*t - X_t) dt, piecewise between events where X_t is constant.
  double integral = 0.0;
  double prev = 0.0;
  auto piece = [s](double a, double b, double k) {
    const double va = s * a - k, vb = s * b - k;
    return (vb * vb - va * va) / (2.0 * s);
  };
  for (std::size_t i = 0; i < path.events.size(); ++i) {
    integral += piece(prev, path.events[i], static_cast<double>(i));
    prev = path.events[i];
  }
  integral += piece(prev, path.horizon, static_cast<double>(path.events.size()));
  return (event_sum - s * integral) / (s * config.horizon);
}

double j_T(const PointProcessPath& path, const TestConfig& config) {
  check_match(path, config);
  const double s = config.rate;
  auto piece = [s](double a, double b, double k) {
    const double va = s * a - k, vb = s * b - k;
    return (vb * vb * vb - va * va * va) / (3.0 * s);
  };
  double integral = 0.0;
  double prev = 0.0;
  for (std::size_t i = 0; i < path.events.size(); ++i) {
    integral += piece(prev, path.events[i], static_cast<double>(i));
    prev = path.events[i];
  }
  integral += piece(prev, path.horizon, static_cast<double>(path.events.size()));
  return integral / (s * config.horizon * config.horizon);
}

PathStats path_stats(const PointProcessPath& path, const TestConfig& config) {
  return {delta_T(path, config), j_T(path, config), path.count()};
}

namespace {

double event_terms(double theta, const PointProcessPath& path, const TestConfig& config) {
  double acc = 0.0;
  for (std::size_t i = 0; i < path.events.size(); ++i) {
    const double v = config.rate * path.events[i] - static_cast<double>(i);
    const double value = config.psi.value(theta * v);
    if (!(value > 0.0))
      throw std::domain_error("log_likelihood: psi is not positive at an event");
    acc += std::log(value);
  }
  return acc;
}

/// Compensator term S* int_0^T (psi(theta (S*t - X_t)) - 1) dt for
/// psi(x) = exp(kappa x); expm1 keeps small theta exact.
double compensator_exp(double theta, const PointProcessPath& path, const TestConfig& config) {
  const double s = config.rate;
  const double phi = theta * config.psi.deriv_at_zero;
  auto piece = [s, phi](double a, double b, double k) {
    return (std::expm1(phi * (s * b - k)) - std::expm1(phi * (s * a - k))) / phi - s * (b - a);
  };
  double acc = 0.0;
  double prev = 0.0;
  for (std::size_t i = 0; i < path.events.size(); ++i) {
    acc += piece(prev, path.events[i], static_cast<double>(i));
    prev = path.events[i];
  }
  acc += piece(prev, path.horizon, static_cast<double>(path.events.size()));
  return acc;
}

double compensator_quadrature(double theta, const PointProcessPath& path,
                              const TestConfig& config, int order) {
  const double s = config.rate;
  const auto& psi = config.psi;
  auto integrand = [&psi, s, theta](double t, double k) {
    const double value = psi.value(theta * (s * t - k));
    if (!(value > 0.0))
      throw std::domain_error("log_likelihood: psi is not positive along the path");
    return value - 1.0;
  };
  double acc = 0.0;
  double prev = 0.0;
  for (std::size_t i = 0; i <= path.events.size(); ++i) {
    const double end = (i == path.events.size()) ? path.horizon : path.events[i];
    const double k = static_cast<double>(i);
    acc += s * gauss_legendre_integrate([&](double t) { return integrand(t, k); }, prev, end,
                                        order);
    prev = end;
  }
  return acc;
}

}  // namespace

double log_likelihood(double u, const PointProcessPath& path, const TestConfig& config,
                      int quad_order) {
  check_match(path, config);
  if (u < 0.0) throw std::invalid_argument("log_likelihood: u must be >= 0");
  if (u == 0.0) return 0.0;
  const double gamma = config.rate * config.psi.deriv_at_zero;
  const double theta = u / (gamma * config.horizon);
  const double events = event_terms(theta, path, config);
  const double comp = config.psi.exact_integrable
                          ? compensator_exp(theta, path, config)
                          : compensator_quadrature(theta, path, config, quad_order);
  return events - comp;
}

double log_likelihood_quadrature(double u, const PointProcessPath& path,
                                 const TestConfig& config, int quad_order) {
  check_match(path, config);
  if (u < 0.0) throw std::invalid_argument("log_likelihood: u must be >= 0");
  if (u == 0.0) return 0.0;
  const double gamma = config.rate * config.psi.deriv_at_zero;
  const double theta = u / (gamma * config.horizon);
  return event_terms(theta, path, config) -
         compensator_quadrature(theta, path, config, quad_order);
}

MaxResult mle_result(const PointProcessPath& path, const TestConfig& config,
                     const MleOptions& options) {
  auto objective = [&](double u) { return log_likelihood(u, path, config, options.quad_order); };
  return maximize_grid_golden(objective, 0.0, config.alt_upper, options.grid_points,
                              options.tol);
}

double mle_u(const PointProcessPath& path, const TestConfig& config, const MleOptions& options) {
  return mle_result(path, config, options).arg;
}

TestVerdict score_test(const PointProcessPath& path, const TestConfig& config) {
  const double threshold = a_epsilon(config.epsilon);
  const double stat = delta_T(path, config);
  return {stat > threshold, stat, threshold};
}

TestVerdict lr_test(const PointProcessPath& path, const TestConfig& config, double b_eps,
                    const MleOptions& options) {
  const double stat = mle_result(path, config, options).value;
  const double threshold = b_eps * b_eps;
  return {stat > threshold, stat, threshold};
}

TestVerdict wald_test(const PointProcessPath& path, const TestConfig& config, double c_eps,
                      const MleOptions& options) {
  const double stat = mle_result(path, config, options).arg;
  return {stat >= c_eps, stat, c_eps};
}

SequentialResult sequential_score_test(const PsiSpec& psi, double theta, double rate,
                                       double d_bound, double epsilon, RngStream& stream,
                                       double hard_cap) {
  if (!(d_bound > 0.0))
    throw std::invalid_argument("sequential_score_test: d_bound must be > 0");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("sequential_score_test: epsilon must be in (0,1)");
  if (hard_cap <= 0.0) hard_cap = 1e3 * d_bound * d_bound / rate;

  SelfCorrectingSampler sampler(psi, theta, rate, stream);
  const double target = d_bound * d_bound;
  double info = 0.0;       // int_0^t (S*r - X_r)^2 S* dr
  double event_sum = 0.0;  // sum of S*t_i - X_{t_i-}
  double drift_int = 0.0;  // int_0^t (S*r - X_r) dr
  double prev = 0.0;
  long n = 0;
  while (true) {
    const double next = sampler.next_event();
    const double segment_end = std::min(next, hard_cap);
    const double va = rate * prev - n;
    const double vb = rate * segment_end - n;
    const double gained = (vb * vb * vb - va * va * va) / 3.0;
    if (info + gained >= target) {
      // The information integral is continuous, so the boundary is hit
      // exactly inside this inter-event segment.
      const double v_tau = std::cbrt(va * va * va + 3.0 * (target - info));
      const double tau = (v_tau + n) / rate;
      drift_int += (v_tau * v_tau - va * va) / (2.0 * rate);
      const double stat = (event_sum - rate * drift_int) / d_bound;
      const double threshold = upper_quantile(epsilon);
      return {{stat > threshold, stat, threshold}, tau};
    }
    if (next > hard_cap)
      throw SequentialTimeout("sequential_score_test: information bound not reached before cap");
    info += gained;
    drift_int += (vb * vb - va * va) / (2.0 * rate);
    event_sum += rate * next - n;
    ++n;
    prev = next;
  }
}

}  // namespace sclab
