#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <vector>

#include "sclab/psi.hpp"
#include "sclab/rng.hpp"

namespace sclab {

/// Sorted event times of a point process observed on (0, horizon].
struct PointProcessPath {
  double rate = 1.0;     // S*, events per unit time under the null
  double horizon = 0.0;  // T
  std::vector<double> events;

  long count() const { return static_cast<long>(events.size()); }
};

/// Discretized path on [0,1]; values[k] = value at k/n_steps, values[0] = 0.
struct WienerPath {
  int n_steps = 0;
  Eigen::ArrayXd values;
};

struct OuPath {
  double drift = 0.0;  // u
  int n_steps = 0;
  Eigen::ArrayXd values;
};

/// Raised when a thinning proposal observes psi above its declared local
/// bound; the path is aborted because its law is no longer exact.
struct BoundViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Standard Wiener path: cumulative sum of N(0, 1/n_steps) increments.
WienerPath simulate_wiener(int n_steps, RngStream& stream);

/// Same construction with an injected noise source (test hook; `noise` is
/// called n_steps times and must return standard normal deviates).
template <typename NoiseFn>
WienerPath simulate_wiener_with(int n_steps, NoiseFn&& noise) {
  if (n_steps < 2) throw std::invalid_argument("simulate_wiener: n_steps must be >= 2");
  WienerPath path;
  path.n_steps = n_steps;
  path.values.resize(n_steps + 1);
  path.values[0] = 0.0;
  const double step_sd = std::sqrt(1.0 / n_steps);
  double w = 0.0;
  for (int k = 1; k <= n_steps; ++k) {
    w += step_sd * noise();
    path.values[k] = w;
  }
  return path;
}

/// Ornstein-Uhlenbeck path dY = -u Y ds + dW, Y(0) = 0, sampled with the
/// exact transition Y(s+h) = e^{-uh} Y(s) + xi, xi ~ N(0, (1-e^{-2uh})/(2u)).
OuPath simulate_ou(double drift, int n_steps, RngStream& stream);

/// Homogeneous Poisson path: cumulative Exp(rate) inter-arrivals.
PointProcessPath simulate_poisson(double rate, double horizon, RngStream& stream);

/// Self-correcting path with intensity rate * psi(theta * (rate*t - X_t)).
/// Exactly integrable psi uses closed-form inversion of the integrated
/// intensity; otherwise Ogata thinning against psi.local_bound.
PointProcessPath simulate_self_correcting(const PsiSpec& psi, double theta, double rate,
                                          double horizon, RngStream& stream);

/// Streaming event generator for the same law; used where the observation
/// window is data-dependent (stopping-time designs).
class SelfCorrectingSampler {
 public:
  SelfCorrectingSampler(const PsiSpec& psi, double theta, double rate, RngStream& stream);

  /// Absolute time of the next event; strictly increasing across calls.
  double next_event();

  double time() const { return t_; }
  long count() const { return n_; }

 private:
  double next_event_inversion();
  double next_event_thinning();

  const PsiSpec& psi_;
  double theta_;
  double rate_;
  RngStream& stream_;
  double t_ = 0.0;
  long n_ = 0;
  bool use_inversion_;
};

}  // namespace sclab
