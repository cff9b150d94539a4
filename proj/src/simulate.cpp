#include "sclab/simulate.hpp"

#include <cmath>

namespace sclab {

WienerPath simulate_wiener(int n_steps, RngStream& stream) {
  return simulate_wiener_with(n_steps, [&stream] { return stream.normal(); });
}

OuPath simulate_ou(double drift, int n_steps, RngStream& stream) {
  if (drift < 0.0) throw std::invalid_argument("simulate_ou: drift must be >= 0");
  if (n_steps < 2) throw std::invalid_argument("simulate_ou: n_steps must be >= 2");
  OuPath path;
  path.drift = drift;
  path.n_steps = n_steps;
  path.values.resize(n_steps + 1);
  path.values[0] = 0.0;
  const double h = 1.0 / n_steps;
  const double decay = std::exp(-drift * h);
  // -expm1 keeps the variance formula stable as drift*h -> 0 (limit h).
  const double step_var = drift == 0.0 ? h : -std::expm1(-2.0 * drift * h) / (2.0 * drift);
  const double step_sd = std::sqrt(step_var);
  double y = 0.0;
  for (int k = 1; k <= n_steps; ++k) {
    y = decay * y + step_sd * stream.normal();
    path.values[k] = y;
  }
  return path;
}

PointProcessPath simulate_poisson(double rate, double horizon, RngStream& stream) {
  if (!(rate > 0.0)) throw std::invalid_argument("simulate_poisson: rate must be > 0");
  if (!(horizon > 0.0)) throw std::invalid_argument("simulate_poisson: horizon must be > 0");
  PointProcessPath path;
  path.rate = rate;
  path.horizon = horizon;
  path.events.reserve(static_cast<std::size_t>(rate * horizon * 1.2) + 16);
  double t = stream.exponential(rate);
  while (t <= horizon) {
    path.events.push_back(t);
    t += stream.exponential(rate);
  }
  return path;
}

SelfCorrectingSampler::SelfCorrectingSampler(const PsiSpec& psi, double theta, double rate,
                                             RngStream& stream)
    : psi_(psi), theta_(theta), rate_(rate), stream_(stream) {
  if (theta < 0.0) throw std::invalid_argument("self_correcting: theta must be >= 0");
  if (!(rate > 0.0)) throw std::invalid_argument("self_correcting: rate must be > 0");
  use_inversion_ = psi.exact_integrable;
  if (use_inversion_) {
    // The closed-form route assumes psi(x) = exp(deriv_at_zero * x).
    const double probe = psi.value(0.5) - std::exp(0.5 * psi.deriv_at_zero);
    if (std::fabs(probe) > 1e-9 * std::exp(0.5 * psi.deriv_at_zero))
      throw std::invalid_argument("self_correcting: exact_integrable psi is not exponential");
  }
}

double SelfCorrectingSampler::next_event_inversion() {
  // Intensity between events: rate * exp(phi * (rate*t - n)) with constant
  // count n, so the integrated intensity inverts through log1p.
  const double phi = theta_ * psi_.deriv_at_zero;
  const double draw = stream_.exponential(1.0);
  double wait;
  if (phi == 0.0) {
    wait = draw / rate_;
  } else {
    const double z = phi * (rate_ * t_ - n_);
    wait = std::log1p(phi * draw * std::exp(-z)) / (phi * rate_);
  }
  t_ += wait;
  ++n_;
  return t_;
}

double SelfCorrectingSampler::next_event_thinning() {
  while (true) {
    const double x_now = theta_ * (rate_ * t_ - n_);
    const double lambda_now = rate_ * psi_.value(x_now);
    // Adaptive lookahead: shrink the window until the dominating rate stays
    // within 4x the current intensity.
    double window = (lambda_now > 0.0) ? 2.0 / lambda_now : 1.0;
    double bound = psi_.local_bound(x_now, theta_ * (rate_ * (t_ + window) - n_));
    int halvings = 0;
    while (rate_ * bound > 4.0 * lambda_now && halvings < 200) {
      window *= 0.5;
      bound = psi_.local_bound(x_now, theta_ * (rate_ * (t_ + window) - n_));
      ++halvings;
    }
    if (halvings == 200)
      throw BoundViolation("self_correcting: local_bound does not shrink near the current point");
    const double lambda_bar = rate_ * bound;
    const double window_end = t_ + window;
    double s = t_;
    while (true) {
      s += stream_.exponential(lambda_bar);
      if (s >= window_end) {
        t_ = window_end;  // no event in this window; move on
        break;
      }
      const double lambda_s = rate_ * psi_.value(theta_ * (rate_ * s - n_));
      if (lambda_s > lambda_bar * (1.0 + 1e-12))
        throw BoundViolation("self_correcting: psi sample exceeds local_bound");
      if (stream_.uniform() < lambda_s / lambda_bar) {
        t_ = s;
        ++n_;
        return t_;
      }
    }
  }
}

double SelfCorrectingSampler::next_event() {
  return use_inversion_ ? next_event_inversion() : next_event_thinning();
}

PointProcessPath simulate_self_correcting(const PsiSpec& psi, double theta, double rate,
                                          double horizon, RngStream& stream) {
  if (!(horizon > 0.0))
    throw std::invalid_argument("simulate_self_correcting: horizon must be > 0");
  SelfCorrectingSampler sampler(psi, theta, rate, stream);
  PointProcessPath path;
  path.rate = rate;
  path.horizon = horizon;
  path.events.reserve(static_cast<std::size_t>(rate * horizon * 1.2) + 16);
  while (true) {
    const double t = sampler.next_event();
    if (t > horizon) break;
    path.events.push_back(t);
  }
  return path;
}

}  // namespace sclab
