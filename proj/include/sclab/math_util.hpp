#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace sclab {

/// Standard normal CDF.
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// Standard normal density.
inline double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
}

/// Inverse of the standard normal CDF (Wichura's PPND16 rational
/// approximations, accurate to ~1e-16 over (0,1)).
double normal_quantile(double p);

/// Upper-a quantile z_a of the standard normal law: P(Z > z_a) = a.
inline double upper_quantile(double a) {
  if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("upper_quantile: a must be in (0,1)");
  return -normal_quantile(a);
}

/// Gauss-Legendre nodes and weights on [-1, 1]. Cached per order.
const std::vector<std::pair<double, double>>& gauss_legendre(int order);

/// Integrate f over [a, b] with a fixed-order Gauss-Legendre rule.
template <typename F>
double gauss_legendre_integrate(F&& f, double a, double b, int order) {
  const auto& rule = gauss_legendre(order);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double acc = 0.0;
  for (const auto& [x, w] : rule) acc += w * f(mid + half * x);
  return half * acc;
}

}  // namespace sclab
