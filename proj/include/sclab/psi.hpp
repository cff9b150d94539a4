#pragma once

#include <functional>
#include <string>

namespace sclab {

/// Shape function of the self-correcting intensity: the process jumps with
/// rate S* psi(theta * (S* t - X_t)). Requirements: psi(0) = 1, psi > 0 on
/// the queried range, and a positive derivative at 0 (supplied, not
/// differenced, because it enters thresholds through gamma = S* psi'(0)).
struct PsiSpec {
  std::string name;
  std::function<double(double)> value;
  double deriv_at_zero = 1.0;
  /// Upper bound for psi on an argument interval [lo, hi]; must dominate
  /// every sampled value there (used by the thinning sampler).
  std::function<double(double, double)> local_bound;
  /// True iff value(x) == exp(deriv_at_zero * x), in which case the
  /// integrated intensity inverts in closed form and the compensator
  /// integral of the likelihood has a closed form as well.
  bool exact_integrable = false;
};

/// psi(x) = exp(scale * x); exactly integrable.
PsiSpec make_exp_psi(double scale = 1.0);

/// psi(x) = 2 / (1 + exp(-2 scale x)); bounded in (0, 2), generic path.
PsiSpec make_logistic_psi(double scale = 1.0);

/// psi(x) = max(1 + slope * x, floor_value) with floor_value in (0, 1).
PsiSpec make_linear_psi(double slope = 1.0, double floor_value = 1e-3);

/// Same shape function with the closed-form flag cleared, forcing the
/// thinning sampler and quadrature likelihood (method-vs-method checks).
PsiSpec psi_without_closed_form(PsiSpec psi);

/// Load a shape function from a flat key=value file:
///   form  = exp | logistic | linear
///   scale = <psi'(0)>           (default 1.0)
///   floor = <clip value>        (linear only, default 1e-3)
///   exact = auto | false        (false forces the generic path)
PsiSpec psi_from_file(const std::string& path);

/// Resolve a --psi selector: "exp" or a path to a spec file.
PsiSpec psi_from_selector(const std::string& selector);

}  // namespace sclab
