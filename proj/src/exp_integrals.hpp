#pragma once

#include <cmath>

namespace xopt::detail {

/// int_0^t exp(-mu s) ds, continuous through mu = 0 (and valid for mu < 0).
inline double exp_integral(double mu, double t) {
  const double x = mu * t;
  if (std::abs(x) < 1e-8) return t * (1.0 - 0.5 * x + x * x / 6.0);
  return -std::expm1(-x) / mu;
}

/// int_0^t exp(-lambda u) (1 - exp(-c (t - u))) du.
///
/// Integrating a lag-covariance kernel exp(-c |s - u|) against an
/// exponential instantaneous covariance reduces to sums of this term.
inline double decay_kernel(double lambda, double c, double t) {
  return exp_integral(lambda, t) - std::exp(-c * t) * exp_integral(lambda - c, t);
}

}  // namespace xopt::detail
