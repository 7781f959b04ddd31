#pragma once

#include <cmath>
#include <stdexcept>

namespace varcs {

// Chernoff penalty kernels. All three are nonnegative, vanish at zero and
// behave like lambda^2/2 near zero. Direct evaluation of -log(1-x)-x or
// expm1(x)-x loses relative precision for tiny x, so both switch to their
// power series below 1e-4.

inline constexpr double psi_series_cutoff = 1e-4;

// psi_E(lambda) = -log(1-lambda) - lambda = sum_{k>=2} lambda^k / k,
// finite on [0,1), diverging as lambda -> 1.
inline double psi_e(double lambda) {
  if (!(lambda >= 0.0) || lambda >= 1.0) {
    throw std::domain_error("psi_e: lambda must lie in [0,1)");
  }
  if (lambda < psi_series_cutoff) {
    const double l2 = lambda * lambda;
    return l2 * (1.0 / 2 + lambda * (1.0 / 3 + lambda * (1.0 / 4 + lambda * (1.0 / 5 + lambda / 6))));
  }
  return -std::log1p(-lambda) - lambda;
}

// psi_P(lambda) = exp(lambda) - lambda - 1 = sum_{k>=2} lambda^k / k!.
inline double psi_p(double lambda) {
  if (!(lambda >= 0.0)) {
    throw std::domain_error("psi_p: lambda must be nonnegative");
  }
  if (lambda < psi_series_cutoff) {
    const double l2 = lambda * lambda;
    return l2 * (1.0 / 2 + lambda * (1.0 / 6 + lambda * (1.0 / 24 + lambda * (1.0 / 120 + lambda / 720))));
  }
  return std::expm1(lambda) - lambda;
}

// psi_N(lambda) = lambda^2 / 2, the Gaussian reference kernel.
inline double psi_n(double lambda) { return 0.5 * lambda * lambda; }

}  // namespace varcs
