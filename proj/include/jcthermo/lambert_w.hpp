#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "jcthermo/errors.hpp"

namespace jcthermo {

/// Principal branch W0 of the inverse of x e^x, for x >= 0.
///
/// Starts from ln(1 + x) and refines with Halley steps
///   w <- w - f / (e^w (w + 1) - (w + 2) f / (2 w + 2)),   f = w e^w - x.
/// Throws ConvergenceFailure after `max_iterations` without convergence.
inline double lambert_w0(double x, int max_iterations = 100) {
  if (std::isnan(x) || x < 0.0)
    throw DomainError("lambert_w0: argument must be >= 0");
  if (x == 0.0)
    return 0.0;
  if (std::isinf(x))
    return x;

  constexpr double eps = std::numeric_limits<double>::epsilon();
  double w = std::log1p(x);
  for (int it = 0; it < max_iterations; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    const double step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
    w -= step;
    if (std::abs(step) <= 4.0 * eps * std::max(1.0, std::abs(w)))
      return w;
  }
  throw ConvergenceFailure("lambert_w0: no convergence after " + std::to_string(max_iterations) +
                           " Halley iterations for x = " + std::to_string(x));
}

} // namespace jcthermo
