#pragma once

// Classical fourth-order Runge-Kutta with step-doubling error control.
//
// A step of size h is compared with two steps of size h/2; the difference
// estimates the local error. The step is halved until the estimate meets the
// tolerance, and doubled again after comfortably small errors. The accepted
// value is the Richardson-extrapolated two-half-step result.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <sstream>
#include <vector>

#include "jcthermo/errors.hpp"

namespace jcthermo {

struct StepControl {
  double local_tolerance = 1e-10;
  double initial_step = 1e-3;
  double min_step = 1e-14;
  std::size_t max_steps = 100'000'000;
};

struct OdeStats {
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
};

namespace detail {

template <typename Rhs>
void rk4_step(const std::vector<std::complex<double>>& y, double t, double h, Rhs& rhs,
              std::vector<std::complex<double>>& out, std::vector<std::complex<double>> (&work)[5]) {
  auto& [k1, k2, k3, k4, tmp] = work;
  const std::size_t n = y.size();
  rhs(t, y, k1);
  for (std::size_t i = 0; i < n; ++i)
    tmp[i] = y[i] + 0.5 * h * k1[i];
  rhs(t + 0.5 * h, tmp, k2);
  for (std::size_t i = 0; i < n; ++i)
    tmp[i] = y[i] + 0.5 * h * k2[i];
  rhs(t + 0.5 * h, tmp, k3);
  for (std::size_t i = 0; i < n; ++i)
    tmp[i] = y[i] + h * k3[i];
  rhs(t + h, tmp, k4);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = y[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

} // namespace detail

/// Integrates dy/dt = rhs(t, y) from t = 0 to t_end in place.
/// `rhs(t, y, dydt)` must write into a pre-sized `dydt`.
template <typename Rhs>
OdeStats integrate_rk4_adaptive(std::vector<std::complex<double>>& y, double t_end, Rhs rhs,
                                const StepControl& control = {}) {
  OdeStats stats;
  if (!(t_end >= 0.0) || !std::isfinite(t_end))
    throw DomainError("integrate_rk4_adaptive: end time must be finite and >= 0");
  if (t_end == 0.0)
    return stats;

  const std::size_t n = y.size();
  std::vector<std::complex<double>> work[5];
  for (auto& w : work)
    w.assign(n, {});
  std::vector<std::complex<double>> full(n), half(n), both(n);

  double t = 0.0;
  double h = std::min(control.initial_step, t_end);
  while (t < t_end) {
    if (stats.accepted_steps + stats.rejected_steps >= control.max_steps) {
      std::ostringstream msg;
      msg << "integrate_rk4_adaptive: step budget exhausted at t = " << t;
      throw IntegrationFailure(msg.str(), t);
    }
    const bool last = t + h >= t_end;
    const double step = last ? t_end - t : h;

    detail::rk4_step(y, t, step, rhs, full, work);
    detail::rk4_step(y, t, 0.5 * step, rhs, half, work);
    detail::rk4_step(half, t + 0.5 * step, 0.5 * step, rhs, both, work);

    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      err = std::max(err, std::abs(both[i] - full[i]));
    err /= 15.0;

    if (err > control.local_tolerance) {
      ++stats.rejected_steps;
      h = 0.5 * step;
      if (h < control.min_step) {
        std::ostringstream msg;
        msg << "integrate_rk4_adaptive: step size underflow (h = " << h << ") at t = " << t;
        throw IntegrationFailure(msg.str(), t);
      }
      continue;
    }

    for (std::size_t i = 0; i < n; ++i)
      y[i] = both[i] + (both[i] - full[i]) / 15.0;
    t = last ? t_end : t + step;
    ++stats.accepted_steps;
    if (err < control.local_tolerance / 64.0)
      h = 2.0 * step;
    else
      h = step;
  }
  return stats;
}

} // namespace jcthermo
