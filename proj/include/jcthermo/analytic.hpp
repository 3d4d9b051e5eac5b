#pragma once

// Closed-form high-photon-number results for the coherent-state Jaynes-Cummings
// atom, the spin temperature map, and the cooling/heating bounds.
//
// All times are in the same unit as 1/g; temperatures are returned in energy
// units (k_B = 1), i.e. multiples of delta_e when delta_e = 1.

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <string>

#include "jcthermo/core_hilbert.hpp"
#include "jcthermo/errors.hpp"
#include "jcthermo/lambert_w.hpp"

namespace jcthermo {

struct Timescales {
  double tau_c; ///< sqrt(2)/g
  double tau_r; ///< 2 pi sqrt(n_bar)/g
};

inline Timescales timescales(double g, double n_bar) {
  if (!(g > 0.0) || !(n_bar > 0.0))
    throw DomainError("timescales: g and n_bar must be positive");
  return {std::numbers::sqrt2 / g, 2.0 * std::numbers::pi * std::sqrt(n_bar) / g};
}

/// Where the high-photon formulas are meant to hold: after the collapse
/// (t >= 3 tau_c) and no later than half the revival time.
struct Validity {
  bool collapse_completed = false;
  bool within_half_revival = false;

  bool in_window() const noexcept { return collapse_completed && within_half_revival; }
};

inline Validity validity_at(double t, double g, double n_bar) {
  const Timescales ts = timescales(g, n_bar);
  return {t >= 3.0 * ts.tau_c, t <= 0.5 * ts.tau_r};
}

template <typename T>
struct Windowed {
  T value;
  Validity validity;
};

/// Excited-state population during the collapse,
/// 1/2 +/- 1/2 cos(2 g sqrt(m) t) exp(-t^2/tau_c^2).
/// The carrier uses the mean block index actually populated: m = n_bar + 1 for an
/// excited start (blocks {|e,n>,|g,n+1>}), m = n_bar for a ground start.
inline double rho11_analytic(double t, double g, double n_bar, AtomLevel initial_level) {
  if (!(t >= 0.0))
    throw DomainError("rho11_analytic: time must be >= 0");
  if (!(n_bar >= 1.0))
    throw DomainError("rho11_analytic: requires n_bar >= 1");
  const double tau_c = timescales(g, n_bar).tau_c;
  const bool excited = initial_level == AtomLevel::excited;
  const double carrier = std::cos(2.0 * g * std::sqrt(excited ? n_bar + 1.0 : n_bar) * t);
  const double osc = 0.5 * carrier * std::exp(-(t * t) / (tau_c * tau_c));
  return excited ? 0.5 + osc : 0.5 - osc;
}

enum class Rho01Form {
  derived, ///< -(i/2) e^{-i(omega t - phi)} sin(g t / 2 sqrt(n_bar)); leading order of the exact summand series
  conjugate_phase, ///< -(i/2) e^{+i(omega t + phi)} sin(g t / 2 sqrt(n_bar)); the conjugate-phase variant, kept for comparison
};

/// Post-collapse coherence, identical for either initial atomic level.
inline Windowed<complex> rho01_analytic(double t, double g, double n_bar, double omega, double phi,
                                        Rho01Form form = Rho01Form::derived) {
  if (!(t >= 0.0))
    throw DomainError("rho01_analytic: time must be >= 0");
  const double s = std::sin(g * t / (2.0 * std::sqrt(n_bar)));
  const double two_pi = 2.0 * std::numbers::pi;
  const double phase = form == Rho01Form::derived ? std::fmod(phi - omega * t, two_pi) : std::fmod(omega * t + phi, two_pi);
  const complex value = complex{0.0, -0.5 * s} * std::polar(1.0, phase);
  return {value, validity_at(t, g, n_bar)};
}

/// sqrt(n) ~ sqrt(n_bar) + (n - n_bar) / (2 sqrt(n_bar))
inline double sqrt_n_expansion(double n, double n_bar) {
  if (!(n_bar > 0.0))
    throw DomainError("sqrt_n_expansion: n_bar must be positive");
  const double r = std::sqrt(n_bar);
  return r + (n - n_bar) / (2.0 * r);
}

enum class ExpansionOrder { leading, next };

/// Approximation of Omega_{n+1} - Omega_n = 2 g (sqrt(n+1) - sqrt(n)).
inline double rabi_difference_approx(double n, double n_bar, double g, ExpansionOrder order) {
  if (!(n_bar > 0.0))
    throw DomainError("rabi_difference_approx: n_bar must be positive");
  const double r = std::sqrt(n_bar);
  if (order == ExpansionOrder::leading)
    return 2.0 * g / (2.0 * r);
  const double r3 = r * r * r;
  return 2.0 * g * (1.0 / (2.0 * r) - 1.0 / (8.0 * r3) - (n - n_bar) / (4.0 * r3));
}

/// Smaller eigenvalue of the post-collapse state, 1/2 (1 - sin(g t / 2 sqrt(n_bar))).
inline Windowed<double> pe_after_pulse_analytic(double t, double g, double n_bar) {
  if (!(t >= 0.0))
    throw DomainError("pe_after_pulse_analytic: time must be >= 0");
  const double s = std::sin(g * t / (2.0 * std::sqrt(n_bar)));
  return {0.5 * (1.0 - s), validity_at(t, g, n_bar)};
}

/// Spin temperature of a diagonal two-level state.
struct TemperatureReading {
  double pe = 0.0;
  double temperature = 0.0; ///< energy units; +inf at pe = 1/2, negative when inverted
  bool inverted = false;    ///< pe > 1/2
};

inline TemperatureReading temperature_from_pe(double pe, double delta_e) {
  if (std::isnan(pe) || pe < 0.0 || pe > 1.0)
    throw DomainError("temperature_from_pe: population outside [0,1]");
  if (!(delta_e > 0.0))
    throw DomainError("temperature_from_pe: delta_e must be positive");
  TemperatureReading r;
  r.pe = pe;
  r.inverted = pe > 0.5;
  if (pe == 0.0) {
    r.temperature = 0.0;
  } else if (pe == 0.5) {
    r.temperature = std::numeric_limits<double>::infinity();
  } else if (pe == 1.0) {
    r.temperature = -0.0;
  } else {
    const double log_ratio = std::log(pe) - std::log1p(-pe);
    r.temperature = -delta_e / log_ratio;
  }
  return r;
}

/// Excited population at half the revival time, pi^2 / (32 n_bar).
inline double pe_half_revival(double n_bar) {
  if (!(n_bar >= 4.0))
    throw DomainError("pe_half_revival: requires n_bar >= 4");
  return std::numbers::pi * std::numbers::pi / (32.0 * n_bar);
}

inline TemperatureReading t_min(double n_bar, double delta_e) {
  return temperature_from_pe(pe_half_revival(n_bar), delta_e);
}

struct CollapseTime {
  double time;             ///< root of k exp(-t^2/tau_c^2) = sin(g t / 2 sqrt(n_bar))
  double linearized_time;  ///< sqrt(W(4 k^2 n_bar)) / g
  double residual;         ///< defining equation evaluated at `time`
};

/// Earliest interaction time at which the residual collapse oscillation is
/// `safety_factor` times smaller than the pulse-induced population difference.
inline CollapseTime collapse_condition_time(double n_bar, double g, double safety_factor = 10.0) {
  if (!(n_bar >= 4.0))
    throw DomainError("collapse_condition_time: requires n_bar >= 4");
  if (!(g > 0.0))
    throw DomainError("collapse_condition_time: g must be positive");
  if (!(safety_factor > 0.0) || !std::isfinite(safety_factor))
    throw DomainError("collapse_condition_time: safety factor must be positive and finite");
  const Timescales ts = timescales(g, n_bar);
  const double rn = std::sqrt(n_bar);
  auto f = [&](double t) {
    return safety_factor * std::exp(-(t * t) / (ts.tau_c * ts.tau_c)) - std::sin(g * t / (2.0 * rn));
  };

  const double t_hi = 0.5 * ts.tau_r;
  const double scan = ts.tau_c / 16.0;
  double lo = 0.0;
  double hi = -1.0;
  for (double t = scan; t < t_hi + scan; t += scan) {
    const double probe = std::min(t, t_hi);
    if (f(probe) <= 0.0) {
      hi = probe;
      break;
    }
    lo = probe;
  }
  if (hi < 0.0) {
    std::ostringstream msg;
    msg << "collapse_condition_time: no sign change of the collapse condition on [0, " << t_hi << "]";
    throw DomainError(msg.str());
  }

  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  const double root = std::abs(f(lo)) < std::abs(f(hi)) ? lo : hi;
  const double lin = std::sqrt(lambert_w0(4.0 * safety_factor * safety_factor * n_bar)) / g;
  return {root, lin, f(root)};
}

enum class TmaxVariant {
  paper_formula, ///< delta_e / ln[(4 sqrt(n_bar) + sqrt(W(400 n_bar))) / (4 sqrt(n_bar) - sqrt(W(400 n_bar)))]
  numeric,       ///< post-pulse population at the bisected collapse time, through the temperature map
};

inline TemperatureReading t_max(double n_bar, double delta_e, TmaxVariant variant) {
  if (!(n_bar >= 4.0))
    throw DomainError("t_max: requires n_bar >= 4");
  if (variant == TmaxVariant::paper_formula) {
    const double a = 4.0 * std::sqrt(n_bar);
    const double b = std::sqrt(lambert_w0(400.0 * n_bar));
    if (!(a > b))
      throw DomainError("t_max: logarithm argument is not positive");
    TemperatureReading r;
    r.temperature = delta_e / std::log((a + b) / (a - b));
    // the population that this temperature encodes
    r.pe = 1.0 / (1.0 + std::exp(delta_e / r.temperature));
    return r;
  }
  // The result depends on g t only, so the unit coupling is used.
  const CollapseTime ct = collapse_condition_time(n_bar, 1.0);
  return temperature_from_pe(pe_after_pulse_analytic(ct.time, 1.0, n_bar).value, delta_e);
}

/// g = d sqrt(omega / (hbar eps0 V))
inline double coupling_from_dipole(double dipole, double omega, double volume, double permittivity, double hbar) {
  if (!(dipole > 0.0) || !(omega > 0.0) || !(volume > 0.0) || !(permittivity > 0.0) || !(hbar > 0.0))
    throw DomainError("coupling_from_dipole: all inputs must be positive");
  return dipole * std::sqrt(omega / (hbar * permittivity * volume));
}

} // namespace jcthermo
