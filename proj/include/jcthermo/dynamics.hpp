#pragma once

// Exact resonant Jaynes-Cummings dynamics on the truncated joint space.
//
// H = (delta_e/2) sigma_z + omega (a^dag a + 1/2) + g (sigma^+ a + sigma^- a^dag).
// On resonance the block {|e,n>, |g,n+1>} has diagonal energy omega (n+1) and
// coupling g sqrt(n+1); |g,0> has energy 0. In the truncated space |e,n_max>
// loses its partner and is left uncoupled.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "jcthermo/core_hilbert.hpp"
#include "jcthermo/ode.hpp"

namespace jcthermo {

/// Which number the symbol Omega_n denotes in the coherence summand.
enum class RabiConvention {
  dressed_splitting, ///< Omega_n = 2 g sqrt(n), the splitting of the n-th dressed pair
  bare_coupling,     ///< Omega_n = g sqrt(n); wrong, kept so validation can prove it fails
};

inline double rabi_splitting(std::size_t n, double g, RabiConvention convention = RabiConvention::dressed_splitting) {
  const double s = g * std::sqrt(static_cast<double>(n));
  return convention == RabiConvention::dressed_splitting ? 2.0 * s : s;
}

namespace detail {

inline void apply_hamiltonian_into(std::span<const complex> psi, std::span<complex> out, std::size_t n_max,
                                   const PhysicalParams& params) {
  const double half_de = 0.5 * params.delta_e();
  const double w = params.omega();
  const double g = params.g();
  for (std::size_t n = 0; n <= n_max; ++n) {
    const double field = w * (static_cast<double>(n) + 0.5);
    out[2 * n] = (field - half_de) * psi[2 * n];
    out[2 * n + 1] = (field + half_de) * psi[2 * n + 1];
  }
  // g sigma^+ a + h.c. couples |e,n> and |g,n+1>
  for (std::size_t n = 0; n < n_max; ++n) {
    const double c = g * std::sqrt(static_cast<double>(n + 1));
    out[2 * n + 1] += c * psi[2 * n + 2];
    out[2 * n + 2] += c * psi[2 * n + 1];
  }
}

} // namespace detail

/// H |psi> for the truncated Hamiltonian.
inline JointPureState apply_hamiltonian(const JointPureState& psi, const PhysicalParams& params) {
  JointPureState out(psi.cutoff());
  detail::apply_hamiltonian_into(psi.amplitudes(), out.amplitudes(), psi.cutoff().n_max, params);
  return out;
}

/// Dense row-major matrix of the truncated Hamiltonian, assembled element by element.
inline std::vector<complex> hamiltonian_matrix(FockCutoff cutoff, const PhysicalParams& params) {
  const std::size_t dim = cutoff.joint_dim();
  std::vector<complex> h(dim * dim, complex{0.0, 0.0});
  auto at = [&](std::size_t r, std::size_t c) -> complex& { return h[r * dim + c]; };
  const double half_de = 0.5 * params.delta_e();
  for (std::size_t n = 0; n <= cutoff.n_max; ++n) {
    const std::size_t gi = JointPureState::index(AtomLevel::ground, n);
    const std::size_t ei = JointPureState::index(AtomLevel::excited, n);
    const double field = params.omega() * (static_cast<double>(n) + 0.5);
    at(gi, gi) = field - half_de;
    at(ei, ei) = field + half_de;
    if (n > 0) {
      // sigma^+ a : |g,n> -> sqrt(n) |e,n-1>
      const std::size_t partner = JointPureState::index(AtomLevel::excited, n - 1);
      const double c = params.g() * std::sqrt(static_cast<double>(n));
      at(partner, gi) = c;
      at(gi, partner) = c;
    }
  }
  return h;
}

inline double energy_expectation(const JointPureState& psi, const PhysicalParams& params) {
  return psi.inner(apply_hamiltonian(psi, params)).real();
}

/// 1 - |<a|b>|^2 / (<a|a><b|b>)
inline double fidelity_deficit(const JointPureState& a, const JointPureState& b) {
  return 1.0 - std::norm(a.inner(b)) / (a.norm_squared() * b.norm_squared());
}

enum class DressedSign { plus, minus };

struct DressedPair {
  std::size_t n;
  JointPureState plus_state;
  JointPureState minus_state;
};

/// (|g,n> +/- |e,n-1>) / sqrt(2), eigenvalue omega n +/- g sqrt(n).
inline JointPureState dressed_state(std::size_t n, DressedSign sign, FockCutoff cutoff) {
  if (n < 1 || n > cutoff.n_max)
    throw DomainError("dressed_state: photon label " + std::to_string(n) + " outside [1, " +
                      std::to_string(cutoff.n_max) + "]");
  JointPureState s(cutoff);
  const double r = 1.0 / std::sqrt(2.0);
  s.amplitude(AtomLevel::ground, n) = r;
  s.amplitude(AtomLevel::excited, n - 1) = sign == DressedSign::plus ? r : -r;
  return s;
}

inline DressedPair dressed_pair(std::size_t n, FockCutoff cutoff) {
  return {n, dressed_state(n, DressedSign::plus, cutoff), dressed_state(n, DressedSign::minus, cutoff)};
}

inline double dressed_energy(std::size_t n, DressedSign sign, const PhysicalParams& params) {
  const double split = params.g() * std::sqrt(static_cast<double>(n));
  return params.omega() * static_cast<double>(n) + (sign == DressedSign::plus ? split : -split);
}

/// e^{-iHt}|psi> from the closed-form 2x2 block solution.
inline JointPureState propagate(const JointPureState& initial, double t, const PhysicalParams& params) {
  if (!(t >= 0.0) || !std::isfinite(t))
    throw DomainError("propagate: time must be finite and >= 0");
  const FockCutoff cutoff = initial.cutoff();
  const std::size_t n_max = cutoff.n_max;
  const double w = params.omega();
  const double g = params.g();
  JointPureState out(cutoff);

  // |g,0>: zero energy.
  out.amplitude(AtomLevel::ground, 0) = initial.amplitude(AtomLevel::ground, 0);

  for (std::size_t n = 0; n < n_max; ++n) {
    const complex e = initial.amplitude(AtomLevel::excited, n);
    const complex gn = initial.amplitude(AtomLevel::ground, n + 1);
    const double k = static_cast<double>(n + 1);
    const double theta = g * std::sqrt(k) * t;
    const complex phase = std::polar(1.0, -std::fmod(w * k * t, 2.0 * std::numbers::pi));
    const double c = std::cos(theta);
    const complex mis{0.0, -std::sin(theta)};
    out.amplitude(AtomLevel::excited, n) = phase * (c * e + mis * gn);
    out.amplitude(AtomLevel::ground, n + 1) = phase * (mis * e + c * gn);
  }

  const double top = w * static_cast<double>(n_max + 1) * t;
  out.amplitude(AtomLevel::excited, n_max) =
      std::polar(1.0, -std::fmod(top, 2.0 * std::numbers::pi)) * initial.amplitude(AtomLevel::excited, n_max);
  return out;
}

/// i d|psi>/dt = H|psi> integrated numerically; independent of the block solution.
inline JointPureState propagate_ode(const JointPureState& initial, double t, const PhysicalParams& params,
                                    const StepControl& control = {}, OdeStats* stats = nullptr) {
  if (!(t >= 0.0) || !std::isfinite(t))
    throw DomainError("propagate_ode: time must be finite and >= 0");
  const FockCutoff cutoff = initial.cutoff();
  std::vector<complex> y(initial.amplitudes().begin(), initial.amplitudes().end());
  auto rhs = [&](double, const std::vector<complex>& psi, std::vector<complex>& dpsi) {
    detail::apply_hamiltonian_into(psi, dpsi, cutoff.n_max, params);
    for (auto& d : dpsi)
      d = complex{d.imag(), -d.real()};
  };
  const OdeStats s = integrate_rk4_adaptive(y, t, rhs, control);
  if (stats)
    *stats = s;
  return JointPureState(cutoff, std::move(y));
}

/// Reduced atom state of pe0 |e,alpha><e,alpha| + (1 - pe0) |g,alpha><g,alpha| after time t.
inline AtomDensity evolve_protocol_mixture(double pe0, const CoherentPrep& prep, double t, const PhysicalParams& params) {
  if (!(pe0 >= 0.0 && pe0 <= 1.0))
    throw DomainError("evolve_protocol_mixture: initial excited population outside [0,1]");
  const auto field = coherent_amplitudes(prep);
  const FockCutoff cutoff = prep.cutoff();
  const WeightedState ensemble[] = {
      {pe0, propagate(JointPureState::product(AtomLevel::excited, field, cutoff), t, params)},
      {1.0 - pe0, propagate(JointPureState::product(AtomLevel::ground, field, cutoff), t, params)},
  };
  return partial_trace_field(ensemble);
}

/// Closed-form n-th term of the field-traced coherence for a pure |level, alpha> start.
///
/// Excited start:
///   i w(n) sqrt(n)/(2 alpha*) e^{-i w t} { sin[(O_{n+1}+O_n) t/2] - sin[(O_{n+1}-O_n) t/2] }
/// Ground start (the same algebra with the blocks shifted by one):
///  -i w(n+1) sqrt(n+1)/(2 alpha*) e^{-i w t} { sin[(O_{n+1}+O_n) t/2] + sin[(O_{n+1}-O_n) t/2] }
inline complex rho01_exact_summand(std::size_t n, double t, const CoherentPrep& prep, const PhysicalParams& params,
                                   AtomLevel initial_level = AtomLevel::excited,
                                   RabiConvention convention = RabiConvention::dressed_splitting) {
  if (prep.cutoff().n_max == 0 || n > prep.cutoff().n_max - 1)
    throw DomainError("rho01_exact_summand: index " + std::to_string(n) + " outside [0, n_max - 1]");
  if (prep.alpha_magnitude() == 0.0)
    return {0.0, 0.0};
  const double g = params.g();
  const double o_next = rabi_splitting(n + 1, g, convention);
  const double o_here = rabi_splitting(n, g, convention);
  const double fast = std::sin(0.5 * (o_next + o_here) * t);
  const double slow = std::sin(0.5 * (o_next - o_here) * t);
  const complex carrier = std::polar(1.0, -std::fmod(params.omega() * t, 2.0 * std::numbers::pi));
  const complex inv_alpha_conj = 1.0 / std::conj(prep.alpha());
  const complex i{0.0, 1.0};
  if (initial_level == AtomLevel::excited) {
    const double amp = poisson_weight(n, prep.n_bar()) * std::sqrt(static_cast<double>(n)) * 0.5;
    return i * amp * inv_alpha_conj * carrier * (fast - slow);
  }
  const double amp = poisson_weight(n + 1, prep.n_bar()) * std::sqrt(static_cast<double>(n + 1)) * 0.5;
  return -i * amp * inv_alpha_conj * carrier * (fast + slow);
}

/// Sum of rho01_exact_summand over n = 0 .. n_max - 1.
inline complex rho01_exact_series(double t, const CoherentPrep& prep, const PhysicalParams& params,
                                  AtomLevel initial_level = AtomLevel::excited,
                                  RabiConvention convention = RabiConvention::dressed_splitting) {
  complex sum{0.0, 0.0};
  for (std::size_t n = 0; n + 1 <= prep.cutoff().n_max; ++n)
    sum += rho01_exact_summand(n, t, prep, params, initial_level, convention);
  return sum;
}

} // namespace jcthermo
