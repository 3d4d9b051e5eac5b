#pragma once

// Value types for the truncated atom (x) single-mode field Hilbert space.
//
// Conventions used throughout the library:
//   * natural units, hbar = k_B = 1; energies and angular frequencies share a unit;
//   * |e> is the +1 eigenstate of sigma_z, H_A = (delta_e / 2) sigma_z;
//   * joint basis ordering (g,0), (e,0), (g,1), (e,1), ... i.e. index 2n + level;
//   * the atomic coherence is rho01 = sum_n conj(psi_{g,n}) psi_{e,n}, the ordering
//     <psi|n,g><n,e|psi> of the field-traced sum; Bloch x + i y = 2 rho01.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "jcthermo/errors.hpp"

namespace jcthermo {

using complex = std::complex<double>;

inline constexpr double kTailTolerance = 1e-12;
inline constexpr double kPositivityTolerance = 1e-12;

enum class AtomLevel : std::size_t { ground = 0, excited = 1 };

inline const char* to_string(AtomLevel level) {
  return level == AtomLevel::excited ? "e" : "g";
}

/// e^{-n_bar} n_bar^n / n!, evaluated in log space.
inline double poisson_weight(std::size_t n, double n_bar) {
  if (!(n_bar >= 0.0) || !std::isfinite(n_bar))
    throw DomainError("poisson_weight: mean photon number must be finite and >= 0");
  if (n_bar == 0.0)
    return n == 0 ? 1.0 : 0.0;
  const double nd = static_cast<double>(n);
  return std::exp(-n_bar + nd * std::log(n_bar) - std::lgamma(nd + 1.0));
}

/// Poisson mass above n_max.
inline double poisson_tail(std::size_t n_max, double n_bar) {
  if (static_cast<double>(n_max) + 1.0 <= n_bar) {
    double head = 0.0;
    for (std::size_t n = 0; n <= n_max; ++n)
      head += poisson_weight(n, n_bar);
    return std::max(0.0, 1.0 - head);
  }
  // Beyond the mode the terms decrease monotonically; sum them directly.
  double tail = 0.0;
  for (std::size_t n = n_max + 1;; ++n) {
    const double w = poisson_weight(n, n_bar);
    tail += w;
    if (w <= tail * 1e-18 || w == 0.0)
      break;
  }
  return tail;
}

/// Smallest n_max whose Poisson tail is below `tolerance`.
inline std::size_t required_n_max(double n_bar, double tolerance = kTailTolerance) {
  std::size_t n_max = static_cast<std::size_t>(std::floor(n_bar));
  while (poisson_tail(n_max, n_bar) >= tolerance)
    ++n_max;
  return n_max;
}

/// Highest retained Fock index.
struct FockCutoff {
  std::size_t n_max = 0;

  /// ceil(n_bar + 12 sqrt(n_bar) + 20).
  static FockCutoff for_mean(double n_bar) {
    if (!(n_bar >= 0.0) || !std::isfinite(n_bar))
      throw DomainError("FockCutoff: mean photon number must be finite and >= 0");
    return {static_cast<std::size_t>(std::ceil(n_bar + 12.0 * std::sqrt(n_bar) + 20.0))};
  }

  std::size_t fock_dim() const noexcept { return n_max + 1; }
  std::size_t joint_dim() const noexcept { return 2 * (n_max + 1); }

  friend bool operator==(const FockCutoff&, const FockCutoff&) = default;
};

/// Coherent field |alpha>, alpha = |alpha| e^{i phi}.
class CoherentPrep {
public:
  static CoherentPrep from_alpha(double alpha_magnitude, double phi, std::optional<FockCutoff> cutoff = {}) {
    if (!(alpha_magnitude >= 0.0) || !std::isfinite(alpha_magnitude))
      throw DomainError("CoherentPrep: |alpha| must be finite and >= 0");
    if (!std::isfinite(phi))
      throw DomainError("CoherentPrep: phase must be finite");
    CoherentPrep prep;
    prep.alpha_magnitude_ = alpha_magnitude;
    prep.n_bar_ = alpha_magnitude * alpha_magnitude;
    prep.phi_ = reduce_phase(phi);
    prep.cutoff_ = cutoff.value_or(FockCutoff::for_mean(prep.n_bar_));
    return prep;
  }

  static CoherentPrep from_n_bar(double n_bar, double phi, std::optional<FockCutoff> cutoff = {}) {
    if (!(n_bar >= 0.0) || !std::isfinite(n_bar))
      throw DomainError("CoherentPrep: mean photon number must be finite and >= 0");
    return from_alpha(std::sqrt(n_bar), phi, cutoff);
  }

  double alpha_magnitude() const noexcept { return alpha_magnitude_; }
  double phi() const noexcept { return phi_; }
  double n_bar() const noexcept { return n_bar_; }
  FockCutoff cutoff() const noexcept { return cutoff_; }
  complex alpha() const { return std::polar(alpha_magnitude_, phi_); }

  /// Phase reduced to [0, 2 pi).
  static double reduce_phase(double phi) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double r = std::fmod(phi, two_pi);
    if (r < 0.0)
      r += two_pi;
    if (r >= two_pi)
      r = 0.0;
    return r;
  }

private:
  CoherentPrep() = default;

  double alpha_magnitude_ = 0.0;
  double phi_ = 0.0;
  double n_bar_ = 0.0;
  FockCutoff cutoff_{};
};

/// Fock amplitudes c_n = e^{-n_bar/2} alpha^n / sqrt(n!) for n <= n_max. Not renormalized.
inline std::vector<complex> coherent_amplitudes(const CoherentPrep& prep, double tail_tolerance = kTailTolerance) {
  const std::size_t n_max = prep.cutoff().n_max;
  const double n_bar = prep.n_bar();
  if (n_bar > 0.0 && poisson_tail(n_max, n_bar) >= tail_tolerance) {
    const std::size_t needed = required_n_max(n_bar, tail_tolerance);
    throw InsufficientTruncation("insufficient truncation: n_max = " + std::to_string(n_max) +
                                     " drops too much Poisson mass, need n_max >= " + std::to_string(needed),
                                 needed);
  }
  std::vector<complex> c(n_max + 1, complex{0.0, 0.0});
  if (n_bar == 0.0) {
    c[0] = 1.0;
    return c;
  }
  const double log_mag = std::log(prep.alpha_magnitude());
  for (std::size_t n = 0; n <= n_max; ++n) {
    const double nd = static_cast<double>(n);
    const double mag = std::exp(-0.5 * n_bar + nd * log_mag - 0.5 * std::lgamma(nd + 1.0));
    c[n] = std::polar(mag, std::fmod(nd * prep.phi(), 2.0 * std::numbers::pi));
  }
  return c;
}

/// Amplitude vector over the joint basis, index 2n + level.
class JointPureState {
public:
  explicit JointPureState(FockCutoff cutoff) : cutoff_(cutoff), amps_(cutoff.joint_dim(), complex{0.0, 0.0}) {}

  JointPureState(FockCutoff cutoff, std::vector<complex> amplitudes) : cutoff_(cutoff), amps_(std::move(amplitudes)) {
    if (amps_.size() != cutoff_.joint_dim())
      throw DimensionError("JointPureState: amplitude vector has " + std::to_string(amps_.size()) +
                           " entries, cutoff requires " + std::to_string(cutoff_.joint_dim()));
  }

  static JointPureState basis(FockCutoff cutoff, AtomLevel level, std::size_t n) {
    if (n > cutoff.n_max)
      throw DomainError("JointPureState::basis: Fock index above cutoff");
    JointPureState s(cutoff);
    s.amps_[index(level, n)] = 1.0;
    return s;
  }

  /// |level> (x) sum_n c_n |n>.
  static JointPureState product(AtomLevel level, std::span<const complex> field, FockCutoff cutoff) {
    if (field.size() != cutoff.fock_dim())
      throw DimensionError("JointPureState::product: field vector does not match cutoff");
    JointPureState s(cutoff);
    for (std::size_t n = 0; n < field.size(); ++n)
      s.amps_[index(level, n)] = field[n];
    return s;
  }

  /// |level> (x) |alpha>, truncated at the prep's cutoff.
  static JointPureState atom_times_coherent(AtomLevel level, const CoherentPrep& prep) {
    const auto c = coherent_amplitudes(prep);
    return product(level, c, prep.cutoff());
  }

  static constexpr std::size_t index(AtomLevel level, std::size_t n) noexcept {
    return 2 * n + static_cast<std::size_t>(level);
  }

  FockCutoff cutoff() const noexcept { return cutoff_; }
  std::size_t size() const noexcept { return amps_.size(); }

  complex amplitude(AtomLevel level, std::size_t n) const { return amps_.at(index(level, n)); }
  complex& amplitude(AtomLevel level, std::size_t n) { return amps_.at(index(level, n)); }

  std::span<const complex> amplitudes() const noexcept { return amps_; }
  std::span<complex> amplitudes() noexcept { return amps_; }

  double norm_squared() const {
    double s = 0.0;
    for (const auto& a : amps_)
      s += std::norm(a);
    return s;
  }

  /// <this|other>
  complex inner(const JointPureState& other) const {
    if (!(cutoff_ == other.cutoff_))
      throw DimensionError("JointPureState::inner: cutoff mismatch");
    complex s{0.0, 0.0};
    for (std::size_t i = 0; i < amps_.size(); ++i)
      s += std::conj(amps_[i]) * other.amps_[i];
    return s;
  }

private:
  FockCutoff cutoff_;
  std::vector<complex> amps_;
};

/// delta_e (H_A splitting), g (real coupling), omega (mode frequency). Resonant: omega == delta_e.
class PhysicalParams {
public:
  static PhysicalParams resonant(double delta_e, double g_coupling) { return make(delta_e, g_coupling, delta_e); }

  static PhysicalParams make(double delta_e, double g_coupling, double omega) {
    if (!(delta_e > 0.0) || !std::isfinite(delta_e))
      throw DomainError("PhysicalParams: delta_e must be positive");
    if (!(g_coupling > 0.0) || !std::isfinite(g_coupling))
      throw DomainError("PhysicalParams: coupling g must be positive");
    if (!(omega > 0.0) || !std::isfinite(omega))
      throw DomainError("PhysicalParams: omega must be positive");
    if (std::abs(omega - delta_e) > 1e-12 * delta_e)
      throw DomainError("PhysicalParams: off-resonant parameters (omega != delta_e) are not supported");
    PhysicalParams p;
    p.delta_e_ = delta_e;
    p.g_ = g_coupling;
    p.omega_ = omega;
    return p;
  }

  double delta_e() const noexcept { return delta_e_; }
  double g() const noexcept { return g_; }
  double omega() const noexcept { return omega_; }

private:
  PhysicalParams() = default;

  double delta_e_ = 1.0;
  double g_ = 1.0;
  double omega_ = 1.0;
};

struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

/// Reduced 2x2 atom state stored by its independent elements.
class AtomDensity {
public:
  /// Throws DomainError if the populations leave [0,1] or positivity fails beyond 1e-12.
  static AtomDensity make(double rho11, complex rho01) {
    if (!std::isfinite(rho11) || !std::isfinite(rho01.real()) || !std::isfinite(rho01.imag()))
      throw DomainError("AtomDensity: non-finite element");
    if (rho11 < -kPositivityTolerance || rho11 > 1.0 + kPositivityTolerance)
      throw DomainError("AtomDensity: excited population outside [0,1]");
    rho11 = std::clamp(rho11, 0.0, 1.0);
    const double det = rho11 * (1.0 - rho11) - std::norm(rho01);
    if (det < -kPositivityTolerance)
      throw DomainError("AtomDensity: not positive semidefinite (det = " + std::to_string(det) + ")");
    AtomDensity rho;
    rho.rho11_ = rho11;
    rho.rho01_ = rho01;
    return rho;
  }

  static AtomDensity diagonal(double pe) { return make(pe, complex{0.0, 0.0}); }

  static AtomDensity from_bloch(const BlochVector& v) {
    return make(0.5 * (1.0 + v.z), complex{0.5 * v.x, 0.5 * v.y});
  }

  double rho11() const noexcept { return rho11_; }
  double rho00() const noexcept { return 1.0 - rho11_; }
  complex rho01() const noexcept { return rho01_; }

  /// rho11 (1 - rho11) - |rho01|^2
  double determinant() const { return rho11_ * (1.0 - rho11_) - std::norm(rho01_); }

  /// (smaller, larger) eigenvalue.
  std::pair<double, double> eigenvalues() const {
    const double half_gap = std::hypot(rho11_ - 0.5, std::abs(rho01_));
    return {0.5 - half_gap, 0.5 + half_gap};
  }

  /// Matrix in the (g, e) basis; the (e, g) entry is rho01.
  std::array<std::array<complex, 2>, 2> matrix() const {
    return {{{complex{rho00(), 0.0}, std::conj(rho01_)}, {rho01_, complex{rho11_, 0.0}}}};
  }

private:
  AtomDensity() = default;

  double rho11_ = 0.0;
  complex rho01_{0.0, 0.0};
};

inline BlochVector bloch_vector(const AtomDensity& rho) {
  return {2.0 * rho.rho01().real(), 2.0 * rho.rho01().imag(), 2.0 * rho.rho11() - 1.0};
}

/// 1/2 ||rho - sigma||_1
inline double trace_distance(const AtomDensity& a, const AtomDensity& b) {
  return std::hypot(a.rho11() - b.rho11(), std::abs(a.rho01() - b.rho01()));
}

/// Gibbs state of H_A at inverse temperature beta (beta may be +inf).
inline AtomDensity thermal_atom(double beta, double delta_e) {
  if (std::isnan(beta) || beta < 0.0)
    throw DomainError("thermal_atom: inverse temperature must be >= 0 (population inversion is not a thermal input)");
  if (!(delta_e > 0.0) || !std::isfinite(delta_e))
    throw DomainError("thermal_atom: level splitting must be positive");
  return AtomDensity::diagonal(1.0 / (1.0 + std::exp(beta * delta_e)));
}

struct WeightedState {
  double weight;
  JointPureState state;
};

/// Field-traced atom state of a pure-state ensemble.
inline AtomDensity partial_trace_field(std::span<const WeightedState> ensemble) {
  if (ensemble.empty())
    throw DomainError("partial_trace_field: empty ensemble");
  const FockCutoff cutoff = ensemble.front().state.cutoff();
  double total_weight = 0.0;
  double rho11 = 0.0;
  complex rho01{0.0, 0.0};
  for (const auto& [weight, state] : ensemble) {
    if (!(state.cutoff() == cutoff))
      throw DimensionError("partial_trace_field: ensemble members have different cutoffs");
    if (!(weight >= 0.0))
      throw DomainError("partial_trace_field: negative weight");
    total_weight += weight;
    double pe = 0.0;
    complex coh{0.0, 0.0};
    for (std::size_t n = 0; n <= cutoff.n_max; ++n) {
      const complex e = state.amplitude(AtomLevel::excited, n);
      const complex g = state.amplitude(AtomLevel::ground, n);
      pe += std::norm(e);
      coh += std::conj(g) * e;
    }
    rho11 += weight * pe;
    rho01 += weight * coh;
  }
  if (std::abs(total_weight - 1.0) > 1e-12)
    throw DomainError("partial_trace_field: weights sum to " + std::to_string(total_weight) + ", expected 1");
  return AtomDensity::make(rho11, rho01);
}

inline AtomDensity partial_trace_field(const JointPureState& state) {
  const WeightedState single{1.0, state};
  return partial_trace_field(std::span<const WeightedState>(&single, 1));
}

} // namespace jcthermo
