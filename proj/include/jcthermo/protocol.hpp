#pragma once

// Thermal atom + coherent cavity -> interaction for time t -> trace out the
// field -> pi/2 pulse -> diagonal state -> spin temperature.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "jcthermo/analytic.hpp"
#include "jcthermo/core_hilbert.hpp"
#include "jcthermo/dynamics.hpp"

namespace jcthermo {

/// Rotation of the Bloch sphere by +pi/2 (right-handed) about the equatorial
/// axis n = (cos a, sin a, 0). For v perpendicular to n the image is n x v, so
/// an equatorial vector at azimuth a - pi/2 lands on -z.
inline AtomDensity pi_half_pulse(const AtomDensity& rho, double axis_angle) {
  const BlochVector v = bloch_vector(rho);
  const double nx = std::cos(axis_angle);
  const double ny = std::sin(axis_angle);
  const double along = nx * v.x + ny * v.y;
  // v' = n x v + n (n . v)
  const BlochVector out{ny * v.z + nx * along, -nx * v.z + ny * along, nx * v.y - ny * v.x};
  return AtomDensity::from_bloch(out);
}

/// 2x2 unitary in the (g, e) basis with U M U^dag == pi_half_pulse on AtomDensity::matrix().
///
/// M = (I + x X + y Y + z Z)/2 with X = [[0,1],[1,0]], Y = [[0,-i],[i,0]],
/// Z = diag(-1, 1); this triple is left-handed (XY = -iZ), hence the + sign:
/// U = exp(+i pi/4 (n_x X + n_y Y)).
inline std::array<std::array<complex, 2>, 2> pi_half_pulse_unitary(double axis_angle) {
  const double r = 1.0 / std::numbers::sqrt2;
  const complex i{0.0, 1.0};
  const complex n_minus = std::polar(1.0, -axis_angle);
  const complex n_plus = std::polar(1.0, axis_angle);
  return {{{complex{r, 0.0}, i * r * n_minus}, {i * r * n_plus, complex{r, 0.0}}}};
}

/// Pulse axis that maps the expected post-collapse coherence at lab time t onto -z.
inline double cooling_axis(double t, const PhysicalParams& params, const CoherentPrep& prep) {
  return CoherentPrep::reduce_phase(prep.phi() - std::fmod(params.omega() * t, 2.0 * std::numbers::pi));
}

enum class PulseMode {
  diagonalize,      ///< reading = smaller eigenvalue, post-pulse state = diag(smaller eigenvalue)
  explicit_unitary, ///< apply pi_half_pulse about cooling_axis, reading = post-pulse population
};

struct InitialPe {
  double pe;
};
struct InitialBeta {
  double beta;
};
using InitialAtom = std::variant<InitialPe, InitialBeta>;

struct ProtocolNumerics {
  double pulse_residual_tolerance = 1e-6;
};

struct ProtocolConfig {
  PhysicalParams physical;
  CoherentPrep prep;
  InitialAtom initial;
  double interaction_time;
  PulseMode pulse_mode = PulseMode::diagonalize;
  ProtocolNumerics numerics{};
};

inline double initial_excited_population(const ProtocolConfig& config) {
  if (const auto* pe = std::get_if<InitialPe>(&config.initial)) {
    if (!(pe->pe >= 0.0 && pe->pe <= 1.0))
      throw DomainError("protocol: initial excited population outside [0,1]");
    return pe->pe;
  }
  return thermal_atom(std::get<InitialBeta>(config.initial).beta, config.physical.delta_e()).rho11();
}

struct ProtocolResult {
  AtomDensity rho_pre_pulse;
  AtomDensity rho_post_pulse;
  TemperatureReading reading;
  Validity validity;
  double pulse_residual = 0.0; ///< |rho01| after the pulse
  bool pulse_residual_exceeded = false;
};

inline AtomDensity apply_pulse_stage(const AtomDensity& pre, double t, const ProtocolConfig& config) {
  if (config.pulse_mode == PulseMode::diagonalize)
    return AtomDensity::diagonal(pre.eigenvalues().first);
  return pi_half_pulse(pre, cooling_axis(t, config.physical, config.prep));
}

inline ProtocolResult run_protocol_at(const ProtocolConfig& config, double t) {
  if (!(t >= 0.0) || !std::isfinite(t))
    throw DomainError("protocol: interaction time must be finite and >= 0");
  const double pe0 = initial_excited_population(config);
  const AtomDensity pre = evolve_protocol_mixture(pe0, config.prep, t, config.physical);
  const AtomDensity post = apply_pulse_stage(pre, t, config);
  const double residual = std::abs(post.rho01());
  const double n_bar_for_window = std::max(config.prep.n_bar(), std::numeric_limits<double>::min());
  return ProtocolResult{
      pre,
      post,
      temperature_from_pe(post.rho11(), config.physical.delta_e()),
      validity_at(t, config.physical.g(), n_bar_for_window),
      residual,
      residual > config.numerics.pulse_residual_tolerance,
  };
}

inline ProtocolResult run_protocol(const ProtocolConfig& config) {
  return run_protocol_at(config, config.interaction_time);
}

struct SweepPoint {
  double t;
  std::optional<ProtocolResult> result;
  std::string error;
};

struct SweepOptions {
  bool parallel = false;
  unsigned threads = 0; ///< 0: hardware concurrency
};

/// One protocol run per grid time; failures are attached to their point.
inline std::vector<SweepPoint> sweep_interaction_time(const ProtocolConfig& config, std::span<const double> t_grid,
                                                      SweepOptions options = {}) {
  if (t_grid.empty())
    throw DomainError("sweep_interaction_time: empty time grid");
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1]))
      throw DomainError("sweep_interaction_time: time grid must be strictly ascending");

  std::vector<SweepPoint> out(t_grid.size());
  auto evaluate = [&](std::size_t i) {
    out[i].t = t_grid[i];
    try {
      out[i].result = run_protocol_at(config, t_grid[i]);
    } catch (const std::exception& e) {
      out[i].error = e.what();
    }
  };

  if (!options.parallel) {
    for (std::size_t i = 0; i < t_grid.size(); ++i)
      evaluate(i);
    return out;
  }
  unsigned workers = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, t_grid.size()));
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < t_grid.size(); i += workers)
        evaluate(i);
    });
  pool.clear();
  return out;
}

/// Largest pairwise trace distance between pre-pulse states of different initial populations.
inline double initial_state_independence(const ProtocolConfig& config, double t, std::span<const double> probe_pes) {
  std::vector<AtomDensity> states;
  states.reserve(probe_pes.size());
  for (double pe0 : probe_pes)
    states.push_back(evolve_protocol_mixture(pe0, config.prep, t, config.physical));
  double worst = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i)
    for (std::size_t j = i + 1; j < states.size(); ++j)
      worst = std::max(worst, trace_distance(states[i], states[j]));
  return worst;
}

} // namespace jcthermo
