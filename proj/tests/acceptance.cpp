// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "jcthermo/analytic.hpp"
#include "jcthermo/dynamics.hpp"
#include "jcthermo/lambert_w.hpp"
#include "jcthermo/protocol.hpp"

using namespace jcthermo;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& what) {
  std::printf("%s  criterion %2d  %s\n", ok ? "PASS" : "FAIL", id, what.c_str());
  failures += !ok;
}

std::string f(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

std::vector<double> lin(double lo, double hi, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i)
    v.push_back(lo + (hi - lo) * i / (n - 1));
  return v;
}

std::vector<double> logs(double lo, double hi, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i)
    v.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
  return v;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const PhysicalParams kParams = PhysicalParams::resonant(1.0, 1.0);
const CoherentPrep kPrep = CoherentPrep::from_n_bar(36.0, 0.0);
const Timescales kTs = timescales(1.0, 36.0);

AtomDensity reduced(AtomLevel level, double t) {
  return partial_trace_field(propagate(JointPureState::atom_times_coherent(level, kPrep), t, kParams));
}

} // namespace

int main() {
  {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (auto level : {AtomLevel::ground, AtomLevel::excited})
      for (double t : lin(3.0 * kTs.tau_c, 0.5 * kTs.tau_r - 3.0 * kTs.tau_c, 400)) {
        const complex d = reduced(level, t).rho01() - rho01_analytic(t, 1.0, 36.0, 1.0, 0.0).value;
        worst = std::max({worst, std::abs(d.real()), std::abs(d.imag())});
      }
    const double secs = seconds_since(t0);
    report(1, worst <= 0.02 && secs < 2.0, "coherence max component error " + f(worst) + " (<= 0.02), " + f(secs) + " s (< 2)");
  }
  {
    const ProtocolConfig cfg{kParams, kPrep, InitialPe{0.0}, 0.0};
    const std::vector<double> probes{0.0, 1.0};
    const double at0 = initial_state_independence(cfg, 0.0, probes);
    double worst = 0.0;
    for (double t : lin(3.0 * kTs.tau_c, 0.8 * kTs.tau_r, 50))
      worst = std::max(worst, initial_state_independence(cfg, t, probes));
    report(2, at0 >= 0.9 && worst <= 0.02,
           "trace distance at t=0 " + f(at0) + " (>= 0.9), max on [3tau_c, 0.8tau_R] " + f(worst) + " (<= 0.02)");
  }
  {
    double worst = 0.0;
    for (auto level : {AtomLevel::ground, AtomLevel::excited})
      for (double t : lin(3.0 * kTs.tau_c, 0.8 * kTs.tau_r, 50))
        worst = std::max(worst, std::abs(reduced(level, t).rho11() - 0.5));
    report(3, worst <= 0.02, "max |rho11 - 1/2| " + f(worst) + " (<= 0.02)");
  }
  {
    std::string detail;
    double worst = 0.0;
    double prev = INFINITY;
    bool decreasing = true;
    for (double n_bar : {25.0, 36.0, 64.0, 100.0}) {
      const ProtocolConfig cfg{kParams, CoherentPrep::from_n_bar(n_bar, 0.0), InitialPe{0.0}, 0.0};
      const double pe = run_protocol_at(cfg, 0.5 * timescales(1.0, n_bar).tau_r).reading.pe;
      const double rel = std::abs(pe - pe_half_revival(n_bar)) / pe_half_revival(n_bar);
      detail += (detail.empty() ? "" : ", ") + f(rel);
      worst = std::max(worst, rel);
      decreasing = decreasing && rel < prev;
      prev = rel;
    }
    report(4, worst <= 0.25 && decreasing,
           "half-revival pe relative error [" + detail + "] (<= 0.25, decreasing: " + (decreasing ? "yes" : "no") + ")");
  }
  {
    const double a = t_min(36.0, 1.0).temperature;
    const double b = t_min(46.0, 1.0).temperature;
    report(5, std::abs(a - 0.2105) <= 1e-3 && std::abs(b - 0.2001) <= 1e-3,
           "T_min(36) " + f(a) + ", T_min(46) " + f(b) + " (0.2105, 0.2001 +- 1e-3)");
  }
  {
    double worst = 0.0;
    for (double x : logs(1e-3, 1e6, 100)) {
      const double w = lambert_w0(x);
      worst = std::max(worst, std::abs(w * std::exp(w) - x) / std::max(1.0, x));
    }
    const double we = std::abs(lambert_w0(std::numbers::e) - 1.0);
    report(6, worst <= 1e-10 && we <= 1e-12, "scaled residual " + f(worst) + " (<= 1e-10), |W(e)-1| " + f(we) + " (<= 1e-12)");
  }
  {
    double residual = 0.0;
    double gap = 0.0;
    bool mono = true;
    double ratio_lo = INFINITY;
    double ratio_hi = 0.0;
    double prev_p = 0.0;
    double prev_q = 0.0;
    for (double n_bar : logs(10.0, 1000.0, 20)) {
      const auto ct = collapse_condition_time(n_bar, 1.0);
      residual = std::max(residual, std::abs(ct.residual));
      if (n_bar >= 100.0)
        gap = std::max(gap, std::abs(ct.linearized_time - ct.time) / ct.time);
      const double p = t_max(n_bar, 1.0, TmaxVariant::paper_formula).temperature;
      const double q = t_max(n_bar, 1.0, TmaxVariant::numeric).temperature;
      mono = mono && p > prev_p && q > prev_q;
      prev_p = p;
      prev_q = q;
      ratio_lo = std::min(ratio_lo, p / q);
      ratio_hi = std::max(ratio_hi, p / q);
    }
    report(7, residual <= 1e-10 && gap <= 0.02 && mono,
           "root residual " + f(residual) + " (<= 1e-10), linearized gap " + f(gap) + " (<= 0.02), T_max monotone: " +
               (mono ? "yes" : "no"));
    std::printf("INFO  criterion  7  T_max paper_formula/numeric ratio in [%.4f, %.4f]\n", ratio_lo, ratio_hi);
  }
  {
    const auto psi0 = JointPureState::atom_times_coherent(AtomLevel::excited, kPrep);
    const double t = 0.5 * kTs.tau_r;
    const double deficit = fidelity_deficit(propagate(psi0, t, kParams), propagate_ode(psi0, t, kParams));
    double series = 0.0;
    for (double s : lin(0.0, kTs.tau_r, 50))
      series = std::max(series, std::abs(rho01_exact_series(s, kPrep, kParams) - reduced(AtomLevel::excited, s).rho01()));
    report(8, deficit <= 1e-6 && series <= 1e-10,
           "ODE fidelity deficit " + f(deficit) + " (<= 1e-6), series vs partial trace " + f(series) + " (<= 1e-10)");
  }
  {
    const auto psi0 = JointPureState::atom_times_coherent(AtomLevel::excited, kPrep);
    double unit = 0.0;
    for (double t : lin(0.0, 2.0 * kTs.tau_r, 64))
      unit = std::max(unit, std::abs(propagate(psi0, t, kParams).norm_squared() - psi0.norm_squared()));
    double density = 0.0;
    for (double pe0 : {0.0, 0.5, 1.0}) {
      const ProtocolConfig cfg{kParams, kPrep, InitialPe{pe0}, 0.0, PulseMode::explicit_unitary};
      for (double t : lin(0.0, kTs.tau_r, 40)) {
        const auto r = run_protocol_at(cfg, t);
        for (const auto& rho : {r.rho_pre_pulse, r.rho_post_pulse}) {
          const auto m = rho.matrix();
          density = std::max({density, std::abs(m[0][0] + m[1][1] - 1.0), std::abs(m[0][1] - std::conj(m[1][0])),
                              std::max(0.0, -rho.eigenvalues().first)});
        }
      }
    }
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-0.57, 0.57);
    double pulse = 0.0;
    for (int i = 0; i < 500; ++i) {
      const auto rho = AtomDensity::from_bloch({u(rng), u(rng), u(rng)});
      const auto out = pi_half_pulse(rho, 3.0 * u(rng));
      pulse = std::max(pulse, std::abs(rho.eigenvalues().first - out.eigenvalues().first));
    }
    double round_trip = 0.0;
    for (double beta : logs(0.1, 10.0, 50))
      round_trip = std::max(round_trip, std::abs(temperature_from_pe(thermal_atom(beta, 1.0).rho11(), 1.0).temperature * beta - 1.0));
    report(9, unit <= 1e-12 && density <= 1e-12 && pulse <= 1e-12 && round_trip <= 1e-10,
           "unitarity " + f(unit) + ", density " + f(density) + ", pulse eigenvalues " + f(pulse) + " (<= 1e-12), round trip " +
               f(round_trip) + " (<= 1e-10)");
  }
  {
    const auto t0 = std::chrono::steady_clock::now();
    const int status = std::system((std::string(JCTHERMO_CLI_PATH) + " validate > /dev/null 2>&1").c_str());
    const double secs = seconds_since(t0);
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    report(10, code == 0 && secs < 60.0, "validate exit " + std::to_string(code) + " (0), " + f(secs) + " s (< 60)");
  }
  std::printf("%d criteria failed\n", failures);
  return failures ? 1 : 0;
}
