#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "jcthermo/analytic.hpp"
#include "jcthermo/dynamics.hpp"

using namespace jcthermo;

namespace {

const PhysicalParams kUnit = PhysicalParams::resonant(1.0, 1.0);

JointPureState dense_apply(const std::vector<complex>& h, const JointPureState& v) {
  const std::size_t dim = v.size();
  JointPureState out(v.cutoff());
  for (std::size_t r = 0; r < dim; ++r) {
    complex s{0.0, 0.0};
    for (std::size_t c = 0; c < dim; ++c)
      s += h[r * dim + c] * v.amplitudes()[c];
    out.amplitudes()[r] = s;
  }
  return out;
}

double max_abs_diff(const JointPureState& a, const JointPureState& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a.amplitudes()[i] - b.amplitudes()[i]));
  return m;
}

JointPureState random_state(FockCutoff cut, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  std::vector<complex> a(cut.joint_dim());
  double nrm = 0.0;
  for (auto& x : a) {
    x = {gauss(rng), gauss(rng)};
    nrm += std::norm(x);
  }
  for (auto& x : a)
    x /= std::sqrt(nrm);
  return JointPureState(cut, a);
}

} // namespace

TEST(Hamiltonian, MatrixFreeMatchesAssembledMatrix) {
  std::mt19937_64 rng(3);
  const FockCutoff cut{12};
  const auto params = PhysicalParams::resonant(1.3, 0.7);
  const auto h = hamiltonian_matrix(cut, params);
  for (int i = 0; i < 20; ++i) {
    const auto v = random_state(cut, rng);
    ASSERT_LT(max_abs_diff(apply_hamiltonian(v, params), dense_apply(h, v)), 1e-13);
  }
  for (std::size_t r = 0; r < cut.joint_dim(); ++r)
    for (std::size_t c = 0; c < cut.joint_dim(); ++c)
      ASSERT_EQ(h[r * cut.joint_dim() + c], std::conj(h[c * cut.joint_dim() + r]));
}

TEST(DressedState, Examples) {
  const FockCutoff cut{10};
  const auto plus1 = dressed_state(1, DressedSign::plus, cut);
  EXPECT_DOUBLE_EQ(plus1.amplitude(AtomLevel::ground, 1).real(), 1.0 / std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(plus1.amplitude(AtomLevel::excited, 0).real(), 1.0 / std::sqrt(2.0));
  for (std::size_t n = 1; n <= cut.n_max; ++n) {
    const auto pair = dressed_pair(n, cut);
    EXPECT_NEAR(std::abs(pair.plus_state.inner(pair.minus_state)), 0.0, 1e-14);
    EXPECT_NEAR(pair.plus_state.norm_squared(), 1.0, 1e-14);
    EXPECT_NEAR(pair.minus_state.norm_squared(), 1.0, 1e-14);
  }
  EXPECT_THROW(dressed_state(0, DressedSign::plus, cut), DomainError);
  EXPECT_THROW(dressed_state(11, DressedSign::minus, cut), DomainError);
}

TEST(DressedState, EigenvectorsOfAssembledHamiltonian) {
  const FockCutoff cut{30};
  const auto params = PhysicalParams::resonant(1.0, 0.37);
  const auto h = hamiltonian_matrix(cut, params);
  for (std::size_t n = 1; n <= cut.n_max; ++n)
    for (auto sign : {DressedSign::plus, DressedSign::minus}) {
      const auto v = dressed_state(n, sign, cut);
      const auto hv = dense_apply(h, v);
      const double e = dressed_energy(n, sign, params);
      double err = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i)
        err = std::max(err, std::abs(hv.amplitudes()[i] - e * v.amplitudes()[i]));
      ASSERT_LT(err, 1e-12) << n;
    }
}

TEST(RabiSpectrum, SplittingIsTwiceCouplingTimesRootN) {
  // exact 2x2 diagonalization: eigenvalue gap of block n
  const auto params = PhysicalParams::resonant(1.0, 0.5);
  double prev = 0.0;
  for (std::size_t n = 1; n < 50; ++n) {
    const double gap = dressed_energy(n, DressedSign::plus, params) - dressed_energy(n, DressedSign::minus, params);
    EXPECT_NEAR(rabi_splitting(n, 0.5), gap, 1e-13);
    EXPECT_GT(rabi_splitting(n, 0.5), prev);
    prev = rabi_splitting(n, 0.5);
  }
}

TEST(Propagate, IdentityAtZero) {
  std::mt19937_64 rng(11);
  const auto v = random_state(FockCutoff{15}, rng);
  EXPECT_EQ(max_abs_diff(propagate(v, 0.0, kUnit), v), 0.0);
  EXPECT_THROW(propagate(v, -1.0, kUnit), DomainError);
}

TEST(Propagate, VacuumRabiOscillation) {
  const auto params = PhysicalParams::resonant(1.0, 0.8);
  const auto e0 = JointPureState::basis(FockCutoff{5}, AtomLevel::excited, 0);
  for (double t : {0.1, 0.5, 1.0, 2.7, 10.0}) {
    const auto s = propagate(e0, t, params);
    EXPECT_NEAR(std::norm(s.amplitude(AtomLevel::excited, 0)), std::pow(std::cos(0.8 * t), 2), 1e-14);
  }
}

TEST(Propagate, UnitarityCompositionEnergyProperty) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto prep = CoherentPrep::from_n_bar(36.0, 0.3);
  const double tau_r = timescales(1.0, 36.0).tau_r;
  const auto initial = JointPureState::atom_times_coherent(AtomLevel::excited, prep);
  const double norm0 = initial.norm_squared();
  const double energy0 = energy_expectation(initial, kUnit);
  for (int i = 0; i < 50; ++i) {
    const double t1 = u(rng) * tau_r;
    const double t2 = u(rng) * tau_r;
    const auto s1 = propagate(initial, t1, kUnit);
    ASSERT_NEAR(s1.norm_squared(), norm0, 1e-12);
    ASSERT_NEAR(energy_expectation(s1, kUnit), energy0, 1e-10 * std::max(1.0, std::abs(energy0)));
    ASSERT_LT(max_abs_diff(propagate(initial, t1 + t2, kUnit), propagate(s1, t2, kUnit)), 1e-11);
  }
}

TEST(Propagate, BlockStructurePreserved) {
  const FockCutoff cut{20};
  JointPureState s(cut);
  s.amplitude(AtomLevel::excited, 4) = 0.6;
  s.amplitude(AtomLevel::ground, 5) = complex(0.0, 0.8);
  const auto out = propagate(s, 3.3, kUnit);
  for (std::size_t n = 0; n <= cut.n_max; ++n) {
    if (n != 4) {
      EXPECT_EQ(std::abs(out.amplitude(AtomLevel::excited, n)), 0.0) << n;
    }
    if (n != 5) {
      EXPECT_EQ(std::abs(out.amplitude(AtomLevel::ground, n)), 0.0) << n;
    }
  }
}

TEST(PropagateOde, IdentityAndVacuumRabiZero) {
  const auto params = PhysicalParams::resonant(1.0, 2.0);
  const auto e0 = JointPureState::basis(FockCutoff{4}, AtomLevel::excited, 0);
  EXPECT_EQ(max_abs_diff(propagate_ode(e0, 0.0, params), e0), 0.0);
  const auto s = propagate_ode(e0, std::numbers::pi / (2.0 * 2.0), params);
  EXPECT_LE(std::norm(s.amplitude(AtomLevel::excited, 0)), 1e-8);
}

TEST(PropagateOde, AgreesWithBlockSolutionAtHalfRevival) {
  const auto prep = CoherentPrep::from_n_bar(36.0, 0.0);
  const auto initial = JointPureState::atom_times_coherent(AtomLevel::excited, prep);
  const double t = 0.5 * timescales(1.0, 36.0).tau_r;
  OdeStats stats;
  const auto ode = propagate_ode(initial, t, kUnit, {}, &stats);
  const auto exact = propagate(initial, t, kUnit);
  EXPECT_LE(fidelity_deficit(ode, exact), 1e-6);
  EXPECT_GT(stats.accepted_steps, 0u);
}

TEST(PropagateOde, StepUnderflowReportsAchievedTime) {
  const auto e0 = JointPureState::basis(FockCutoff{4}, AtomLevel::excited, 0);
  StepControl control;
  control.local_tolerance = 1e-300;
  control.min_step = 1e-6;
  try {
    (void)propagate_ode(e0, 1.0, kUnit, control);
    FAIL() << "expected IntegrationFailure";
  } catch (const IntegrationFailure& e) {
    EXPECT_GE(e.achieved_time(), 0.0);
    EXPECT_LT(e.achieved_time(), 1.0);
  }
}

TEST(EvolveMixture, Limits) {
  const auto prep = CoherentPrep::from_n_bar(16.0, 0.2);
  const double t = 2.1;
  const auto pure_e = partial_trace_field(propagate(JointPureState::atom_times_coherent(AtomLevel::excited, prep), t, kUnit));
  const auto mix = evolve_protocol_mixture(1.0, prep, t, kUnit);
  EXPECT_NEAR(mix.rho11(), pure_e.rho11(), 1e-15);
  EXPECT_NEAR(std::abs(mix.rho01() - pure_e.rho01()), 0.0, 1e-15);

  const auto start = evolve_protocol_mixture(0.27, prep, 0.0, kUnit);
  EXPECT_NEAR(start.rho11(), 0.27, 1e-12);
  EXPECT_EQ(start.rho01(), complex(0.0, 0.0));
  EXPECT_THROW(evolve_protocol_mixture(1.5, prep, t, kUnit), DomainError);
}

TEST(EvolveMixture, InitialStateForgottenAfterCollapse) {
  const auto prep = CoherentPrep::from_n_bar(36.0, 0.0);
  const double t = 3.0 * timescales(1.0, 36.0).tau_c;
  const double pes[] = {0.0, 0.27, 1.0};
  for (double a : pes)
    for (double b : pes)
      EXPECT_LE(trace_distance(evolve_protocol_mixture(a, prep, t, kUnit), evolve_protocol_mixture(b, prep, t, kUnit)), 0.02);
}

TEST(Rho01Summand, TrivialZeros) {
  const auto prep = CoherentPrep::from_n_bar(36.0, 0.0);
  for (std::size_t n = 0; n < 50; ++n)
    EXPECT_EQ(std::abs(rho01_exact_summand(n, 0.0, prep, kUnit)), 0.0);
  EXPECT_EQ(std::abs(rho01_exact_summand(0, 5.0, prep, kUnit)), 0.0);
  const auto vacuum = CoherentPrep::from_alpha(0.0, 0.0);
  EXPECT_EQ(std::abs(rho01_exact_summand(3, 1.0, vacuum, kUnit)), 0.0);
  EXPECT_THROW(rho01_exact_summand(prep.cutoff().n_max, 1.0, prep, kUnit), DomainError);
}

TEST(Rho01Summand, SeriesEqualsPartialTraceCoherence) {
  const auto params = PhysicalParams::resonant(1.0, 1.0);
  for (double phi : {0.0, 1.1}) {
    const auto prep = CoherentPrep::from_n_bar(36.0, phi);
    const double tau_r = timescales(1.0, 36.0).tau_r;
    for (auto level : {AtomLevel::excited, AtomLevel::ground}) {
      const auto initial = JointPureState::atom_times_coherent(level, prep);
      for (int k = 0; k < 50; ++k) {
        const double t = (k + 0.5) / 50.0 * tau_r;
        const complex exact = partial_trace_field(propagate(initial, t, params)).rho01();
        const complex series = rho01_exact_series(t, prep, params, level);
        ASSERT_LT(std::abs(series - exact), 1e-10) << to_string(level) << " t=" << t;
      }
      const double t = 0.5 * tau_r;
      EXPECT_LT(std::abs(rho01_exact_series(t, prep, params, level) -
                         partial_trace_field(propagate(initial, t, params)).rho01()),
                1e-10);
    }
  }
}

TEST(Rho01Summand, BareCouplingConventionBreaksAgreement) {
  const auto prep = CoherentPrep::from_n_bar(36.0, 0.0);
  const auto initial = JointPureState::atom_times_coherent(AtomLevel::excited, prep);
  const double t = 0.25 * timescales(1.0, 36.0).tau_r;
  const complex exact = partial_trace_field(propagate(initial, t, kUnit)).rho01();
  const complex wrong = rho01_exact_series(t, prep, kUnit, AtomLevel::excited, RabiConvention::bare_coupling);
  EXPECT_GT(std::abs(wrong - exact), 1e-3);
}
