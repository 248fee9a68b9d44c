#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "dicke/error.hpp"
#include "dicke/floquet.hpp"
#include "dicke/model.hpp"
#include "oracles.hpp"

namespace dicke {
namespace {

ModelParams jc(double g, double Omega, int n_ph = 12, int n_fourier = 16) {
  ModelParams p;
  p.g = g;
  p.Omega = Omega;
  p.n_ph = n_ph;
  p.n_fourier = n_fourier;
  p.n_steps = 4 * n_fourier;
  return p;
}

struct Built {
  ModelParams params;
  Operators ops;
  CMatrix h;
  PropagatorSeries series;
  FloquetBasis basis;
};

Built build(const ModelParams& p) {
  Operators ops = build_operators(p);
  CMatrix h = dicke_hamiltonian(p, ops);
  PropagatorSeries series = one_cycle_propagator(p, ops);
  FloquetBasis basis = floquet_basis(series, p, h);
  return {p, std::move(ops), std::move(h), std::move(series), std::move(basis)};
}

TEST(Floquet, ZeroHamiltonianGivesIdentity) {
  ModelParams p = jc(0.0, 0.0, 3, 4);
  p.omega_c = p.omega_x = 0.0;
  const PropagatorSeries s = one_cycle_propagator(p, build_operators(p));
  EXPECT_LT((s.one_cycle - CMatrix::Identity(s.one_cycle.rows(), s.one_cycle.cols())).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Floquet, UndrivenMatchesExponential) {
  for (double gp : {0.0, 0.3}) {
    ModelParams p = jc(0.3, 0.0, 8, 8);
    p.g_prime = gp;
    const Operators ops = build_operators(p);
    const PropagatorSeries s = one_cycle_propagator(p, ops);
    const CMatrix expected = oracle::expm_schroedinger(dicke_hamiltonian(p, ops), p.period());
    EXPECT_LT((s.one_cycle - expected).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Floquet, UnitarityOfEverySample) {
  ModelParams p = jc(0.5, 0.2);
  p.g_prime = 0.5;
  p.Omega_prime = 0.2;
  const PropagatorSeries s = one_cycle_propagator(p, build_operators(p));
  EXPECT_LT(s.max_unitarity_defect, 1e-10);
  for (const auto& u : s.samples) EXPECT_LT(unitarity_defect(u), 1e-10);
}

TEST(Floquet, DrivenQuasienergiesMatchClosedForm) {
  const Built b = build(jc(0.4, 0.2, 16, 24));
  for (double target : {0.3224, -0.3224}) {
    const double expected = std::copysign(oracle::tc_level(1, 0.4, 0.2), target);
    EXPECT_NEAR(expected, target, 5e-5);
    double best = 1.0;
    for (int n = 0; n < b.basis.n_states(); ++n)
      best = std::min(best, oracle::circular_distance(b.basis.quasienergy[n], expected, 1.0));
    EXPECT_LT(best, 1e-6);
  }
}

TEST(Floquet, StepDoublingConvergence) {
  ModelParams p = jc(0.4, 0.05, 10, 16);
  const Built a = build(p);
  p.n_steps *= 2;
  const Built b = build(p);
  RVector ea = a.basis.quasienergy, eb = b.basis.quasienergy;
  std::sort(ea.begin(), ea.end());
  std::sort(eb.begin(), eb.end());
  EXPECT_LT((ea - eb).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Floquet, UncoupledFoldsToZero) {
  const Built b = build(jc(0.0, 0.0, 5, 8));
  for (int n = 0; n < b.basis.n_states(); ++n) EXPECT_NEAR(b.basis.quasienergy[n], 0.0, 1e-12);
}

TEST(Floquet, ZoneIsHalfOpen) {
  ModelParams p = jc(0.0, 0.0, 3, 4);
  p.omega_c = p.omega_x = 0.5;
  const Built b = build(p);
  for (int n = 0; n < b.basis.n_states(); ++n) {
    EXPECT_GE(b.basis.quasienergy[n], -0.5);
    EXPECT_LT(b.basis.quasienergy[n], 0.5);
  }
  EXPECT_NEAR(oracle::fold_zone(0.5, 1.0), -0.5, 1e-15);
}

TEST(Floquet, UndrivenStatesHaveSingleMode) {
  const Built b = build(jc(0.4, 0.0));
  const LabelReport r = label_states(b.basis, system_energies(b.h));
  EXPECT_TRUE(r.bijective);
  EXPECT_LT(r.max_residual, 1e-9);
  for (int n = 0; n < b.basis.n_states(); ++n) {
    const int nu = r.labels[static_cast<std::size_t>(n)].nu;
    EXPECT_NEAR(b.basis.mode(nu).col(n).norm(), 1.0, 1e-9);
  }
}

TEST(Floquet, FourierSumRuleOrthonormality) {
  ModelParams p = jc(0.6, 0.1, 10, 24);
  p.g_prime = 0.6;
  p.Omega_prime = 0.1;
  const Built b = build(p);
  CMatrix gram = CMatrix::Zero(b.basis.n_states(), b.basis.n_states());
  for (const auto& m : b.basis.modes) gram += m.adjoint() * m;
  EXPECT_LT((gram - CMatrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Floquet, Reconstruction) {
  const Built b = build(jc(0.5, 0.15));
  const int ns = static_cast<int>(b.series.samples.size());
  for (int j : {0, 5, ns / 2, ns - 1}) {
    const double t = j * b.basis.period / ns;
    CMatrix sampled = b.series.samples[static_cast<std::size_t>(j)] * b.basis.initial_states;
    for (int n = 0; n < b.basis.n_states(); ++n) sampled.col(n) *= std::exp(kI * b.basis.quasienergy[n] * t);
    EXPECT_LT((b.basis.periodic_states(t) - sampled).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(Floquet, FourierCutoffViolationThrows) {
  ModelParams p = jc(0.8, 0.0, 12, 8);
  p.g_prime = 0.8;
  EXPECT_THROW(build(p), NumericalError);
}

TEST(Floquet, WeakDrivingKeepsLabels) {
  const Built a = build(jc(0.4, 0.0, 14, 24));
  const Built b = build(jc(0.4, 0.02, 14, 24));
  const LabelReport ra = label_states(a.basis, system_energies(a.h));
  const LabelReport rb = label_states(b.basis, system_energies(b.h));
  // the low-lying states keep their assignment under continuation in Omega
  for (int n = 0; n < a.basis.n_states(); ++n) {
    const int k = ra.labels[static_cast<std::size_t>(n)].system_index;
    if (k >= 6) continue;
    const RVector overlaps = (b.basis.initial_states.adjoint() * a.basis.initial_states.col(n)).cwiseAbs();
    Eigen::Index best = 0;
    overlaps.maxCoeff(&best);
    EXPECT_GT(overlaps[best], 0.95);
    EXPECT_EQ(rb.labels[static_cast<std::size_t>(best)].system_index, k);
    EXPECT_EQ(rb.labels[static_cast<std::size_t>(best)].nu, ra.labels[static_cast<std::size_t>(n)].nu);
  }
}

TEST(Floquet, TransitionTableHermiticity) {
  ModelParams p = jc(0.5, 0.1, 10, 24);
  p.g_prime = 0.5;
  p.Omega_prime = 0.1;
  const Built b = build(p);
  const TransitionTable t = transition_operators(b.basis, b.ops.X);
  for (int nu = -t.max_offset; nu <= t.max_offset; ++nu)
    EXPECT_LT((t.offset(nu) - t.offset(-nu).adjoint()).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Floquet, BareCavityTransitionElements) {
  ModelParams p = jc(0.0, 0.0, 4, 8);
  p.omega_x = 1.37;
  const Built b = build(p);
  const TransitionTable t = transition_operators(b.basis, b.ops.X);
  // Uncoupled eigenstates are basis vectors; recover their indices.
  std::vector<int> index(static_cast<std::size_t>(b.basis.n_states()));
  for (int n = 0; n < b.basis.n_states(); ++n) {
    Eigen::Index i = 0;
    EXPECT_NEAR(b.basis.initial_states.col(n).cwiseAbs().maxCoeff(&i), 1.0, 1e-12);
    index[static_cast<std::size_t>(n)] = static_cast<int>(i);
  }
  const CMatrix x = oracle::cavity_x(p.n_ph, 1);
  for (int n = 0; n < b.basis.n_states(); ++n)
    for (int k = 0; k < b.basis.n_states(); ++k) {
      const double expected = std::abs(x(index[static_cast<std::size_t>(n)], index[static_cast<std::size_t>(k)]));
      double largest = 0.0;
      for (int nu = -t.max_offset; nu <= t.max_offset; ++nu) largest = std::max(largest, std::abs(t(n, k, nu)));
      EXPECT_NEAR(largest, expected, 1e-10);
      const int dn = b.ops.space.fock_of(index[static_cast<std::size_t>(n)]) - b.ops.space.fock_of(index[static_cast<std::size_t>(k)]);
      if (expected > 0.0) {
        EXPECT_EQ(std::abs(dn), 1);
        EXPECT_NEAR(expected, std::sqrt(std::max(b.ops.space.fock_of(index[static_cast<std::size_t>(n)]), b.ops.space.fock_of(index[static_cast<std::size_t>(k)]))), 1e-14);
      }
    }
}

TEST(Floquet, FirstSidebandsScaleLinearlyInDrive) {
  // |X_{n,k,nu}| between labelled states, one Fourier step away from the
  // undriven selection nu = nu_n - nu_k
  auto sideband = [](double Omega) {
    const Built b = build(jc(0.4, Omega, 10, 16));
    const TransitionTable t = transition_operators(b.basis, b.ops.X);
    const LabelReport r = label_states(b.basis, system_energies(b.h));
    double total = 0.0;
    for (int n = 0; n < b.basis.n_states(); ++n)
      for (int k = 0; k < b.basis.n_states(); ++k) {
        const auto& ln = r.labels[static_cast<std::size_t>(n)];
        const auto& lk = r.labels[static_cast<std::size_t>(k)];
        if (ln.system_index > 5 || lk.system_index > 5) continue;
        for (int step : {-1, 1}) total += std::abs(t(n, k, ln.nu - lk.nu + step));
      }
    return total;
  };
  const double s1 = sideband(1e-4);
  const double s2 = sideband(2e-4);
  EXPECT_GT(s1, 1e-6);
  EXPECT_NEAR(s2 / s1, 2.0, 1e-3);
}

}  // namespace
}  // namespace dicke
