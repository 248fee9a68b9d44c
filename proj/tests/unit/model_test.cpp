#include <cmath>

#include <gtest/gtest.h>

#include "dicke/error.hpp"
#include "dicke/model.hpp"
#include "oracles.hpp"

namespace dicke {
namespace {

ModelParams params(int emitters, int n_ph) {
  ModelParams p;
  p.emitters = emitters;
  p.n_ph = n_ph;
  return p;
}

TEST(Model, DimensionArithmetic) {
  EXPECT_EQ(build_operators(params(1, 1)).space.dimension(), 4);
  EXPECT_EQ(params(3, 4).dimension(), 40);
}

TEST(Model, RejectsBadParameters) {
  ModelParams p = params(0, 1);
  EXPECT_THROW(p.validate(), ConfigError);
  p = params(1, 1);
  p.n_steps = 4 * p.n_fourier - 1;
  EXPECT_THROW(p.validate(), ConfigError);
  p = params(1, 1);
  p.T = -0.1;
  EXPECT_THROW(p.validate(), ConfigError);
  p = params(3, 400);
  EXPECT_THROW(build_operators(p), ConfigError);
}

TEST(Model, LadderElements) {
  const Operators ops = build_operators(params(1, 6));
  for (int n = 1; n <= 6; ++n)
    for (std::uint32_t s : {0u, 1u}) {
      const cplx v = ops.a(ops.space.index(n - 1, s), ops.space.index(n, s));
      EXPECT_NEAR(v.real(), std::sqrt(n), 1e-15);
      EXPECT_EQ(v.imag(), 0.0);
    }
}

TEST(Model, CommutatorBelowTruncationEdge) {
  const Operators ops = build_operators(params(1, 5));
  const CMatrix c = ops.a * ops.a_dag - ops.a_dag * ops.a;
  for (int i = 0; i < ops.space.dimension(); ++i) {
    if (ops.space.fock_of(i) == 5) continue;
    for (int j = 0; j < ops.space.dimension(); ++j)
      EXPECT_NEAR(std::abs(c(i, j) - (i == j ? 1.0 : 0.0)), 0.0, 1e-14);
  }
}

TEST(Model, IndexRoundTrip) {
  for (int emitters = 1; emitters <= 3; ++emitters) {
    const HilbertSpace space(64 / (1 << emitters) - 1, emitters);
    for (int i = 0; i < space.dimension(); ++i)
      EXPECT_EQ(space.index(space.fock_of(i), space.spins_of(i)), i);
  }
  const HilbertSpace two(3, 2);
  EXPECT_TRUE(two.excited(two.index(0, 0b10u), 0));
  EXPECT_FALSE(two.excited(two.index(0, 0b10u), 1));
  EXPECT_EQ(two.excitations(two.index(2, 0b11u)), 4);
}

TEST(Model, UncoupledIsDiagonal) {
  ModelParams p = params(2, 4);
  p.omega_x = 1.3;
  const Operators ops = build_operators(p);
  const CMatrix h = dicke_hamiltonian(p, ops);
  for (int i = 0; i < h.rows(); ++i) {
    const int spins = std::popcount(ops.space.spins_of(i));
    EXPECT_NEAR(h(i, i).real(), ops.space.fock_of(i) * p.omega_c + spins * p.omega_x, 1e-14);
    for (int j = 0; j < h.cols(); ++j)
      if (i != j) {
        EXPECT_EQ(std::abs(h(i, j)), 0.0);
      }
  }
}

TEST(Model, JaynesCummingsLadder) {
  ModelParams p = params(1, 10);
  p.g = 0.4;
  const Operators ops = build_operators(p);
  const SystemSpectrum s = system_energies(dicke_hamiltonian(p, ops));
  EXPECT_NEAR(s.energies[0], 0.0, 1e-12);
  EXPECT_NEAR(s.energies[1], 1.0 - 0.4, 1e-12);
  EXPECT_NEAR(s.energies[2], 1.0 + 0.4, 1e-12);
  for (int n = 2; n <= 5; ++n)
    for (double sign : {-1.0, 1.0}) {
      const double expected = n + sign * 0.4 * std::sqrt(n);
      EXPECT_NEAR((s.energies.array() - expected).abs().minCoeff(), 0.0, 1e-12);
    }
}

TEST(Model, HamiltonianMatchesIndependentConstruction) {
  for (double gp : {0.0, 0.3}) {
    ModelParams p = params(1, 8);
    p.g = 0.3;
    p.g_prime = gp;
    p.omega_x = 1.1;
    const CMatrix h = dicke_hamiltonian(p, build_operators(p));
    EXPECT_LT((h - oracle::jc_hamiltonian(p.omega_c, p.omega_x, p.g, p.g_prime, p.n_ph)).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(Model, CounterrotatingDepressesGround) {
  ModelParams p = params(1, 20);
  p.g = p.g_prime = 0.4;
  EXPECT_LT(system_energies(dicke_hamiltonian(p, build_operators(p))).energies[0], 0.0);
}

TEST(Model, HermitianAndEigenResidual) {
  for (int emitters = 1; emitters <= 3; ++emitters) {
    ModelParams p = params(emitters, 6);
    p.g = 0.35;
    p.g_prime = 0.2;
    p.Omega = 0.1;
    p.Omega_prime = 0.05;
    const Operators ops = build_operators(p);
    const CMatrix h = dicke_hamiltonian(p, ops);
    EXPECT_LT(relative_hermiticity_defect(h), 1e-12);
    for (double t : {0.0, 0.7, 3.1})
      EXPECT_LT(relative_hermiticity_defect(laser_hamiltonian(p, ops, t)), 1e-12);
    const SystemSpectrum s = system_energies(h);
    for (int k = 0; k < s.energies.size(); ++k)
      EXPECT_LT((h * s.vectors.col(k) - s.energies[k] * s.vectors.col(k)).norm(), 1e-10);
    EXPECT_LT((s.vectors.adjoint() * s.vectors - CMatrix::Identity(h.rows(), h.cols())).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Model, ExcitationConservation) {
  ModelParams p = params(2, 6);
  p.g = 0.5;
  const Operators ops = build_operators(p);
  const CMatrix h = dicke_hamiltonian(p, ops);
  CMatrix n = ops.a_dag * ops.a;
  for (const auto& s : ops.sigma_plus) n += s * s.adjoint();
  const CMatrix c = h * n - n * h;
  for (int i = 0; i < c.rows(); ++i)
    for (int j = 0; j < c.cols(); ++j)
      if (ops.space.fock_of(i) < p.n_ph && ops.space.fock_of(j) < p.n_ph) {
        EXPECT_LT(std::abs(c(i, j)), 1e-12);
      }
}

TEST(Model, LaserHamiltonian) {
  ModelParams p = params(1, 5);
  const Operators ops = build_operators(p);
  EXPECT_EQ(laser_hamiltonian(p, ops, 0.3).cwiseAbs().maxCoeff(), 0.0);

  p.Omega = 0.1;
  const CMatrix quad = ops.a + ops.a_dag;
  EXPECT_LT((laser_hamiltonian(p, ops, 0.0) - 0.05 * quad).cwiseAbs().maxCoeff(), 1e-15);

  p.Omega_prime = 0.1;
  for (double t : {0.0, 0.4, 2.2, 5.0}) {
    EXPECT_LT((laser_hamiltonian(p, ops, t) - 0.1 * std::cos(p.omega_d * t) * quad).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT((laser_hamiltonian(p, ops, t) - laser_hamiltonian(p, ops, t + p.period())).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(Model, DegenerateClustersAreReproducible) {
  ModelParams p = params(2, 3);
  const CMatrix h = dicke_hamiltonian(p, build_operators(p));
  const SystemSpectrum a = system_energies(h);
  const SystemSpectrum b = system_energies(h);
  EXPECT_EQ((a.vectors - b.vectors).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_NEAR(a.energies[1], 1.0, 1e-14);
  EXPECT_NEAR(a.energies[2], 1.0, 1e-14);
}

}  // namespace
}  // namespace dicke
