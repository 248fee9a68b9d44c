#include "dicke/model.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "dicke/error.hpp"

namespace dicke {

namespace {

void require(bool ok, const char* field, const std::string& what) {
  if (!ok) throw ConfigError(fmt::format("model.{}: {}", field, what));
}

}  // namespace

double ModelParams::period() const { return 2.0 * kPi / omega_d; }

void ModelParams::validate() const {
  require(emitters >= 1 && emitters <= 3, "N", fmt::format("emitter count must be 1..3, got {}", emitters));
  require(omega_c >= 0.0, "omega_c", "must be >= 0");
  require(omega_x >= 0.0, "omega_x", "must be >= 0");
  require(omega_d > 0.0, "omega_d", "must be > 0");
  require(g >= 0.0, "g", "must be >= 0");
  require(g_prime >= 0.0, "g_prime", "must be >= 0");
  require(Omega >= 0.0, "Omega", "must be >= 0");
  require(Omega_prime >= 0.0, "Omega_prime", "must be >= 0");
  require(n_ph >= 1, "n_ph", "must be >= 1");
  require(n_fourier >= 1, "n_fourier", "must be >= 1");
  require(n_steps >= 4 * n_fourier, "n_steps",
          fmt::format("must be >= 4*n_fourier = {}, got {}", 4 * n_fourier, n_steps));
  require(gamma >= 0.0, "gamma", "must be >= 0");
  require(T >= 0.0, "T", "must be >= 0");
  require(cutoff >= 0.0, "cutoff", "must be >= 0");
  require(max_dim >= 1, "max_dim", "must be >= 1");
  require(n_ph < max_dim && dimension() <= max_dim, "n_ph",
          fmt::format("Hilbert dimension (n_ph+1)*2^N = {} exceeds max_dim = {}",
                      static_cast<long long>(n_ph + 1) << emitters, max_dim));
}

HilbertSpace::HilbertSpace(int n_ph, int emitters)
    : n_ph_(n_ph), emitters_(emitters), dim_((n_ph + 1) << emitters) {
  if (n_ph < 1) throw ConfigError("n_ph must be >= 1");
  if (emitters < 1 || emitters > 3) throw ConfigError("emitter count must be 1..3");
}

int HilbertSpace::index(int fock, std::uint32_t spins) const {
  if (fock < 0 || fock > n_ph_ || spins >= (1u << emitters_))
    throw std::out_of_range(fmt::format("basis label ({}, {}) out of range", fock, spins));
  return (fock << emitters_) + static_cast<int>(spins);
}

bool HilbertSpace::excited(int index, int emitter) const {
  return ((spins_of(index) >> (emitters_ - 1 - emitter)) & 1u) != 0;
}

int HilbertSpace::excitations(int index) const {
  return fock_of(index) + std::popcount(spins_of(index));
}

Operators build_operators(const ModelParams& params) {
  params.validate();
  HilbertSpace space(params.n_ph, params.emitters);
  const int dim = space.dimension();
  Operators ops{space, CMatrix::Zero(dim, dim), {}, {}, {}, {}};
  for (int i = 0; i < dim; ++i) {
    const int n = space.fock_of(i);
    if (n > 0) ops.a(space.index(n - 1, space.spins_of(i)), i) = std::sqrt(static_cast<double>(n));
  }
  ops.a_dag = ops.a.adjoint();
  for (int j = 0; j < params.emitters; ++j) {
    CMatrix sm = CMatrix::Zero(dim, dim);
    const std::uint32_t bit = 1u << (params.emitters - 1 - j);
    for (int i = 0; i < dim; ++i) {
      if (space.spins_of(i) & bit) sm(space.index(space.fock_of(i), space.spins_of(i) & ~bit), i) = 1.0;
    }
    ops.sigma_plus.push_back(sm.adjoint());
    ops.sigma_minus.push_back(std::move(sm));
  }
  ops.X = -kI * (ops.a - ops.a_dag);
  return ops;
}

CMatrix dicke_hamiltonian(const ModelParams& params, const Operators& ops) {
  CMatrix h = params.omega_c * (ops.a_dag * ops.a);
  for (std::size_t j = 0; j < ops.sigma_plus.size(); ++j) {
    const CMatrix& sp = ops.sigma_plus[j];
    const CMatrix& sm = ops.sigma_minus[j];
    h += params.omega_x * (sp * sm);
    h += params.g * (ops.a_dag * sm + ops.a * sp);
    h += params.g_prime * (ops.a * sm + ops.a_dag * sp);
  }
  return h;
}

cplx laser_amplitude(const ModelParams& params, double t) {
  const double phase = params.omega_d * t;
  const double c = std::cos(phase);
  const double s = std::sin(phase);
  return 0.5 * params.Omega * cplx(c, s) + 0.5 * params.Omega_prime * cplx(c, -s);
}

CMatrix laser_hamiltonian(const ModelParams& params, const Operators& ops, double t) {
  const cplx c = laser_amplitude(params, t);
  return c * ops.a + std::conj(c) * ops.a_dag;
}

SystemSpectrum system_energies(const CMatrix& hamiltonian, double degeneracy_tol) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hamiltonian);
  if (es.info() != Eigen::Success) throw NumericalError("system_energies: eigensolver did not converge");
  SystemSpectrum out{es.eigenvalues(), es.eigenvectors()};
  for (auto [begin, end] : cluster_sorted(out.energies, degeneracy_tol)) {
    if (end - begin > 1) canonicalize_subspace(out.vectors.middleCols(begin, end - begin));
  }
  fix_column_phases(out.vectors);
  return out;
}

}  // namespace dicke
