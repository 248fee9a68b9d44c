#pragma once

#include <cstdint>
#include <vector>

#include "dicke/linalg.hpp"

namespace dicke {

/// Physical and numerical parameters of the driven emitter-cavity system.
///
/// Energies and frequencies are in units of the reference frequency
/// omega_0 = 1, times in units of 1/omega_0, temperatures in energy units
/// (k_B = 1).
struct ModelParams {
  int emitters = 1;  // 1..3
  double omega_c = 1.0;
  double omega_x = 1.0;
  double omega_d = 1.0;
  double g = 0.0;            // corotating emitter-cavity coupling
  double g_prime = 0.0;      // counterrotating emitter-cavity coupling
  double Omega = 0.0;        // corotating laser intensity
  double Omega_prime = 0.0;  // counterrotating laser intensity

  int n_ph = 10;       // cavity Fock truncation (levels 0..n_ph)
  int n_fourier = 16;  // Fourier modes nu in [-n_fourier, n_fourier]
  int n_steps = 256;   // integrator steps (and DFT samples) per drive period

  double gamma = 1e-3;  // system-environment coupling scale
  double T = 0.1;       // environment temperature
  bool lamb_shift = false;
  double cutoff = 50.0;  // high-frequency cutoff of the Lamb-shift integral

  int max_dim = 2048;  // Hilbert-space dimension guard

  int dimension() const { return (n_ph + 1) << emitters; }
  double period() const;

  // Throws ConfigError naming the offending field.
  void validate() const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Basis ordering of the truncated Hilbert space Fock (x) spin^N.
///
/// index = fock * 2^N + spins, where bit (N-1-j) of `spins` is set when
/// emitter j is excited. The Fock index is the slow one.
class HilbertSpace {
 public:
  HilbertSpace(int n_ph, int emitters);

  int dimension() const { return dim_; }
  int n_ph() const { return n_ph_; }
  int emitters() const { return emitters_; }
  int spin_states() const { return 1 << emitters_; }

  int index(int fock, std::uint32_t spins) const;
  int fock_of(int index) const { return index >> emitters_; }
  std::uint32_t spins_of(int index) const { return static_cast<std::uint32_t>(index) & ((1u << emitters_) - 1u); }
  bool excited(int index, int emitter) const;
  // Total excitation number a^dagger a + sum sigma_+ sigma_-.
  int excitations(int index) const;

 private:
  int n_ph_;
  int emitters_;
  int dim_;
};

struct Operators {
  HilbertSpace space;
  CMatrix a;
  CMatrix a_dag;
  std::vector<CMatrix> sigma_plus;
  std::vector<CMatrix> sigma_minus;
  CMatrix X;  // -i (a - a^dagger), the cavity-environment coupling operator
};

Operators build_operators(const ModelParams& params);

CMatrix dicke_hamiltonian(const ModelParams& params, const Operators& ops);

// Laser coupling written as c(t) a + conj(c(t)) a^dagger.
cplx laser_amplitude(const ModelParams& params, double t);
CMatrix laser_hamiltonian(const ModelParams& params, const Operators& ops, double t);

struct SystemSpectrum {
  RVector energies;  // ascending
  CMatrix vectors;   // orthonormal columns
};

/// Eigen-decomposition of a Hermitian matrix with reproducible vectors:
/// degenerate clusters (gap below `degeneracy_tol`) get a canonical basis
/// and every column has its largest component real positive.
SystemSpectrum system_energies(const CMatrix& hamiltonian, double degeneracy_tol = 1e-9);

}  // namespace dicke
