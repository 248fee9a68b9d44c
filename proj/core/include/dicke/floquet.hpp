#pragma once

#include <vector>

#include "dicke/linalg.hpp"
#include "dicke/model.hpp"

namespace dicke {

/// U(t_j, 0) at the sample times t_j = j T_d / n_steps, j = 0..n_steps-1,
/// together with the one-cycle propagator U(T_d, 0).
struct PropagatorSeries {
  double period = 0.0;
  std::vector<CMatrix> samples;
  CMatrix one_cycle;
  double max_unitarity_defect = 0.0;
};

/// Integrates the Schroedinger equation over one drive period with the
/// fourth-order Magnus (two-point Gauss-Legendre) exponential integrator.
/// Every step is an exact unitary exp(-i K dt) with Hermitian K.
PropagatorSeries one_cycle_propagator(const ModelParams& params, const Operators& ops);

struct StateLabel {
  int system_index = -1;  // index into SystemSpectrum
  int nu = 0;             // Fourier mode with E = eps + nu omega_d
  double energy = 0.0;    // system energy E_n
  double overlap = 0.0;   // |<eigvec|phi_tilde(nu)>|
  double residual = 0.0;  // |E - eps - nu omega_d|
  bool ambiguous = false;
};

struct FloquetBasis {
  double period = 0.0;
  double omega_d = 0.0;
  int n_fourier = 0;
  RVector quasienergy;             // in [-omega_d/2, omega_d/2)
  CMatrix initial_states;          // |psi_n(0)> = |phi_n(0)> as columns
  std::vector<CMatrix> modes;      // modes[nu + n_fourier] holds phi_tilde_n(nu) as columns
  RVector outside_weight;          // Fourier weight outside the cutoff, per state
  std::vector<StateLabel> labels;  // filled by label_states

  int n_states() const { return static_cast<int>(quasienergy.size()); }
  int dimension() const { return static_cast<int>(initial_states.rows()); }
  const CMatrix& mode(int nu) const { return modes[static_cast<std::size_t>(nu + n_fourier)]; }
  // phi_n(t) reconstructed from the retained Fourier modes, as columns.
  CMatrix periodic_states(double t) const;
};

inline constexpr double kMaxOutsideWeight = 1e-6;
inline constexpr double kQuasienergyClusterTol = 1e-9;

/// Floquet states from the one-cycle propagator: eigenphases folded into the
/// first Brillouin zone, degenerate clusters re-diagonalized against H_D,
/// Fourier components by DFT over the propagator samples.
/// Throws NumericalError when more than kMaxOutsideWeight of any state's
/// norm lies outside |nu| <= n_fourier.
FloquetBasis floquet_basis(const PropagatorSeries& series, const ModelParams& params,
                           const CMatrix& dicke_h);

struct LabelReport {
  std::vector<StateLabel> labels;
  bool bijective = true;
  std::vector<int> ambiguous;  // Floquet indices with a near-tie
  double max_residual = 0.0;
};

/// Assigns each Floquet state the H_D eigenstate and Fourier mode that
/// maximize |<v_m|phi_tilde_n(nu)>|. Ties within 10% are reported.
LabelReport label_states(const FloquetBasis& basis, const SystemSpectrum& spectrum);

/// X_{n,k,nu} = sum_mu <phi_tilde_n(mu - nu)| X |phi_tilde_k(mu)> for
/// nu in [-2 n_fourier, 2 n_fourier].
struct TransitionTable {
  int n_states = 0;
  int max_offset = 0;
  double omega_d = 0.0;
  RVector quasienergy;
  std::vector<CMatrix> elements;  // elements[nu + max_offset](n, k)

  cplx operator()(int n, int k, int nu) const {
    return elements[static_cast<std::size_t>(nu + max_offset)](n, k);
  }
  const CMatrix& offset(int nu) const { return elements[static_cast<std::size_t>(nu + max_offset)]; }
  // omega_{k n nu} = eps_k - eps_n + nu omega_d
  double frequency(int k, int n, int nu) const {
    return quasienergy[k] - quasienergy[n] + nu * omega_d;
  }
};

TransitionTable transition_operators(const FloquetBasis& basis, const CMatrix& coupling);

}  // namespace dicke
