#pragma once

#include "dicke/linalg.hpp"

namespace dicke::tc {

// Closed-form solution of the resonantly driven single-emitter
// Jaynes-Cummings model in the rotating-wave approximation, in the frame
// rotating at the drive frequency:
//   H' = g (a sigma_+ + a^dagger sigma_-) + (Omega/2)(a + a^dagger).
// States live in the N = 1 basis of HilbertSpace (index = 2 fock + spin).

struct TCSolution {
  double g = 0.0;
  double Omega = 0.0;
  double kappa = 0.0;  // Omega / g
  double eta = 0.0;    // squeezing, exp(2 eta) = (1 - kappa^2)^{-1/2}

  static TCSolution make(double g, double Omega);

  double alpha(int n, int branch) const;  // branch = +1 / -1
  double energy(int n, int branch) const;
  double scale() const;                   // (1 - kappa^2)^{3/4}
};

struct TCPair {
  double plus = 0.0;
  double minus = 0.0;
};

/// E_{n,+-} = +- sqrt(n) g (1 - kappa^2)^{3/4}; requires 0 <= Omega < g, n >= 1.
TCPair tc_quasienergies(int n, double g, double Omega);

/// Rotating-frame Hamiltonian H'_TC on the truncated space.
CMatrix tc_rotating_hamiltonian(double g, double Omega, int n_ph);

/// Emitter states |M>, |P> in the (|->, |+>) basis. Normalized, <M|P> = -kappa.
Eigen::Vector2d tc_state_m(double kappa);
Eigen::Vector2d tc_state_p(double kappa);

/// Eigenvector of H'_TC for manifold n (n = 0 gives the ground state,
/// branch ignored). Built from squeezed displaced states Q(eta) D(alpha)|k>
/// with dense matrix exponentials on an internal space larger than n_ph;
/// throws NumericalError when more than 1e-8 of the weight lies above n_ph.
CVector tc_eigenstate(int n, int branch, double g, double Omega, int n_ph);

/// First-order weak-driving states, kappa <= 0.1.
CVector weak_driving_state(int n, int branch, double kappa, int n_ph);

}  // namespace dicke::tc
