#pragma once

#include <Eigen/Dense>

#include "dicke/floquet.hpp"
#include "dicke/linalg.hpp"
#include "dicke/model.hpp"

namespace dicke {

using Matrix4c = Eigen::Matrix4cd;

/// Reduced two-emitter state in the order |gg>, |ge>, |eg>, |ee>.
struct EmitterState {
  Matrix4c rho;
  // Largest |rho_ij| off the main diagonal and antidiagonal.
  double x_form_residual = 0.0;
};

inline constexpr double kXFormTolerance = 1e-8;

double x_form_residual(const Matrix4c& rho);

/// Period average of the stationary state, sum_n p_n sum_nu |phi_n(nu)><phi_n(nu)|,
/// normalized to unit trace.
CMatrix time_averaged_state(const FloquetBasis& basis, const RVector& populations);

/// Partial trace over the cavity. Requires two emitters.
EmitterState reduce_to_emitters(const CMatrix& rho_bar, const HilbertSpace& space);

/// Concurrence. X-states use the closed form; anything else the general
/// spin-flip construction. Rejects matrices that are not density matrices.
double concurrence(const Matrix4c& rho);
double concurrence(const EmitterState& state);

double concurrence_x_form(const Matrix4c& rho);
double concurrence_spin_flip(const Matrix4c& rho);

/// Entanglement of formation from the concurrence, C in [0, 1].
double entanglement_of_formation(double concurrence);

}  // namespace dicke
