#pragma once

#include <optional>
#include <span>
#include <vector>

#include "dicke/bath_master.hpp"
#include "dicke/floquet.hpp"
#include "dicke/linalg.hpp"
#include "dicke/model.hpp"

namespace dicke {

/// One positive-frequency term w |psi_m(t)><psi_n(t)| of the output operator
/// X_dot_minus, with frequency eps_n - eps_m + nu omega_d > 0.
struct OutputTerm {
  int m = 0;
  int n = 0;
  int nu = 0;
  double frequency = 0.0;
  cplx weight;
};

struct OutputDecomposition {
  int n_states = 0;
  int max_offset = 0;
  double omega_d = 0.0;
  RVector quasienergy;
  std::vector<OutputTerm> terms;
  // by_offset[nu + max_offset](m, n) = weight of (m, n, nu), zero if absent.
  std::vector<CMatrix> by_offset;

  // Largest |nu| carrying a nonzero weight.
  int bandwidth() const;
  // Coefficient matrix W(t) = sum_nu by_offset[nu] exp(-i nu omega_d t).
  CMatrix coefficients(double t) const;
};

OutputDecomposition output_operator(const FloquetBasis& basis, const TransitionTable& table);

/// X_dot_minus at t = 0 in the Hilbert-space basis.
CMatrix output_operator_matrix(const OutputDecomposition& decomp, const FloquetBasis& basis);

/// Lorentz line weight / (decay + i (omega - transition_frequency)).
struct Peak {
  int m = 0;  // coherence |psi_m><psi_n|
  int n = 0;  // m = n = -1 marks a Pauli-block (sideband) line
  int nu = 0;
  double transition_frequency = 0.0;
  cplx decay;
  cplx weight;

  double center() const { return transition_frequency - decay.imag(); }
  double half_width() const { return decay.real(); }
  cplx lorentzian(double omega) const {
    return weight / (decay + kI * (omega - transition_frequency));
  }
};

/// Elastic line at nu omega_d from the stationary coherent amplitude.
struct CoherentLine {
  double frequency = 0.0;
  double weight = 0.0;
};

struct PeakList {
  std::vector<Peak> peaks;
  std::vector<CoherentLine> coherent;
  ModelParams params;
  double gamma = 0.0;
  double omega_0 = 1.0;

  // S(omega) = gamma(omega)/pi Re sum peaks; zero for omega <= 0.
  double evaluate(double omega) const;
};

struct Spectrum {
  PeakList peaks;
  std::vector<double> omega;
  std::vector<double> S;
};

inline constexpr double kPeakPruneRatio = 1e-12;

Spectrum emission_spectrum(const OutputDecomposition& decomp, const RateSet& rates,
                           const RVector& populations, std::span<const double> omega_grid,
                           const ModelParams& params);

struct G2Parts {
  double numerator = 0.0;
  double denominator = 0.0;  // period-averaged <X_dot_plus X_dot_minus>
  double value() const { return numerator / (denominator * denominator); }
};

/// Zero-delay Glauber function with exact period averages.
/// Throws NumericalError when the denominator is below 1e-300.
G2Parts g2_zero(const OutputDecomposition& decomp, const RVector& populations);

/// Period-averaged <X_dot_plus X_dot_minus> = sum |w|^2 p_n.
double emission_expectation(const OutputDecomposition& decomp, const RVector& populations);

/// g2(tau) on a grid of non-negative delays.
std::vector<double> g2_tau(const OutputDecomposition& decomp, const RateSet& rates,
                           const RVector& populations, std::span<const double> tau_grid);

/// Period-averaged output photon flux 4 pi^2 (gamma/omega_0)^2 <X_dot_plus X_dot_minus>.
double output_flux(const OutputDecomposition& decomp, const RVector& populations,
                   const BathSpec& bath);

struct PeakWindow {
  double lo = 0.0;
  double hi = 0.0;
};

struct ShiftPoint {
  double Omega = 0.0;
  double center = 0.0;
  double intensity = 0.0;
  double runner_up = 0.0;  // strongest competing line in the window
  bool anticrossing = false;
};

struct ShiftFit {
  double offset = 0.0;
  double amplitude = 0.0;  // center = offset + amplitude [1 - (Omega/g)^2]^{3/4}
  std::vector<double> residuals;
  double max_residual = 0.0;  // over points not flagged as anticrossing
  double total_shift = 0.0;
};

struct ShiftTrack {
  std::vector<ShiftPoint> points;
  ShiftFit fit;
};

struct TrackerOptions {
  double anticrossing_ratio = 0.3;
  double merge_tol = 1e-6;
  bool counterrotating_drive = false;  // Omega_prime follows Omega
};

/// Follows the strongest coherence line inside `window` over a grid of
/// laser intensities and fits it to offset + c [1 - (Omega/g)^2]^{3/4}.
ShiftTrack peak_shift_tracker(const ModelParams& params, std::span<const double> Omega_grid,
                              PeakWindow window, const TrackerOptions& options = {});

}  // namespace dicke
