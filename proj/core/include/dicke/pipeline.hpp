#pragma once

#include "dicke/bath_master.hpp"
#include "dicke/floquet.hpp"
#include "dicke/model.hpp"
#include "dicke/observables.hpp"

namespace dicke {

/// Everything the observables need at one parameter point.
struct SteadyState {
  ModelParams params;
  Operators ops;
  CMatrix dicke_h;
  SystemSpectrum system;
  FloquetBasis basis;
  LabelReport labels;
  TransitionTable table;
  BathSpec bath;
  RateSet rates;
  RVector initial;      // thermal H_D populations in the Floquet basis
  RVector populations;  // stationary Floquet populations
  OutputDecomposition output;
};

/// Floquet states, master-equation coefficients, stationary populations and
/// the output operator for one parameter set.
///
/// When the rate graph splits into several closed classes (conserved
/// collective-spin sectors for N > 1, or uncoupled emitters at g = 0) the
/// weight of each class is fixed by the thermal state of H_D at the bath
/// temperature, which is what the class weights are before the drive acts.
SteadyState solve_steady_state(const ModelParams& params);

/// Gibbs populations of H_D eigenstates at temperature T, ground cluster
/// shared evenly at T = 0.
RVector gibbs_weights(const RVector& energies, double T);

}  // namespace dicke
