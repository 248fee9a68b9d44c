#pragma once

#include <utility>
#include <vector>

#include "dicke/floquet.hpp"
#include "dicke/linalg.hpp"
#include "dicke/model.hpp"

namespace dicke {

/// Thermal Ohmic environment, gamma(omega) = gamma omega / omega_0.
struct BathSpec {
  double gamma = 1e-3;
  double omega_0 = 1.0;
  double T = 0.1;
  double cutoff = 50.0;
  bool lamb_shift = false;

  static BathSpec from(const ModelParams& params);
  void validate() const;
};

double bose_occupation(double omega, double T);

/// Emission (omega > 0) and absorption (omega < 0) rate of the bath.
double chi(double omega, const BathSpec& bath);

/// Antisymmetric principal-value part sgn(omega) Re Gamma(|omega| + i0+),
/// with Re Gamma(w) = PV int_0^cutoff gamma(w') / (w - w') dw'.
double lamb_principal_value(double omega, const BathSpec& bath);

/// Lamb-shift transform; identically zero when bath.lamb_shift is false.
double xi(double omega, const BathSpec& bath);

/// Transition terms with |X_{n,k,nu}|^2 at or below this fraction of the
/// largest one are treated as zero by pauli_generator. Symmetry-forbidden
/// transitions (between collective-spin sectors) come out of the Floquet
/// construction at the 1e-20 level and would otherwise join closed classes.
inline constexpr double kTransitionNoiseFloor = 1e-16;

/// Pauli rate generator: d/dt rho_nn = sum_k L(n, k) rho_kk.
RMatrix pauli_generator(const TransitionTable& table, const BathSpec& bath);

/// Off-diagonal decay constants: d/dt rho_mn = -Z(m, n) rho_mn for m != n.
/// The diagonal is left at zero.
CMatrix offdiag_decay(const TransitionTable& table, const BathSpec& bath);

/// Re Z from the manifestly non-negative regrouped expression.
RMatrix offdiag_decay_real_regrouped(const TransitionTable& table, const BathSpec& bath);

/// Coefficients of the secular Floquet master equation.
struct RateSet {
  BathSpec bath;
  RMatrix pauli;
  CMatrix Z;
  // Pairs (m, n), m < n, with Re Z below 1e-12 gamma.
  std::vector<std::pair<int, int>> weak_coherences;

  double chi_at(const TransitionTable& table, int k, int n, int nu) const {
    return chi(table.frequency(k, n, nu), bath);
  }
  double xi_at(const TransitionTable& table, int k, int n, int nu) const {
    return xi(table.frequency(k, n, nu), bath);
  }
};

RateSet build_rates(const TransitionTable& table, const BathSpec& bath);

/// Normalized stationary vector of a rate generator.
///
/// Uniqueness is decided on the transition graph (edges with rate above
/// 1e-28 of the largest rate): exactly one closed communicating class must
/// exist, otherwise NumericalError. The populations on that class are
/// computed with the subtraction-free GTH state reduction, which keeps full
/// relative accuracy for exponentially small thermal populations.
RVector stationary_populations(const RMatrix& generator);

/// Long-time limit of exp(L t) p0. Each closed class keeps its GTH
/// populations, weighted by the probability that p0 ends up in it; with a
/// single closed class the result does not depend on p0.
RVector stationary_populations(const RMatrix& generator, const RVector& initial);

/// Closed communicating classes of the thresholded transition graph, each
/// sorted ascending; the classes are ordered by their smallest state.
std::vector<std::vector<int>> closed_classes(const RMatrix& generator);

/// Secular propagator V(tau) in the Floquet basis: the diagonal block evolves
/// with exp(L tau), each coherence (m, n) with exp(-Z(m, n) tau).
class SecularPropagator {
 public:
  SecularPropagator(RMatrix pauli, CMatrix decay);

  CMatrix apply(const CMatrix& state, double tau) const;
  RMatrix diagonal_map(double tau) const;
  const RMatrix& pauli() const { return pauli_; }
  const CMatrix& decay() const { return decay_; }

 private:
  RMatrix pauli_;
  CMatrix decay_;
};

CMatrix propagate(const CMatrix& state, double tau, const RMatrix& pauli, const CMatrix& decay);

}  // namespace dicke
