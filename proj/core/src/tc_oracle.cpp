#include "dicke/tc_oracle.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "dicke/error.hpp"
#include "dicke/model.hpp"

namespace dicke::tc {

namespace {

constexpr double kTailLimit = 1e-8;

RMatrix annihilator(int levels) {
  RMatrix a = RMatrix::Zero(levels, levels);
  for (int n = 1; n < levels; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

// Q(eta) D(alpha)|k> on `levels` Fock states, real parameters.
RVector squeezed_displaced(double eta, double alpha, int k, int levels) {
  const RMatrix a = annihilator(levels);
  const RMatrix ad = a.transpose();
  const RMatrix d = RMatrix(alpha * (ad - a)).exp();
  const RMatrix q = RMatrix(0.5 * eta * (ad * ad - a * a)).exp();
  return q * d.col(k);
}

int internal_levels(int n, int n_ph, double kappa) {
  // the exponentials are accurate well below the truncation edge
  const int need = n + 40 + static_cast<int>(40.0 * kappa * kappa / std::max(1e-3, 1.0 - kappa * kappa));
  return std::max(n_ph + 1, need) + 20;
}

CVector assemble(const RVector& cavity_p, const RVector& cavity_m, const Eigen::Vector2d& p,
                 const Eigen::Vector2d& m, double sign, int n_ph) {
  const int levels = static_cast<int>(cavity_p.size());
  RVector full(2 * levels);
  for (int f = 0; f < levels; ++f) {
    full[2 * f] = (cavity_p[f] * p[0] + sign * cavity_m[f] * m[0]) / std::sqrt(2.0);
    full[2 * f + 1] = (cavity_p[f] * p[1] + sign * cavity_m[f] * m[1]) / std::sqrt(2.0);
  }
  const double tail = full.tail(2 * (levels - n_ph - 1)).squaredNorm();
  if (tail > kTailLimit * full.squaredNorm())
    throw NumericalError(fmt::format("tc_eigenstate: weight {:.3e} above n_ph = {}; increase n_ph", tail, n_ph));
  return full.head(2 * (n_ph + 1)).cast<cplx>();
}

}  // namespace

TCSolution TCSolution::make(double g, double Omega) {
  if (!(g > 0.0)) throw ConfigError("tc oracle: g must be > 0");
  if (!(Omega >= 0.0)) throw ConfigError("tc oracle: Omega must be >= 0");
  const double kappa = Omega / g;
  if (!(kappa < 1.0)) throw ConfigError(fmt::format("tc oracle: kappa = Omega/g = {} must be < 1", kappa));
  return {g, Omega, kappa, -0.25 * std::log1p(-kappa * kappa)};
}

double TCSolution::alpha(int n, int branch) const { return -branch * std::sqrt(static_cast<double>(n)) * kappa; }

double TCSolution::scale() const { return std::pow((1.0 - kappa) * (1.0 + kappa), 0.75); }

double TCSolution::energy(int n, int branch) const {
  if (n == 0) return 0.0;
  return branch * std::sqrt(static_cast<double>(n)) * g * scale();
}

TCPair tc_quasienergies(int n, double g, double Omega) {
  if (n < 1) throw ConfigError("tc_quasienergies: n must be >= 1");
  const TCSolution s = TCSolution::make(g, Omega);
  return {s.energy(n, +1), s.energy(n, -1)};
}

CMatrix tc_rotating_hamiltonian(double g, double Omega, int n_ph) {
  ModelParams p;
  p.n_ph = n_ph;
  p.max_dim = std::max(p.max_dim, 2 * (n_ph + 1));
  const Operators ops = build_operators(p);
  return g * (ops.a * ops.sigma_plus[0] + ops.a_dag * ops.sigma_minus[0]) + 0.5 * Omega * (ops.a + ops.a_dag);
}

Eigen::Vector2d tc_state_m(double kappa) {
  const double r = std::sqrt((1.0 - kappa) * (1.0 + kappa));
  return Eigen::Vector2d(std::sqrt(1.0 + r), -std::sqrt(1.0 - r)) / std::sqrt(2.0);
}

Eigen::Vector2d tc_state_p(double kappa) {
  const double r = std::sqrt((1.0 - kappa) * (1.0 + kappa));
  return Eigen::Vector2d(-std::sqrt(1.0 - r), std::sqrt(1.0 + r)) / std::sqrt(2.0);
}

CVector tc_eigenstate(int n, int branch, double g, double Omega, int n_ph) {
  if (n < 0) throw ConfigError("tc_eigenstate: n must be >= 0");
  if (branch != 1 && branch != -1) throw ConfigError("tc_eigenstate: branch must be +1 or -1");
  if (n_ph < n + 1) throw ConfigError("tc_eigenstate: n_ph too small for the requested manifold");
  const TCSolution s = TCSolution::make(g, Omega);
  const int levels = internal_levels(n, n_ph, s.kappa);
  const Eigen::Vector2d m = tc_state_m(s.kappa);
  const Eigen::Vector2d p = tc_state_p(s.kappa);
  if (n == 0) {
    const RVector cav = squeezed_displaced(s.eta, 0.0, 0, levels);
    // |psi_0> = Q(eta)|0>|M>, written through assemble with the P part empty
    return assemble(RVector::Zero(levels), cav, p, m, std::sqrt(2.0), n_ph);
  }
  const double alpha = s.alpha(n, branch);
  const RVector lower = squeezed_displaced(s.eta, alpha, n - 1, levels);
  const RVector upper = squeezed_displaced(s.eta, alpha, n, levels);
  return assemble(lower, upper, p, m, static_cast<double>(branch), n_ph);
}

CVector weak_driving_state(int n, int branch, double kappa, int n_ph) {
  if (!(kappa >= 0.0 && kappa <= 0.1)) throw ConfigError("weak_driving_state: requires 0 <= kappa <= 0.1");
  if (n < 0 || n_ph < n + 1) throw ConfigError("weak_driving_state: manifold outside the truncated space");
  CVector v = CVector::Zero(2 * (n_ph + 1));
  auto ket = [&](int fock, int excited) -> cplx& { return v[2 * fock + excited]; };
  if (n == 0) {
    ket(0, 0) = 1.0;
    ket(0, 1) = -0.5 * kappa;
    return v.normalized();
  }
  const double b = branch;
  const double root2 = std::sqrt(2.0);
  const double nn = n;
  ket(n - 1, 1) += 1.0 / root2;
  ket(n, 0) += b / root2;
  const double c = b * kappa / root2;
  if (n >= 2) ket(n - 2, 1) += c * std::sqrt(nn * (nn - 1.0));
  ket(n - 1, 0) += c * b * (nn - 0.5);
  ket(n, 1) -= c * (nn + 0.5);
  if (n + 1 <= n_ph) ket(n + 1, 0) -= c * b * std::sqrt(nn * (nn + 1.0));
  return v.normalized();
}

}  // namespace dicke::tc
