#include "dicke/observables.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "dicke/error.hpp"

namespace dicke {

namespace {

constexpr double kWeightDropRatio = 1e-14;

// F(t) = sum_k F_k exp(-i k omega t) from samples of a trigonometric
// polynomial of degree `degree`, returned as coefficients[k + degree].
template <typename Sampler>
std::vector<CMatrix> fourier_coefficients(Sampler&& sample, int degree, double omega_d) {
  const int points = 2 * degree + 1;
  const double period = 2.0 * kPi / omega_d;
  std::vector<CMatrix> out;
  for (int j = 0; j < points; ++j) {
    const double t = period * j / points;
    const CMatrix value = sample(t);
    if (out.empty()) out.assign(static_cast<std::size_t>(points), CMatrix::Zero(value.rows(), value.cols()));
    for (int k = -degree; k <= degree; ++k) {
      const double angle = 2.0 * kPi * static_cast<double>((static_cast<long long>(k) * j) % points) / points;
      out[static_cast<std::size_t>(k + degree)] += std::polar(1.0 / points, angle) * value;
    }
  }
  return out;
}

double ohmic(double omega, double gamma, double omega_0) { return omega > 0.0 ? gamma * omega / omega_0 : 0.0; }

}  // namespace

int OutputDecomposition::bandwidth() const {
  int b = 0;
  for (const auto& t : terms) b = std::max(b, std::abs(t.nu));
  return b;
}

CMatrix OutputDecomposition::coefficients(double t) const {
  CMatrix w = CMatrix::Zero(n_states, n_states);
  for (int nu = -max_offset; nu <= max_offset; ++nu) {
    const CMatrix& block = by_offset[static_cast<std::size_t>(nu + max_offset)];
    if (block.isZero(0.0)) continue;
    w += std::exp(-kI * (nu * omega_d * t)) * block;
  }
  return w;
}

OutputDecomposition output_operator(const FloquetBasis& /*basis*/, const TransitionTable& table) {
  OutputDecomposition d;
  d.n_states = table.n_states;
  d.max_offset = table.max_offset;
  d.omega_d = table.omega_d;
  d.quasienergy = table.quasienergy;
  d.by_offset.assign(table.elements.size(), CMatrix::Zero(d.n_states, d.n_states));
  double largest = 0.0;
  std::vector<OutputTerm> all;
  for (int nu = -table.max_offset; nu <= table.max_offset; ++nu) {
    const CMatrix& x = table.offset(nu);
    for (int m = 0; m < d.n_states; ++m) {
      for (int n = 0; n < d.n_states; ++n) {
        // frequency eps_n - eps_m + nu omega_d, theta(0) = 0
        const double f = table.frequency(n, m, nu);
        if (!(f > 0.0)) continue;
        const cplx w = -kI * f * x(m, n);
        if (w == 0.0) continue;
        largest = std::max(largest, std::abs(w));
        all.push_back({m, n, nu, f, w});
      }
    }
  }
  for (const auto& t : all) {
    if (std::abs(t.weight) < kWeightDropRatio * largest) continue;
    d.terms.push_back(t);
    d.by_offset[static_cast<std::size_t>(t.nu + d.max_offset)](t.m, t.n) = t.weight;
  }
  return d;
}

CMatrix output_operator_matrix(const OutputDecomposition& decomp, const FloquetBasis& basis) {
  const CMatrix& psi = basis.initial_states;
  return psi * decomp.coefficients(0.0) * psi.adjoint();
}

double PeakList::evaluate(double omega) const {
  if (!(omega > 0.0)) return 0.0;
  double sum = 0.0;
  for (const auto& p : peaks) sum += p.lorentzian(omega).real();
  return ohmic(omega, gamma, omega_0) / kPi * sum;
}

Spectrum emission_spectrum(const OutputDecomposition& decomp, const RateSet& rates,
                           const RVector& populations, std::span<const double> omega_grid,
                           const ModelParams& params) {
  const int n = decomp.n_states;
  if (populations.size() != n || rates.Z.rows() != n)
    throw ConfigError("emission_spectrum: inputs belong to different parameter sets");
  Spectrum out;
  out.peaks.params = params;
  out.peaks.gamma = rates.bath.gamma;
  out.peaks.omega_0 = rates.bath.omega_0;
  std::vector<Peak> raw;

  // coherences (m != n): |w|^2 p_n / (Z_mn + i(omega - f))
  for (const auto& t : decomp.terms) {
    if (t.m == t.n) continue;
    const double p = populations[t.n];
    if (p == 0.0) continue;
    const cplx z = rates.Z(t.m, t.n);
    if (!(z.real() > 0.0))
      throw NumericalError(fmt::format("coherence ({}, {}) has no decay (Re Z = {:.3e})", t.m, t.n, z.real()));
    raw.push_back({t.m, t.n, t.nu, t.frequency, z, std::norm(t.weight) * p});
  }

  // Pauli block: sideband terms w_{k k nu}, evolved with exp(L tau)
  int max_nu = 0;
  for (const auto& t : decomp.terms)
    if (t.m == t.n) max_nu = std::max(max_nu, t.nu);
  if (max_nu > 0) {
    Eigen::EigenSolver<RMatrix> es(rates.pauli);
    if (es.info() != Eigen::Success) throw NumericalError("emission_spectrum: Pauli eigensolver failed");
    const CMatrix right = es.eigenvectors();
    const CMatrix left = right.inverse();
    const CVector lambda = es.eigenvalues();
    Eigen::Index zero_mode = 0;
    lambda.cwiseAbs().minCoeff(&zero_mode);
    for (int nu = 1; nu <= max_nu; ++nu) {
      CVector w = decomp.by_offset[static_cast<std::size_t>(nu + decomp.max_offset)].diagonal();
      if (w.isZero(0.0)) continue;
      const CVector source = w.cwiseProduct(populations.cast<cplx>());
      const double elastic = std::norm(source.sum());
      if (elastic > 0.0) out.peaks.coherent.push_back({nu * decomp.omega_d, elastic});
      for (Eigen::Index j = 0; j < lambda.size(); ++j) {
        if (j == zero_mode) continue;
        const cplx weight = (w.adjoint() * right.col(j)).value() * (left.row(j) * source).value();
        if (weight == 0.0) continue;
        raw.push_back({-1, -1, nu, nu * decomp.omega_d, -lambda[j], weight});
      }
    }
  }

  double largest = 0.0;
  for (const auto& p : raw) largest = std::max(largest, std::abs(p.weight));
  for (const auto& p : raw)
    if (std::abs(p.weight) >= kPeakPruneRatio * largest) out.peaks.peaks.push_back(p);
  std::stable_sort(out.peaks.peaks.begin(), out.peaks.peaks.end(),
                   [](const Peak& a, const Peak& b) { return a.center() < b.center(); });

  out.omega.assign(omega_grid.begin(), omega_grid.end());
  out.S.reserve(omega_grid.size());
  for (double w : omega_grid) out.S.push_back(out.peaks.evaluate(w));
  return out;
}

double emission_expectation(const OutputDecomposition& decomp, const RVector& populations) {
  double d = 0.0;
  for (const auto& t : decomp.terms) d += std::norm(t.weight) * populations[t.n];
  return d;
}

G2Parts g2_zero(const OutputDecomposition& decomp, const RVector& populations) {
  G2Parts parts;
  parts.denominator = emission_expectation(decomp, populations);
  if (!(parts.denominator >= 1e-300))
    throw NumericalError("g2 undefined: no emission in the stationary state");
  const int b = decomp.bandwidth();
  // Tr[W^dag W^dag W W P] is a trigonometric polynomial of degree 4b
  const int points = 4 * b + 1;
  const double period = 2.0 * kPi / decomp.omega_d;
  const CVector sqrt_p = populations.cwiseMax(0.0).cwiseSqrt().cast<cplx>();
  double sum = 0.0;
  for (int j = 0; j < points; ++j) {
    const CMatrix w = decomp.coefficients(period * j / points);
    sum += ((w * w) * sqrt_p.asDiagonal()).squaredNorm();
  }
  parts.numerator = sum / points;
  return parts;
}

std::vector<double> g2_tau(const OutputDecomposition& decomp, const RateSet& rates,
                           const RVector& populations, std::span<const double> tau_grid) {
  const int n = decomp.n_states;
  const double d = emission_expectation(decomp, populations);
  if (!(d >= 1e-300)) throw NumericalError("g2 undefined: no emission in the stationary state");
  const int b = decomp.bandwidth();
  const CMatrix p = populations.cwiseMax(0.0).cast<cplx>().asDiagonal();
  // theta(t) = W^dag W, beta(t) = W P W^dag, both of degree 2b
  const auto theta = fourier_coefficients(
      [&](double t) {
        const CMatrix w = decomp.coefficients(t);
        return CMatrix(w.adjoint() * w);
      },
      2 * b, decomp.omega_d);
  const auto beta = fourier_coefficients(
      [&](double t) {
        const CMatrix w = decomp.coefficients(t);
        return CMatrix(w * p * w.adjoint());
      },
      2 * b, decomp.omega_d);
  const SecularPropagator v(rates.pauli, rates.Z);
  const RVector& eps = decomp.quasienergy;

  std::vector<double> out;
  out.reserve(tau_grid.size());
  for (double tau : tau_grid) {
    if (!(tau >= 0.0)) throw ConfigError(fmt::format("g2_tau: delay must be >= 0, got {}", tau));
    const CMatrix diag_map = v.diagonal_map(tau).cast<cplx>();
    CMatrix coherence(n, n);  // exp((-Z(a, b) + i(eps_b - eps_a)) tau) for a != b
    for (int a = 0; a < n; ++a)
      for (int c = 0; c < n; ++c)
        coherence(a, c) = a == c ? cplx(0.0) : std::exp((-rates.Z(a, c) + kI * (eps[c] - eps[a])) * tau);
    cplx total = 0.0;
    for (int k = -2 * b; k <= 2 * b; ++k) {
      const CMatrix& th = theta[static_cast<std::size_t>(k + 2 * b)];
      const CMatrix& be = beta[static_cast<std::size_t>(-k + 2 * b)];
      // sum_{a != c} theta_{c a} V_{a c} beta_{a c}
      cplx term = (th.transpose().cwiseProduct(coherence).cwiseProduct(be)).sum();
      term += (th.diagonal().transpose() * diag_map * be.diagonal()).value();
      total += std::exp(-kI * (k * decomp.omega_d * tau)) * term;
    }
    out.push_back(total.real() / (d * d));
  }
  return out;
}

double output_flux(const OutputDecomposition& decomp, const RVector& populations, const BathSpec& bath) {
  const double ratio = bath.gamma / bath.omega_0;
  return 4.0 * kPi * kPi * ratio * ratio * emission_expectation(decomp, populations);
}

}  // namespace dicke
