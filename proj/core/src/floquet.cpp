#include "dicke/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "dicke/error.hpp"

namespace dicke {

namespace {

constexpr double kUnitarityTol = 1e-10;

// Magnus step exponent over [t, t + dt] from the two Gauss-Legendre nodes.
CMatrix magnus4_exponent(const CMatrix& h_static, const ModelParams& params, const Operators& ops,
                         double t, double dt) {
  constexpr double offset = 0.28867513459481288225;  // sqrt(3)/6
  const CMatrix l1 = laser_hamiltonian(params, ops, t + (0.5 - offset) * dt);
  const CMatrix l2 = laser_hamiltonian(params, ops, t + (0.5 + offset) * dt);
  // [H2, H1] with H_i = H_D + L_i
  const CMatrix dl = l1 - l2;
  const CMatrix comm = h_static * dl - dl * h_static + l2 * l1 - l1 * l2;
  CMatrix k = h_static + 0.5 * (l1 + l2);
  k -= kI * (std::sqrt(3.0) * dt / 12.0) * comm;
  return 0.5 * (k + k.adjoint().eval());
}

// Ceiling on dt * ||H(t)|| per substep; keeps the fourth-order error term
// below the quasienergy tolerance for the default sample counts.
int substeps_for(const CMatrix& h_static, const ModelParams& params, double dt) {
  const double drive = (params.Omega + params.Omega_prime) * std::sqrt(static_cast<double>(params.n_ph));
  const double scale = h_static.cwiseAbs().rowwise().sum().maxCoeff() + drive;
  constexpr double kMaxPhase = 0.5;
  return std::max(1, static_cast<int>(std::ceil(dt * scale / kMaxPhase)));
}

// J^2 = J+ J- + Jz^2 - Jz for the collective emitter spin.
CMatrix total_spin_squared(const Operators& ops) {
  const Eigen::Index dim = ops.a.rows();
  CMatrix jp = CMatrix::Zero(dim, dim);
  CMatrix jz = CMatrix::Zero(dim, dim);
  for (std::size_t j = 0; j < ops.sigma_plus.size(); ++j) {
    jp += ops.sigma_plus[j];
    jz += 0.5 * (ops.sigma_plus[j] * ops.sigma_minus[j] - ops.sigma_minus[j] * ops.sigma_plus[j]);
  }
  return jp * jp.adjoint() + jz * jz - jz;
}

double fold(double eps, double omega_d) {
  const double half = 0.5 * omega_d;
  eps -= omega_d * std::floor((eps + half) / omega_d);
  if (eps >= half) eps -= omega_d;
  if (eps < -half) eps += omega_d;
  return eps;
}

}  // namespace

PropagatorSeries one_cycle_propagator(const ModelParams& params, const Operators& ops) {
  params.validate();
  const int dim = ops.space.dimension();
  const CMatrix h_static = dicke_hamiltonian(params, ops);
  PropagatorSeries series;
  series.period = params.period();
  series.samples.reserve(static_cast<std::size_t>(params.n_steps));
  const double dt = series.period / params.n_steps;
  const bool driven = params.Omega != 0.0 || params.Omega_prime != 0.0;

  CMatrix u = CMatrix::Identity(dim, dim);
  if (!driven) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h_static);
    if (es.info() != Eigen::Success) throw NumericalError("one_cycle_propagator: eigensolver failed");
    const CMatrix& v = es.eigenvectors();
    for (int j = 0; j <= params.n_steps; ++j) {
      const double t = j * dt;
      CVector phase = (-kI * es.eigenvalues().cast<cplx>() * t).array().exp();
      u = v * phase.asDiagonal() * v.adjoint();
      if (j < params.n_steps) series.samples.push_back(u);
    }
  } else {
    const int sub = substeps_for(h_static, params, dt);
    const double h = dt / sub;
    series.samples.push_back(u);
    for (int j = 0; j < params.n_steps; ++j) {
      for (int s = 0; s < sub; ++s) {
        const double t = j * dt + s * h;
        u = hermitian_propagator(magnus4_exponent(h_static, params, ops, t, h), h) * u;
      }
      if (j + 1 < params.n_steps) series.samples.push_back(u);
    }
  }
  series.one_cycle = u;
  for (const auto& s : series.samples)
    series.max_unitarity_defect = std::max(series.max_unitarity_defect, unitarity_defect(s));
  series.max_unitarity_defect = std::max(series.max_unitarity_defect, unitarity_defect(u));
  if (series.max_unitarity_defect > kUnitarityTol)
    throw NumericalError(fmt::format("propagator unitarity drift {:.3e} exceeds {:.0e}; increase n_steps",
                                     series.max_unitarity_defect, kUnitarityTol));
  return series;
}

CMatrix FloquetBasis::periodic_states(double t) const {
  CMatrix out = CMatrix::Zero(dimension(), n_states());
  for (int nu = -n_fourier; nu <= n_fourier; ++nu) out += std::exp(-kI * (nu * omega_d * t)) * mode(nu);
  return out;
}

namespace {

// a(j, nu + max_nu) = exp(2 pi i nu j / samples) / samples: applied to a
// matrix of samples as columns, yields the Fourier coefficients of
// sum_nu c_nu exp(-2 pi i nu j / samples).
CMatrix analysis_matrix(int samples, int max_nu) {
  CMatrix a(samples, 2 * max_nu + 1);
  for (int j = 0; j < samples; ++j)
    for (int nu = -max_nu; nu <= max_nu; ++nu) {
      const long long k = (static_cast<long long>(nu) * j) % samples;
      a(j, nu + max_nu) = std::polar(1.0 / samples, 2.0 * kPi * static_cast<double>(k) / samples);
    }
  return a;
}

}  // namespace

FloquetBasis floquet_basis(const PropagatorSeries& series, const ModelParams& params,
                           const CMatrix& dicke_h) {
  const CMatrix& u = series.one_cycle;
  const int dim = static_cast<int>(u.rows());
  if (series.samples.empty() || dim == 0) throw NumericalError("floquet_basis: empty propagator series");
  const double period = series.period;
  const double omega_d = 2.0 * kPi / period;

  Eigen::ComplexSchur<CMatrix> schur(u);
  if (schur.info() != Eigen::Success) throw NumericalError("floquet_basis: Schur decomposition failed");
  const CMatrix& q = schur.matrixU();
  const CVector lambda = schur.matrixT().diagonal();

  RVector eps(dim);
  for (int i = 0; i < dim; ++i) eps[i] = fold(-std::arg(lambda[i]) / period, omega_d);
  std::vector<int> order(static_cast<std::size_t>(dim));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return eps[x] < eps[y]; });
  RVector sorted(dim);
  for (int i = 0; i < dim; ++i) sorted[i] = eps[order[static_cast<std::size_t>(i)]];

  auto clusters = cluster_sorted(sorted, kQuasienergyClusterTol);
  // the zone is a circle: merge the last cluster into the first if they touch
  if (clusters.size() > 1 && sorted[0] + omega_d - sorted[dim - 1] < kQuasienergyClusterTol) {
    auto last = clusters.back();
    clusters.pop_back();
    std::vector<int> rotated;
    for (int i = last.first; i < last.second; ++i) rotated.push_back(order[static_cast<std::size_t>(i)]);
    for (int i = 0; i < last.first; ++i) rotated.push_back(order[static_cast<std::size_t>(i)]);
    order = rotated;
    const int shift = last.second - last.first;
    for (auto& c : clusters) {
      c.first += shift;
      c.second += shift;
    }
    clusters.front().first = 0;
  }

  CMatrix collective_spin;
  if (params.emitters > 1) collective_spin = total_spin_squared(build_operators(params));

  struct Entry {
    double eps;
    double energy;
    CVector vec;
  };
  std::vector<Entry> entries;
  entries.reserve(static_cast<std::size_t>(dim));
  for (auto [begin, end] : clusters) {
    const int k = end - begin;
    CMatrix block(dim, k);
    cplx mean = 0.0;
    for (int c = 0; c < k; ++c) {
      const int idx = order[static_cast<std::size_t>(begin + c)];
      block.col(c) = q.col(idx);
      mean += lambda[idx];
    }
    const double common = fold(-std::arg(mean) / period, omega_d);
    CMatrix projected = block.adjoint() * dicke_h * block;
    projected = 0.5 * (projected + projected.adjoint().eval());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(projected);
    if (es.info() != Eigen::Success) throw NumericalError("floquet_basis: cluster eigensolver failed");
    block = block * es.eigenvectors();
    for (auto [b, e] : cluster_sorted(es.eigenvalues(), kQuasienergyClusterTol)) {
      if (e - b < 2) continue;
      auto sub = block.middleCols(b, e - b);
      if (params.emitters > 1) {
        // separate collective-spin sectors, which neither H(t) nor X mix
        CMatrix spin = sub.adjoint() * collective_spin * sub;
        Eigen::SelfAdjointEigenSolver<CMatrix> ss(0.5 * (spin + spin.adjoint().eval()));
        sub = (sub * ss.eigenvectors()).eval();
        for (auto [sb, se] : cluster_sorted(ss.eigenvalues(), 1e-6)) {
          if (se - sb > 1) canonicalize_subspace(sub.middleCols(sb, se - sb));
        }
      } else {
        canonicalize_subspace(sub);
      }
    }
    for (int c = 0; c < k; ++c) entries.push_back({common, es.eigenvalues()[c], block.col(c)});
  }
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& x, const Entry& y) {
    return x.eps != y.eps ? x.eps < y.eps : x.energy < y.energy;
  });

  FloquetBasis basis;
  basis.period = period;
  basis.omega_d = omega_d;
  basis.n_fourier = params.n_fourier;
  basis.quasienergy.resize(dim);
  basis.initial_states.resize(dim, dim);
  for (int i = 0; i < dim; ++i) {
    basis.quasienergy[i] = entries[static_cast<std::size_t>(i)].eps;
    basis.initial_states.col(i) = entries[static_cast<std::size_t>(i)].vec;
  }
  fix_column_phases(basis.initial_states);

  const int n_samples = static_cast<int>(series.samples.size());
  const int f = params.n_fourier;
  if (n_samples < 4 * f)
    throw ConfigError(fmt::format("n_steps = {} is below 4*n_fourier = {}", n_samples, 4 * f));
  const double dt = period / n_samples;
  const Eigen::Index block = static_cast<Eigen::Index>(dim) * dim;
  CMatrix samples(block, n_samples);
  for (int j = 0; j < n_samples; ++j) {
    const double t = j * dt;
    const CVector phase = (kI * basis.quasienergy.cast<cplx>() * t).array().exp();
    const CMatrix phi = series.samples[static_cast<std::size_t>(j)] * basis.initial_states * phase.asDiagonal();
    samples.col(j) = Eigen::Map<const CVector>(phi.data(), block);
  }
  const CMatrix coeffs = samples * analysis_matrix(n_samples, f);
  basis.modes.reserve(static_cast<std::size_t>(2 * f + 1));
  for (int j = 0; j <= 2 * f; ++j) basis.modes.push_back(Eigen::Map<const CMatrix>(coeffs.col(j).data(), dim, dim));
  basis.outside_weight = RVector::Ones(dim);
  for (const auto& m : basis.modes) basis.outside_weight -= m.colwise().squaredNorm().transpose();
  const double worst = basis.outside_weight.maxCoeff();
  if (worst > kMaxOutsideWeight)
    throw NumericalError(fmt::format("Fourier cutoff n_fourier = {} leaves weight {:.3e} outside "
                                     "(limit {:.0e}); increase n_fourier and n_steps",
                                     f, worst, kMaxOutsideWeight));
  return basis;
}

LabelReport label_states(const FloquetBasis& basis, const SystemSpectrum& spectrum) {
  const int n = basis.n_states();
  const int f = basis.n_fourier;
  LabelReport report;
  report.labels.resize(static_cast<std::size_t>(n));
  std::vector<double> best(static_cast<std::size_t>(n), -1.0);
  std::vector<double> second(static_cast<std::size_t>(n), -1.0);
  for (int nu = -f; nu <= f; ++nu) {
    const RMatrix overlap = (spectrum.vectors.adjoint() * basis.mode(nu)).cwiseAbs();
    for (int s = 0; s < n; ++s) {
      for (Eigen::Index m = 0; m < overlap.rows(); ++m) {
        const double o = overlap(m, s);
        auto& b = best[static_cast<std::size_t>(s)];
        auto& sec = second[static_cast<std::size_t>(s)];
        if (o > b) {
          sec = b;
          b = o;
          auto& label = report.labels[static_cast<std::size_t>(s)];
          label.system_index = static_cast<int>(m);
          label.nu = nu;
        } else if (o > sec) {
          sec = o;
        }
      }
    }
  }
  std::vector<int> used(static_cast<std::size_t>(spectrum.energies.size()), 0);
  for (int s = 0; s < n; ++s) {
    auto& label = report.labels[static_cast<std::size_t>(s)];
    label.overlap = best[static_cast<std::size_t>(s)];
    label.energy = spectrum.energies[label.system_index];
    label.residual = std::abs(label.energy - basis.quasienergy[s] - label.nu * basis.omega_d);
    label.ambiguous = second[static_cast<std::size_t>(s)] >= 0.9 * label.overlap;
    if (label.ambiguous) report.ambiguous.push_back(s);
    if (used[static_cast<std::size_t>(label.system_index)]++ > 0) report.bijective = false;
    report.max_residual = std::max(report.max_residual, label.residual);
  }
  return report;
}

TransitionTable transition_operators(const FloquetBasis& basis, const CMatrix& coupling) {
  const int n = basis.n_states();
  const int f = basis.n_fourier;
  const int offsets = 4 * f + 1;
  TransitionTable table;
  table.n_states = n;
  table.max_offset = 2 * f;
  table.omega_d = basis.omega_d;
  table.quasienergy = basis.quasienergy;
  // <phi_n(t)|X|phi_k(t)> is a trigonometric polynomial of degree 2f, so
  // 4f+1 equidistant samples determine its coefficients exactly.
  const int dim = basis.dimension();
  const Eigen::Index state_block = static_cast<Eigen::Index>(dim) * n;
  CMatrix stacked(state_block, 2 * f + 1);
  for (int j = 0; j <= 2 * f; ++j)
    stacked.col(j) = Eigen::Map<const CVector>(basis.modes[static_cast<std::size_t>(j)].data(), state_block);
  // synthesis at t_m = m T / offsets is the adjoint of the analysis map, times offsets
  const CMatrix phis = stacked * (analysis_matrix(offsets, f).adjoint() * static_cast<double>(offsets));

  const Eigen::Index block = static_cast<Eigen::Index>(n) * n;
  CMatrix samples(block, offsets);
  for (int m = 0; m < offsets; ++m) {
    const Eigen::Map<const CMatrix> phi(phis.col(m).data(), dim, n);
    const CMatrix g = phi.adjoint() * (coupling * phi);
    samples.col(m) = Eigen::Map<const CVector>(g.data(), block);
  }
  const CMatrix coeffs = samples * analysis_matrix(offsets, 2 * f);
  table.elements.reserve(static_cast<std::size_t>(offsets));
  for (int j = 0; j < offsets; ++j) table.elements.push_back(Eigen::Map<const CMatrix>(coeffs.col(j).data(), n, n));
  return table;
}

}  // namespace dicke
