#include "dicke/entanglement.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <fmt/format.h>

#include "dicke/error.hpp"

namespace dicke {

namespace {

void require_density_matrix(const Matrix4c& rho) {
  const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  const double trace_err = std::abs(rho.trace() - 1.0);
  if (herm > 1e-8 || trace_err > 1e-8)
    throw ConfigError(fmt::format("not a density matrix: hermiticity defect {:.2e}, trace error {:.2e}", herm,
                                  trace_err));
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(rho);
  if (es.eigenvalues().minCoeff() < -1e-10)
    throw ConfigError(fmt::format("not a density matrix: eigenvalue {:.3e}", es.eigenvalues().minCoeff()));
}

double binary_entropy(double p) {
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return h;
}

}  // namespace

double x_form_residual(const Matrix4c& rho) {
  double r = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i != j && i + j != 3) r = std::max(r, std::abs(rho(i, j)));
  return r;
}

CMatrix time_averaged_state(const FloquetBasis& basis, const RVector& populations) {
  const int dim = basis.dimension();
  CMatrix rho = CMatrix::Zero(dim, dim);
  const CVector weights = populations.cwiseMax(0.0).cast<cplx>();
  for (const auto& mode : basis.modes) rho.noalias() += mode * weights.asDiagonal() * mode.adjoint();
  const double trace = rho.trace().real();
  if (!(trace > 0.0)) throw NumericalError("time_averaged_state: zero trace");
  rho /= trace;
  return 0.5 * (rho + rho.adjoint());
}

EmitterState reduce_to_emitters(const CMatrix& rho_bar, const HilbertSpace& space) {
  if (space.emitters() != 2)
    throw ConfigError(fmt::format("emitter state needs N = 2, got N = {}", space.emitters()));
  if (rho_bar.rows() != space.dimension() || rho_bar.cols() != space.dimension())
    throw ConfigError("reduce_to_emitters: density matrix does not match the Hilbert space");
  EmitterState out;
  out.rho.setZero();
  for (int f = 0; f <= space.n_ph(); ++f)
    for (std::uint32_t s = 0; s < 4; ++s)
      for (std::uint32_t t = 0; t < 4; ++t)
        out.rho(static_cast<int>(s), static_cast<int>(t)) += rho_bar(space.index(f, s), space.index(f, t));
  out.x_form_residual = x_form_residual(out.rho);
  return out;
}

double concurrence_x_form(const Matrix4c& rho) {
  const double a = std::abs(rho(0, 3)) - std::sqrt(std::max(0.0, rho(1, 1).real() * rho(2, 2).real()));
  const double b = std::abs(rho(1, 2)) - std::sqrt(std::max(0.0, rho(0, 0).real() * rho(3, 3).real()));
  return 2.0 * std::max({0.0, a, b});
}

double concurrence_spin_flip(const Matrix4c& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(rho);
  const Eigen::Vector4d ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Matrix4c root = es.eigenvectors() * ev.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
  Matrix4c yy = Matrix4c::Zero();
  yy(0, 3) = yy(3, 0) = -1.0;
  yy(1, 2) = yy(2, 1) = 1.0;
  const Matrix4c m = root * yy * root.conjugate() * yy;
  Eigen::JacobiSVD<Matrix4c> svd(m);
  const Eigen::Vector4d s = svd.singularValues();  // descending
  return std::max(0.0, s[0] - s[1] - s[2] - s[3]);
}

double concurrence(const Matrix4c& rho) {
  require_density_matrix(rho);
  if (x_form_residual(rho) < kXFormTolerance) return concurrence_x_form(rho);
  return concurrence_spin_flip(rho);
}

double concurrence(const EmitterState& state) { return concurrence(state.rho); }

double entanglement_of_formation(double c) {
  if (!(c >= -1e-12 && c <= 1.0 + 1e-12))
    throw ConfigError(fmt::format("concurrence must lie in [0, 1], got {}", c));
  c = std::clamp(c, 0.0, 1.0);
  if (c == 0.0) return 0.0;
  if (c == 1.0) return 1.0;
  const double eta = 0.5 * (1.0 + std::sqrt((1.0 - c) * (1.0 + c)));
  return binary_entropy(eta);
}

}  // namespace dicke
