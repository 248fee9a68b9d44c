#include "dicke/linalg.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "dicke/error.hpp"

namespace dicke {

double relative_hermiticity_defect(const CMatrix& a) {
  const double scale = a.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff() / scale;
}

double unitarity_defect(const CMatrix& u) {
  return (u.adjoint() * u - CMatrix::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff();
}

CMatrix hermitian_propagator(const CMatrix& h, double dt) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  if (es.info() != Eigen::Success) throw NumericalError("eigensolver failed in hermitian_propagator");
  CVector phases(h.rows());
  for (Eigen::Index i = 0; i < h.rows(); ++i) phases[i] = std::exp(-kI * es.eigenvalues()[i] * dt);
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

std::vector<std::pair<int, int>> cluster_sorted(const RVector& sorted_values, double tol) {
  std::vector<std::pair<int, int>> out;
  const int n = static_cast<int>(sorted_values.size());
  int begin = 0;
  for (int i = 1; i <= n; ++i) {
    if (i == n || sorted_values[i] - sorted_values[i - 1] >= tol) {
      out.emplace_back(begin, i);
      begin = i;
    }
  }
  return out;
}

void canonicalize_subspace(Eigen::Ref<CMatrix> block) {
  const Eigen::Index k = block.cols();
  if (k <= 1) return;
  const Eigen::Index dim = block.rows();
  CMatrix projector = block * block.adjoint();
  CMatrix basis(dim, k);
  for (Eigen::Index c = 0; c < k; ++c) {
    // residual of P e_i after removing the already chosen directions
    CMatrix residual = projector;
    if (c > 0) residual -= basis.leftCols(c) * (basis.leftCols(c).adjoint() * projector);
    RVector norms = residual.colwise().squaredNorm().transpose();
    const double best = norms.maxCoeff();
    Eigen::Index pick = 0;
    while (norms[pick] < 0.5 * best) ++pick;
    basis.col(c) = residual.col(pick) / std::sqrt(norms[pick]);
  }
  // one re-orthogonalization pass for round-off
  Eigen::HouseholderQR<CMatrix> qr(basis);
  CMatrix q = qr.householderQ() * CMatrix::Identity(dim, k);
  CMatrix r = q.adjoint() * basis;
  for (Eigen::Index c = 0; c < k; ++c) {
    const cplx d = r(c, c);
    if (std::abs(d) > 0.0) q.col(c) *= d / std::abs(d);
  }
  block = q;
}

void fix_column_phases(Eigen::Ref<CMatrix> columns) {
  for (Eigen::Index c = 0; c < columns.cols(); ++c) {
    auto col = columns.col(c);
    const double best = col.cwiseAbs().maxCoeff();
    if (best == 0.0) continue;
    Eigen::Index pick = 0;
    while (std::abs(col[pick]) < best * (1.0 - 1e-8)) ++pick;
    const cplx z = col[pick];
    col *= std::conj(z) / std::abs(z);
  }
}

}  // namespace dicke
