#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace dicke {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr cplx kI{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

// Largest |A - A^dagger| element divided by the largest |A| element.
double relative_hermiticity_defect(const CMatrix& a);

// max |U^dagger U - I| element.
double unitarity_defect(const CMatrix& u);

// exp(-i H dt) for Hermitian H via spectral decomposition.
CMatrix hermitian_propagator(const CMatrix& h, double dt);

// Index ranges [begin, end) of runs of sorted values whose consecutive
// gaps are below `tol`.
std::vector<std::pair<int, int>> cluster_sorted(const RVector& sorted_values, double tol);

// Replaces the columns of `block` (orthonormal, spanning a degenerate
// subspace) with a reproducible orthonormal basis of the same span:
// pivoted Gram-Schmidt of the projections of the standard basis vectors,
// taking the lowest index whose residual is within a factor 2 of the best.
void canonicalize_subspace(Eigen::Ref<CMatrix> block);

// Multiplies each column by a phase so that its largest-magnitude component
// (lowest index among near-ties) is real and positive.
void fix_column_phases(Eigen::Ref<CMatrix> columns);

}  // namespace dicke
