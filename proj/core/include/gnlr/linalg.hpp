#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "gnlr/errors.hpp"

namespace gnlr {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Throws if any entry is NaN or Inf. Called at API boundaries (file
/// readers, generators, operator construction).
void check_finite(const Matrix& m, const char* what);
void check_finite(const Vector& v, const char* what);

/// Column-major vectorization and its inverse.
Vector vec(const Matrix& x);
Matrix unvec(const Vector& v, Index rows, Index cols);

/// Singular triple of a rank-r factorization: u (m x r) and v (n x r) have
/// orthonormal columns, sigma is nonincreasing and nonnegative. The sign
/// convention is: first nonzero entry of each column of u is nonnegative.
struct SvdTriple {
  Matrix u;
  Vector sigma;
  Matrix v;
};

/// Rank tolerance: x counts as rank deficient when
/// sigma_min <= 1e-12 * max(rows, cols) * sigma_max.
double rank_tol(const Matrix& x, double sigma_max);

/// Moore-Penrose pseudo-inverse of a full-column-rank matrix, computed via
/// economy QR (triangular solve against Q^T). Throws RankDeficientError.
Matrix pseudo_inverse(const Matrix& x);

/// P_x * m, or (I - P_x) * m when complement is set, where P_x = x x^dagger.
Matrix project(const Matrix& x, const Matrix& m, bool complement);

/// Economy QR with the diagonal of r made nonnegative. q has orthonormal
/// columns, r is upper triangular, q*r == x. Rank-deficient x yields zero
/// diagonal entries in r; no error is raised here.
std::pair<Matrix, Matrix> qr_economy(const Matrix& x);

/// Best rank-r approximation via block power iteration with per-sweep
/// orthonormalization and a final Rayleigh-Ritz extraction. Caps at 500
/// sweeps; converged when successive sigma change < 1e-10 relative.
SvdTriple truncated_svd(const Matrix& b, Index r);

/// Smallest positive and largest singular values.
std::pair<double, double> singular_extremes(const Matrix& x);

/// Rayleigh-Ritz extraction: QR of u and v, SVD of Q_u^T b Q_v, factors
/// rotated back. Recovers the singular triple of b exactly when span(u) and
/// span(v) contain the top-r singular subspaces.
SvdTriple rayleigh_ritz(const Matrix& u, const Matrix& v, const Matrix& b);

}  // namespace gnlr
