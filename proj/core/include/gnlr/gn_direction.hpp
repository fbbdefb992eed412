#pragma once

#include "gnlr/linalg.hpp"

namespace gnlr {

/// The iterate X = [U, V] of the bilinear model U V^T.
struct FactorPair {
  Matrix u;  // m x r
  Matrix v;  // n x r
};

/// A Gauss-Newton search direction.
struct Direction {
  Matrix d_u;  // m x r
  Matrix d_v;  // n x r
};

/// Closed-form Gauss-Newton direction, the particular solution
///   D_U = (I - 0.5 P_U) Z (V^dagger)^T,  D_V^T = U^dagger Z (I - 0.5 P_V).
/// Evaluated without forming m x m projectors. Throws RankDeficientError.
Direction gn_direction(const FactorPair& x, const Matrix& z);

/// The general solution family parameterized by an arbitrary r x r block:
///   D_U = Pperp_U Z (V^dagger)^T + U D_r,  D_V^T = U^dagger Z - D_r V^T.
/// With d_hat_r = 0.5 U^dagger Z (V^dagger)^T this reproduces gn_direction.
Direction gn_direction_general(const FactorPair& x, const Matrix& z,
                               const Matrix& d_hat_r);

/// Optimal value of the linearized subproblem,
/// 0.5 || Pperp_U Z Pperp_V ||_F^2.
double subproblem_value(const FactorPair& x, const Matrix& z);

/// Symmetric direction D_U = (I - 0.5 P_U) Z (U^dagger)^T for z symmetric.
/// Throws AsymmetricInputError when ||z - z^T||_F > 1e-10 ||z||_F.
Matrix symmetric_direction(const Matrix& u, const Matrix& z);

/// Theoretical step-size bound
///   min{ 1, L sigma_min^3 / (2 ||grad Phi||_F),
///        3 sigma_min^4 / (32 sigma_max^2 ||Phi'||_F) }
/// with sigma_min/max taken over both factors.
double step_size_bound(const FactorPair& x, double grad_norm,
                       double phi_prime_norm, double l);

}  // namespace gnlr
