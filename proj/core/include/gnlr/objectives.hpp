#pragma once

#include <functional>

#include "gnlr/linalg.hpp"
#include "gnlr/operators.hpp"

namespace gnlr {

/// Smooth convex cost phi on the residual vector, with its smoothness and
/// strong-convexity constants. Instances beyond least squares can be
/// supplied by the caller.
struct SmoothObjective {
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
  double l_phi = 1.0;   // smoothness constant L_phi
  double mu_phi = 0.0;  // strong convexity constant mu_phi

  /// Optional exact proximal map: argmin_w phi(w) + (rho/2) ||w - q||^2.
  /// Required by the ADMM W-step in prox mode.
  std::function<Vector(const Vector&, double /*rho*/)> prox;
};

/// phi(r) = 0.5 ||r||^2 with L = mu = 1 and a closed-form prox.
SmoothObjective least_squares();

/// The full cost Phi(U, V) = phi(A(U V^T) - B) with the Lipschitz constant
/// L = L_phi * ||A||^2 cached at construction.
struct CompositeObjective {
  CompositeObjective(SmoothObjective phi, LinearOperator op, Vector b);

  double value(const Matrix& u, const Matrix& v) const;

  SmoothObjective phi;
  LinearOperator op;
  Vector b;
  double op_norm;    // ||A||
  double lipschitz;  // L = L_phi * ||A||^2
};

/// Phi'(U V^T) = A*( grad phi( A(U V^T) - B ) ), an m x n matrix.
Matrix phi_prime(const CompositeObjective& co, const Matrix& u, const Matrix& v);

/// Gradient blocks g_u = Phi' V (m x r) and g_v = Phi'^T U (n x r);
/// ||grad Phi||_F^2 = ||g_u||_F^2 + ||g_v||_F^2.
std::pair<Matrix, Matrix> grad_blocks(const CompositeObjective& co,
                                      const Matrix& u, const Matrix& v);

/// Entrywise soft threshold sign(q) * max(|q| - t, 0).
Matrix prox_l1(const Matrix& q, double t);

}  // namespace gnlr
