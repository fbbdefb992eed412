#include "gnlr/gn_direction.hpp"

#include <algorithm>
#include <cmath>

namespace gnlr {

namespace {

void check_shapes(const FactorPair& x, const Matrix& z) {
  if (x.u.cols() != x.v.cols()) {
    throw DimensionMismatchError("gn_direction: factor rank mismatch");
  }
  if (z.rows() != x.u.rows() || z.cols() != x.v.rows()) {
    throw DimensionMismatchError("gn_direction: Z shape mismatch");
  }
}

}  // namespace

Direction gn_direction(const FactorPair& x, const Matrix& z) {
  check_shapes(x, z);
  const Matrix u_pinv = pseudo_inverse(x.u);  // r x m
  const Matrix v_pinv = pseudo_inverse(x.v);  // r x n

  // D_U = W1 - 0.5 U (U^dagger W1), W1 = Z (V^dagger)^T; only r-sized
  // products appear.
  const Matrix w1 = z * v_pinv.transpose();           // m x r
  const Matrix d_u = w1 - 0.5 * x.u * (u_pinv * w1);  // m x r

  // D_V^T = T - 0.5 (T V) V^dagger, T = U^dagger Z.
  const Matrix t = u_pinv * z;                         // r x n
  const Matrix d_vt = t - 0.5 * (t * x.v) * v_pinv;    // r x n
  return {d_u, d_vt.transpose()};
}

Direction gn_direction_general(const FactorPair& x, const Matrix& z,
                               const Matrix& d_hat_r) {
  check_shapes(x, z);
  const Index r = x.u.cols();
  if (d_hat_r.rows() != r || d_hat_r.cols() != r) {
    throw DimensionMismatchError("gn_direction_general: d_hat_r must be r x r");
  }
  const Matrix u_pinv = pseudo_inverse(x.u);
  const Matrix v_pinv = pseudo_inverse(x.v);

  const Matrix w1 = z * v_pinv.transpose();                      // m x r
  const Matrix d_u = w1 - x.u * (u_pinv * w1) + x.u * d_hat_r;   // Pperp_U Z (V+)^T + U D_r
  const Matrix d_vt = u_pinv * z - d_hat_r * x.v.transpose();    // r x n
  return {d_u, d_vt.transpose()};
}

double subproblem_value(const FactorPair& x, const Matrix& z) {
  check_shapes(x, z);
  const Matrix u_pinv = pseudo_inverse(x.u);
  const Matrix v_pinv = pseudo_inverse(x.v);
  const Matrix left = z - x.u * (u_pinv * z);            // Pperp_U Z
  const Matrix both = left - (left * x.v) * v_pinv;      // Pperp_U Z Pperp_V
  return 0.5 * both.squaredNorm();
}

Matrix symmetric_direction(const Matrix& u, const Matrix& z) {
  if (z.rows() != z.cols() || z.rows() != u.rows()) {
    throw DimensionMismatchError("symmetric_direction: shape mismatch");
  }
  const double zn = z.norm();
  if ((z - z.transpose()).norm() > 1e-10 * zn) {
    throw AsymmetricInputError("symmetric_direction: Z is not symmetric");
  }
  const Matrix u_pinv = pseudo_inverse(u);
  const Matrix w1 = z * u_pinv.transpose();
  return w1 - 0.5 * u * (u_pinv * w1);
}

double step_size_bound(const FactorPair& x, double grad_norm,
                       double phi_prime_norm, double l) {
  if (l <= 0.0) throw ValidationError("l", "Lipschitz constant must be > 0");
  const auto [su_min, su_max] = singular_extremes(x.u);
  const auto [sv_min, sv_max] = singular_extremes(x.v);
  const double s_min = std::min(su_min, sv_min);
  const double s_max = std::max(su_max, sv_max);
  if (s_min <= rank_tol(x.u, s_max)) {
    throw RankDeficientError("step_size_bound: sigma_min vanished");
  }
  double bound = 1.0;
  if (grad_norm > 0.0) {
    bound = std::min(bound, l * s_min * s_min * s_min / (2.0 * grad_norm));
  }
  if (phi_prime_norm > 0.0) {
    bound = std::min(bound, 3.0 * std::pow(s_min, 4) /
                                (32.0 * s_max * s_max * phi_prime_norm));
  }
  return bound;
}

}  // namespace gnlr
