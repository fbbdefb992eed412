#include "gnlr/objectives.hpp"

#include <cmath>

namespace gnlr {

SmoothObjective least_squares() {
  SmoothObjective obj;
  obj.value = [](const Vector& r) { return 0.5 * r.squaredNorm(); };
  obj.gradient = [](const Vector& r) { return r; };
  obj.l_phi = 1.0;
  obj.mu_phi = 1.0;
  // argmin_w 0.5||w||^2 + (rho/2)||w - q||^2 = rho q / (1 + rho)
  obj.prox = [](const Vector& q, double rho) {
    return Vector(rho / (1.0 + rho) * q);
  };
  return obj;
}

CompositeObjective::CompositeObjective(SmoothObjective phi_in,
                                       LinearOperator op_in, Vector b_in)
    : phi(std::move(phi_in)), op(std::move(op_in)), b(std::move(b_in)) {
  if (b.size() != op.out_len()) {
    throw DimensionMismatchError("CompositeObjective: |B| != operator output length");
  }
  check_finite(b, "CompositeObjective: B");
  op_norm = op.estimate_norm();
  lipschitz = phi.l_phi * op_norm * op_norm;
}

double CompositeObjective::value(const Matrix& u, const Matrix& v) const {
  return phi.value(op.apply(u * v.transpose()) - b);
}

Matrix phi_prime(const CompositeObjective& co, const Matrix& u,
                 const Matrix& v) {
  const Vector residual = co.op.apply(u * v.transpose()) - co.b;
  return co.op.adjoint(co.phi.gradient(residual));
}

std::pair<Matrix, Matrix> grad_blocks(const CompositeObjective& co,
                                      const Matrix& u, const Matrix& v) {
  const Matrix p = phi_prime(co, u, v);
  return {p * v, p.transpose() * u};
}

Matrix prox_l1(const Matrix& q, double t) {
  if (t < 0.0) throw ValidationError("t", "soft-threshold level must be >= 0");
  return q.unaryExpr([t](double x) {
    const double shrunk = std::abs(x) - t;
    return shrunk > 0.0 ? (x > 0.0 ? shrunk : -shrunk) : 0.0;
  });
}

}  // namespace gnlr
