#include <doctest.h>

#include <Eigen/QR>
#include <gnlr/gn_direction.hpp>
#include <gnlr/objectives.hpp>

#include "test_util.hpp"

using namespace gnlr;
using testutil::gaussian_matrix;

namespace {

Matrix model_residual(const FactorPair& x, const Direction& d,
                      const Matrix& z) {
  return x.u * d.d_v.transpose() + d.d_u * x.v.transpose() - z;
}

double normal_equation_residual(const FactorPair& x, const Direction& d,
                                const Matrix& z) {
  const Matrix lhs1 = x.u.transpose() * x.u * d.d_v.transpose() +
                      x.u.transpose() * d.d_u * x.v.transpose();
  const Matrix lhs2 =
      x.u * d.d_v.transpose() * x.v + d.d_u * x.v.transpose() * x.v;
  return std::max((lhs1 - x.u.transpose() * z).norm(),
                  (lhs2 - z * x.v).norm());
}

/// Dense least-squares oracle: assemble the (m n) x r(m+n) linearization
/// matrix over vec(D_U), vec(D_V) and solve with a rank-revealing
/// decomposition, independent of the closed-form kernel under test.
double oracle_objective(const FactorPair& x, const Matrix& z) {
  const Index m = x.u.rows(), n = x.v.rows(), r = x.u.cols();
  Matrix j(m * n, r * (m + n));
  Matrix t = Matrix::Zero(m, n);
  for (Index c = 0; c < m * r; ++c) {
    t.row(c % m) = x.v.col(c / m).transpose();
    j.col(c) = vec(t);
    t.row(c % m).setZero();
  }
  for (Index c = 0; c < n * r; ++c) {
    t.col(c % n) = x.u.col(c / n);
    j.col(m * r + c) = vec(t);
    t.col(c % n).setZero();
  }
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(j);
  const Vector d = cod.solve(vec(z));
  return 0.5 * (j * d - vec(z)).squaredNorm();
}

}  // namespace

TEST_SUITE("gn_direction") {

TEST_CASE("zero Z gives a zero direction") {
  Rng rng(1);
  const FactorPair x{gaussian_matrix(rng, 5, 2), gaussian_matrix(rng, 4, 2)};
  const Direction d = gn_direction(x, Matrix::Zero(5, 4));
  CHECK(d.d_u.norm() == 0.0);
  CHECK(d.d_v.norm() == 0.0);
}

TEST_CASE("identity factors collapse the projectors") {
  Rng rng(2);
  const Matrix z = gaussian_matrix(rng, 2, 2);
  const FactorPair x{Matrix::Identity(2, 2), Matrix::Identity(2, 2)};
  const Direction d = gn_direction(x, z);
  CHECK((d.d_u - 0.5 * z).norm() <= 1e-12 * z.norm());
  CHECK((d.d_v.transpose() - 0.5 * z).norm() <= 1e-12 * z.norm());
  CHECK(normal_equation_residual(x, d, z) <= 1e-12 * z.norm());
}

TEST_CASE("normal equations and subproblem value on random instances") {
  Rng rng(3);
  for (int t = 0; t < 25; ++t) {
    const Index m = 4 + t % 5, n = 3 + t % 6, r = 1 + t % 3;
    const FactorPair x{gaussian_matrix(rng, m, r), gaussian_matrix(rng, n, r)};
    const Matrix z = gaussian_matrix(rng, m, n);
    const Direction d = gn_direction(x, z);
    CHECK(normal_equation_residual(x, d, z) <= 1e-9 * z.norm());
    const double value = 0.5 * model_residual(x, d, z).squaredNorm();
    CHECK(subproblem_value(x, z) == doctest::Approx(value).epsilon(1e-9));
  }
}

TEST_CASE("objective value matches a dense least-squares oracle") {
  Rng rng(4);
  const FactorPair x{gaussian_matrix(rng, 5, 2), gaussian_matrix(rng, 6, 2)};
  const Matrix z = gaussian_matrix(rng, 5, 6);
  const Direction d = gn_direction(x, z);
  const double mine = 0.5 * model_residual(x, d, z).squaredNorm();
  CHECK(mine == doctest::Approx(oracle_objective(x, z)).epsilon(1e-9));
}

TEST_CASE("model residual equals the doubly projected complement") {
  Rng rng(5);
  const FactorPair x{gaussian_matrix(rng, 6, 2), gaussian_matrix(rng, 5, 2)};
  const Matrix z = gaussian_matrix(rng, 6, 5);
  const Direction d = gn_direction(x, z);
  const Matrix expected = -project(x.u, Matrix(project(x.v, z.transpose(), true)
                                                   .transpose()),
                                   true);
  CHECK((model_residual(x, d, z) - expected).norm() <= 1e-9 * z.norm());
}

TEST_CASE("general family: formula instantiation at D_r = 0") {
  Rng rng(6);
  const FactorPair x{gaussian_matrix(rng, 5, 2), gaussian_matrix(rng, 4, 2)};
  const Matrix z = gaussian_matrix(rng, 5, 4);
  const Direction d = gn_direction_general(x, z, Matrix::Zero(2, 2));
  const Matrix u_pinv = pseudo_inverse(x.u);
  const Matrix v_pinv = pseudo_inverse(x.v);
  CHECK((d.d_v.transpose() - u_pinv * z).norm() <= 1e-12 * z.norm());
  const Matrix expect_u = project(x.u, Matrix(z * v_pinv.transpose()), true);
  CHECK((d.d_u - expect_u).norm() <= 1e-10 * z.norm());
}

TEST_CASE("general family reproduces the particular choice") {
  Rng rng(7);
  const FactorPair x{gaussian_matrix(rng, 6, 3), gaussian_matrix(rng, 5, 3)};
  const Matrix z = gaussian_matrix(rng, 6, 5);
  const Matrix d_hat =
      0.5 * pseudo_inverse(x.u) * z * pseudo_inverse(x.v).transpose();
  const Direction a = gn_direction(x, z);
  const Direction b = gn_direction_general(x, z, d_hat);
  CHECK((a.d_u - b.d_u).norm() <= 1e-12 * (1.0 + a.d_u.norm()));
  CHECK((a.d_v - b.d_v).norm() <= 1e-12 * (1.0 + a.d_v.norm()));
}

TEST_CASE("residual matrix is invariant across the D_r family") {
  Rng rng(8);
  const FactorPair x{gaussian_matrix(rng, 5, 2), gaussian_matrix(rng, 7, 2)};
  const Matrix z = gaussian_matrix(rng, 5, 7);
  const Direction a = gn_direction_general(x, z, gaussian_matrix(rng, 2, 2));
  const Direction b = gn_direction_general(x, z, gaussian_matrix(rng, 2, 2));
  CHECK((model_residual(x, a, z) - model_residual(x, b, z)).norm() <=
        1e-10 * z.norm());
  CHECK(normal_equation_residual(x, a, z) <= 1e-9 * z.norm());
  CHECK(normal_equation_residual(x, b, z) <= 1e-9 * z.norm());
}

TEST_CASE("subproblem value vanishes on the factor ranges") {
  Rng rng(9);
  const FactorPair x{gaussian_matrix(rng, 6, 2), gaussian_matrix(rng, 5, 2)};
  const Matrix in_u = x.u * gaussian_matrix(rng, 2, 5);
  CHECK(subproblem_value(x, in_u) <= 1e-12 * (1.0 + in_u.squaredNorm()));
  const Matrix in_v = gaussian_matrix(rng, 6, 2) * x.v.transpose();
  CHECK(subproblem_value(x, in_v) <= 1e-12 * (1.0 + in_v.squaredNorm()));
}

TEST_CASE("rank-deficient factors are rejected") {
  Matrix u(4, 2);
  u.col(0) << 1, 0, 0, 0;
  u.col(1) << 3, 0, 0, 0;
  const FactorPair x{u, Matrix::Identity(4, 2)};
  CHECK_THROWS_AS(gn_direction(x, Matrix::Identity(4, 4)), RankDeficientError);
}

TEST_CASE("symmetric_direction hand case and membership identity") {
  // u = e1, z = diag(2, 0, 0): D_U = (I - 0.5 e1 e1^T)(2 e1) = e1.
  Matrix u = Matrix::Zero(3, 1);
  u(0, 0) = 1;
  Matrix z = Matrix::Zero(3, 3);
  z(0, 0) = 2;
  const Matrix d = symmetric_direction(u, z);
  Matrix expect = Matrix::Zero(3, 1);
  expect(0, 0) = 1;
  CHECK((d - expect).norm() <= 1e-12);
  CHECK(symmetric_direction(u, Matrix::Zero(3, 3)).norm() == 0.0);

  Rng rng(10);
  const Matrix q = qr_economy(gaussian_matrix(rng, 8, 3)).first;
  Matrix zs = gaussian_matrix(rng, 8, 8);
  zs = 0.5 * (zs + zs.transpose()).eval();
  const Matrix q_pinv = pseudo_inverse(q);
  // D_r = 0.5 U^dagger Z (U^dagger)^T satisfies D_r + D_r^T = U^+ Z (U^+)^T.
  const Matrix d_r = 0.5 * q_pinv * zs * q_pinv.transpose();
  const Matrix rhs = q_pinv * zs * q_pinv.transpose();
  CHECK((d_r + d_r.transpose() - rhs).norm() <= 1e-10 * (1.0 + rhs.norm()));
  // And the produced direction decomposes accordingly.
  const Matrix dir = symmetric_direction(q, zs);
  const Matrix recomposed =
      project(q, Matrix(zs * q_pinv.transpose()), true) + q * d_r;
  CHECK((dir - recomposed).norm() <= 1e-10 * (1.0 + dir.norm()));

  Matrix asym = zs;
  asym(0, 1) += 1.0;
  CHECK_THROWS_AS(symmetric_direction(q, asym), AsymmetricInputError);
}

TEST_CASE("step_size_bound formula with unit spectra") {
  const FactorPair x{Matrix::Identity(2, 2), Matrix::Identity(2, 2)};
  // min{1, 1/(2*10), 3/(32*10)} = 0.009375.
  CHECK(step_size_bound(x, 10.0, 10.0, 1.0) ==
        doctest::Approx(0.009375).epsilon(1e-12));
  // Tiny gradients recover the full step.
  CHECK(step_size_bound(x, 1e-9, 1e-9, 1.0) == 1.0);
}

TEST_CASE("descent inequality and rank preservation at the bound") {
  Rng rng(11);
  for (int t = 0; t < 10; ++t) {
    const Index m = 6 + t % 4, n = 5 + t % 3, r = 2;
    const FactorPair x{gaussian_matrix(rng, m, r), gaussian_matrix(rng, n, r)};
    const CompositeObjective co(least_squares(),
                                LinearOperator::identity(m, n),
                                vec(gaussian_matrix(rng, m, n)));
    const Matrix p = phi_prime(co, x.u, x.v);
    auto [gu, gv] = grad_blocks(co, x.u, x.v);
    const double grad_norm =
        std::sqrt(gu.squaredNorm() + gv.squaredNorm());
    if (grad_norm <= 1e-10) continue;
    const double l = co.lipschitz;
    const Matrix z = -p / l;
    const Direction d = gn_direction(x, z);
    const double bound = step_size_bound(x, grad_norm, p.norm(), l);

    const auto [su_min, su_max] = singular_extremes(x.u);
    const auto [sv_min, sv_max] = singular_extremes(x.v);
    const double s_min = std::min(su_min, sv_min);
    const double s_max = std::max(su_max, sv_max);
    const double rate =
        s_min * s_min / (128.0 * l * std::pow(s_max, 4));

    for (const double alpha : {bound, bound / 2.0, bound / 10.0}) {
      const double lhs = co.value(x.u + alpha * d.d_u, x.v + alpha * d.d_v);
      const double rhs = co.value(x.u, x.v) -
                         alpha * rate * grad_norm * grad_norm;
      CHECK(lhs <= rhs + 1e-10 * std::abs(rhs));
    }
    const auto [su_next, ignored] =
        singular_extremes(Matrix(x.u + bound * d.d_u));
    const auto [sv_next, ignored2] =
        singular_extremes(Matrix(x.v + bound * d.d_v));
    CHECK(su_next >= 0.5 * su_min);
    CHECK(sv_next >= 0.5 * sv_min);
  }
}

}  // TEST_SUITE
