#include "gnlr/linalg.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>
#include <string>

#include "gnlr/rng.hpp"

namespace gnlr {

void check_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) {
    throw Error(std::string(what) + ": non-finite entry");
  }
}

void check_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) {
    throw Error(std::string(what) + ": non-finite entry");
  }
}

Vector vec(const Matrix& x) {
  return Eigen::Map<const Vector>(x.data(), x.size());
}

Matrix unvec(const Vector& v, Index rows, Index cols) {
  if (v.size() != rows * cols) {
    throw DimensionMismatchError("unvec: length " + std::to_string(v.size()) +
                                 " != " + std::to_string(rows) + "x" +
                                 std::to_string(cols));
  }
  return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

double rank_tol(const Matrix& x, double sigma_max) {
  return 1e-12 * static_cast<double>(std::max(x.rows(), x.cols())) * sigma_max;
}

namespace {

struct ThinQr {
  Matrix q;
  Matrix r;
};

ThinQr thin_qr(const Matrix& x) {
  Eigen::HouseholderQR<Matrix> qr(x);
  const Index n = x.cols();
  Matrix q = qr.householderQ() * Matrix::Identity(x.rows(), n);
  Matrix r = qr.matrixQR().topLeftCorner(n, n).triangularView<Eigen::Upper>();
  // Normalize so the diagonal of r is nonnegative.
  for (Index j = 0; j < n; ++j) {
    if (r(j, j) < 0.0) {
      r.row(j) = -r.row(j);
      q.col(j) = -q.col(j);
    }
  }
  return {std::move(q), std::move(r)};
}

void require_full_column_rank(const Matrix& x, const char* what) {
  Eigen::JacobiSVD<Matrix> svd(x);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  if (sv(sv.size() - 1) <= rank_tol(x, smax)) {
    throw RankDeficientError(std::string(what) + ": rank-deficient input");
  }
}

// First-nonzero-entry-nonnegative sign convention on the left factor, with
// the right factor flipped to match.
void fix_signs(SvdTriple& t) {
  for (Index j = 0; j < t.u.cols(); ++j) {
    const double colmax = t.u.col(j).cwiseAbs().maxCoeff();
    if (colmax == 0.0) continue;
    for (Index i = 0; i < t.u.rows(); ++i) {
      if (std::abs(t.u(i, j)) > 1e-12 * colmax) {
        if (t.u(i, j) < 0.0) {
          t.u.col(j) = -t.u.col(j);
          t.v.col(j) = -t.v.col(j);
        }
        break;
      }
    }
  }
}

}  // namespace

Matrix pseudo_inverse(const Matrix& x) {
  if (x.cols() > x.rows()) {
    throw DimensionMismatchError("pseudo_inverse: cols > rows");
  }
  require_full_column_rank(x, "pseudo_inverse");
  ThinQr qr = thin_qr(x);
  return qr.r.triangularView<Eigen::Upper>().solve(qr.q.transpose());
}

Matrix project(const Matrix& x, const Matrix& m, bool complement) {
  if (m.rows() != x.rows()) {
    throw DimensionMismatchError("project: row count mismatch");
  }
  const Matrix p = x * (pseudo_inverse(x) * m);
  return complement ? Matrix(m - p) : p;
}

std::pair<Matrix, Matrix> qr_economy(const Matrix& x) {
  if (x.cols() > x.rows()) {
    throw DimensionMismatchError("qr_economy: cols > rows");
  }
  ThinQr qr = thin_qr(x);
  return {std::move(qr.q), std::move(qr.r)};
}

SvdTriple truncated_svd(const Matrix& b, Index r) {
  if (r < 1 || r > std::min(b.rows(), b.cols())) {
    throw DimensionMismatchError("truncated_svd: rank out of range");
  }
  constexpr int kMaxSweeps = 500;
  constexpr double kSigmaTol = 1e-10;

  // Iterate on an oversampled block so convergence is governed by the gap
  // at index r + p rather than at r; only the leading r singular triples
  // are extracted and tested for convergence.
  const Index block = std::min(r + Index{10}, std::min(b.rows(), b.cols()));

  // Deterministic Gaussian start block; seed fixed so results are
  // reproducible across runs and processes.
  Rng rng(0x51d5eedULL);
  Matrix qv(b.cols(), block);
  for (Index j = 0; j < block; ++j) {
    for (Index i = 0; i < b.cols(); ++i) qv(i, j) = rng.gaussian();
  }
  qv = thin_qr(qv).q;

  Matrix qu;
  Vector sigma = Vector::Zero(r);
  Matrix ur, vr;
  bool converged = false;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    qu = thin_qr(b * qv).q;
    qv = thin_qr(b.transpose() * qu).q;
    Eigen::JacobiSVD<Matrix> small(qu.transpose() * b * qv,
                                   Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Vector next = small.singularValues().head(r);
    const double scale = std::max(next(0), 1e-300);
    ur = small.matrixU().leftCols(r);
    vr = small.matrixV().leftCols(r);
    if ((next - sigma).cwiseAbs().maxCoeff() < kSigmaTol * scale) {
      sigma = next;
      converged = true;
      break;
    }
    sigma = next;
  }
  if (!converged) {
    throw ConvergenceFailureError("truncated_svd: no convergence in 500 sweeps");
  }
  SvdTriple out{qu * ur, sigma, qv * vr};
  fix_signs(out);
  return out;
}

std::pair<double, double> singular_extremes(const Matrix& x) {
  Eigen::JacobiSVD<Matrix> svd(x);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  double smin = smax;
  for (Index i = sv.size() - 1; i >= 0; --i) {
    if (sv(i) > 0.0) {
      smin = sv(i);
      break;
    }
  }
  return {smin, smax};
}

SvdTriple rayleigh_ritz(const Matrix& u, const Matrix& v, const Matrix& b) {
  if (u.rows() != b.rows() || v.rows() != b.cols() || u.cols() != v.cols()) {
    throw DimensionMismatchError("rayleigh_ritz: shape mismatch");
  }
  auto [qu, ru] = qr_economy(u);
  auto [qv, rv] = qr_economy(v);
  const double du = ru.diagonal().cwiseAbs().maxCoeff();
  const double dv = rv.diagonal().cwiseAbs().maxCoeff();
  if (ru.diagonal().cwiseAbs().minCoeff() <= rank_tol(u, du) ||
      rv.diagonal().cwiseAbs().minCoeff() <= rank_tol(v, dv)) {
    throw RankDeficientError("rayleigh_ritz: rank-deficient factor");
  }
  Eigen::JacobiSVD<Matrix> small(qu.transpose() * b * qv,
                                 Eigen::ComputeFullU | Eigen::ComputeFullV);
  SvdTriple out{qu * small.matrixU(), small.singularValues(),
                qv * small.matrixV()};
  fix_signs(out);
  return out;
}

}  // namespace gnlr
