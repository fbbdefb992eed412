#include "gnlr/operators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gnlr/rng.hpp"

namespace gnlr {

IndexSet::IndexSet(std::vector<Entry> entries, Index rows, Index cols)
    : entries_(std::move(entries)), rows_(rows), cols_(cols) {
  for (const auto& [i, j] : entries_) {
    if (i < 0 || i >= rows || j < 0 || j >= cols) {
      throw OutOfBoundsError("IndexSet: entry (" + std::to_string(i) + "," +
                             std::to_string(j) + ") out of bounds");
    }
  }
  std::sort(entries_.begin(), entries_.end());
  if (std::adjacent_find(entries_.begin(), entries_.end()) != entries_.end()) {
    throw DuplicateEntryError("IndexSet: duplicate entry");
  }
}

IndexSet sample_index_set(Index m, Index n, double fraction,
                          std::uint64_t seed) {
  if (fraction <= 0.0 || fraction > 1.0) {
    throw ValidationError("fraction", "must be in (0, 1]");
  }
  const auto total = static_cast<std::int64_t>(m) * n;
  const auto count =
      static_cast<std::int64_t>(std::llround(fraction * static_cast<double>(total)));
  Rng rng(seed);
  std::vector<IndexSet::Entry> entries;
  entries.reserve(static_cast<std::size_t>(count));
  for (std::int64_t lin : rng.sample_without_replacement(total, count)) {
    // Column-major linear index, consistent with vec().
    entries.emplace_back(static_cast<Index>(lin % m), static_cast<Index>(lin / m));
  }
  return IndexSet(std::move(entries), m, n);
}

LinearOperator LinearOperator::identity(Index m, Index n) {
  LinearOperator op;
  op.kind_ = Kind::identity;
  op.m_ = m;
  op.n_ = n;
  op.l_ = m * n;
  return op;
}

LinearOperator LinearOperator::dense(Matrix a, Index m, Index n) {
  if (a.cols() != m * n) {
    throw DimensionMismatchError("LinearOperator::dense: matrix must have m*n columns");
  }
  check_finite(a, "LinearOperator::dense");
  LinearOperator op;
  op.kind_ = Kind::dense;
  op.m_ = m;
  op.n_ = n;
  op.l_ = a.rows();
  op.dense_a_ = std::move(a);
  return op;
}

LinearOperator LinearOperator::selection(IndexSet omega) {
  LinearOperator op;
  op.kind_ = Kind::selection;
  op.m_ = omega.rows();
  op.n_ = omega.cols();
  op.l_ = static_cast<Index>(omega.size());
  op.omega_ = std::move(omega);
  return op;
}

LinearOperator make_sparse_gaussian(Index m, Index n, Index l, double density,
                                    std::uint64_t seed) {
  if (density <= 0.0 || density > 1.0) {
    throw ValidationError("density", "must be in (0, 1]");
  }
  if (l < 1) throw ValidationError("l", "must be >= 1");
  const double scale = 1.0 / std::sqrt(static_cast<double>(l));
  Rng rng(seed);
  std::vector<Eigen::Triplet<double>> triplets;
  for (Index i = 0; i < l; ++i) {
    for (Index j = 0; j < m * n; ++j) {
      if (rng.uniform() < density) {
        triplets.emplace_back(static_cast<int>(i), static_cast<int>(j),
                              scale * rng.gaussian());
      }
    }
  }
  LinearOperator op;
  op.kind_ = LinearOperator::Kind::sparse_gaussian;
  op.m_ = m;
  op.n_ = n;
  op.l_ = l;
  op.sparse_a_.resize(l, m * n);
  op.sparse_a_.setFromTriplets(triplets.begin(), triplets.end());
  op.sparse_a_.makeCompressed();
  return op;
}

Vector LinearOperator::apply(const Matrix& x) const {
  if (x.rows() != m_ || x.cols() != n_) {
    throw DimensionMismatchError("LinearOperator::apply: input shape mismatch");
  }
  switch (kind_) {
    case Kind::identity:
      return vec(x);
    case Kind::dense:
      return dense_a_ * vec(x);
    case Kind::sparse_gaussian:
      return sparse_a_ * vec(x);
    case Kind::selection: {
      Vector out(l_);
      Index k = 0;
      for (const auto& [i, j] : omega_.entries()) out(k++) = x(i, j);
      return out;
    }
  }
  throw Error("LinearOperator::apply: unreachable");
}

Matrix LinearOperator::adjoint(const Vector& y) const {
  if (y.size() != l_) {
    throw DimensionMismatchError("LinearOperator::adjoint: input length mismatch");
  }
  switch (kind_) {
    case Kind::identity:
      return unvec(y, m_, n_);
    case Kind::dense:
      return unvec(dense_a_.transpose() * y, m_, n_);
    case Kind::sparse_gaussian:
      return unvec(sparse_a_.transpose() * y, m_, n_);
    case Kind::selection: {
      Matrix out = Matrix::Zero(m_, n_);
      Index k = 0;
      for (const auto& [i, j] : omega_.entries()) out(i, j) = y(k++);
      return out;
    }
  }
  throw Error("LinearOperator::adjoint: unreachable");
}

double LinearOperator::estimate_norm() const {
  if (kind_ == Kind::identity || kind_ == Kind::selection) return 1.0;

  // Block power method on A^T A: a small subspace keeps convergence of the
  // top Rayleigh quotient fast even when the leading eigenvalues are nearly
  // degenerate (e.g. Gaussian sensing maps). Deterministic start: the
  // all-ones direction plus fixed-seed Gaussian companions.
  constexpr int kMaxIters = 300;
  constexpr double kTol = 1e-9;
  const Index dim = m_ * n_;
  const Index block = std::min<Index>(8, dim);
  Matrix q(dim, block);
  q.col(0).setOnes();
  Rng rng(0xA00DBEEFULL);
  for (Index j = 1; j < block; ++j) {
    for (Index i = 0; i < dim; ++i) q(i, j) = rng.gaussian();
  }
  q = Eigen::HouseholderQR<Matrix>(q).householderQ() *
      Matrix::Identity(dim, block);

  double lambda = 0.0;
  for (int it = 0; it < kMaxIters; ++it) {
    Matrix w(dim, block);
    for (Index j = 0; j < block; ++j) {
      w.col(j) = adjoint(apply(unvec(q.col(j), m_, n_))).reshaped();
    }
    const Matrix gram = q.transpose() * w;  // symmetric block x block
    Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
    const double next = eig.eigenvalues().maxCoeff();
    if (next <= 0.0 || w.norm() == 0.0) {
      throw Error("estimate_norm: zero operator");
    }
    q = Eigen::HouseholderQR<Matrix>(w).householderQ() *
        Matrix::Identity(dim, block);
    if (it > 0 && std::abs(next - lambda) <= kTol * std::max(next, 1e-300)) {
      return std::sqrt(next);
    }
    lambda = next;
  }
  throw ConvergenceFailureError("estimate_norm: power method did not converge");
}

}  // namespace gnlr
