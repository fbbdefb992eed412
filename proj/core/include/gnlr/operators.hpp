#pragma once

#include <Eigen/SparseCore>
#include <cstdint>
#include <utility>
#include <vector>

#include "gnlr/linalg.hpp"

namespace gnlr {

/// Sorted, duplicate-free set of (row, col) positions in an m x n matrix.
class IndexSet {
public:
  using Entry = std::pair<Index, Index>;

  IndexSet() = default;
  /// Validates bounds, sorts lexicographically, rejects duplicates.
  IndexSet(std::vector<Entry> entries, Index rows, Index cols);

  const std::vector<Entry>& entries() const { return entries_; }
  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  std::size_t size() const { return entries_.size(); }

  bool operator==(const IndexSet&) const = default;

private:
  std::vector<Entry> entries_;
  Index rows_ = 0;
  Index cols_ = 0;
};

/// Uniform sample of round(fraction * m * n) positions without replacement,
/// deterministic per seed.
IndexSet sample_index_set(Index m, Index n, double fraction,
                          std::uint64_t seed);

/// Measurement map A : R^{m x n} -> R^l with its adjoint. Vectorization is
/// column-major throughout. Immutable after construction.
class LinearOperator {
public:
  enum class Kind { identity, dense, selection, sparse_gaussian };

  /// Empty 0x0 identity; placeholder until a factory-made operator is
  /// assigned.
  LinearOperator() = default;

  static LinearOperator identity(Index m, Index n);
  static LinearOperator dense(Matrix a, Index m, Index n);
  static LinearOperator selection(IndexSet omega);

  Kind kind() const { return kind_; }
  Index in_rows() const { return m_; }
  Index in_cols() const { return n_; }
  Index out_len() const { return l_; }
  const IndexSet& omega() const { return omega_; }

  Vector apply(const Matrix& x) const;
  Matrix adjoint(const Vector& y) const;

  /// Operator norm ||A||. Exactly 1 for identity and selection kinds;
  /// otherwise a block power method on A^T A (block 8, cap 300 iterations,
  /// tolerance 1e-9 on the top Rayleigh quotient, deterministic start).
  double estimate_norm() const;

  friend LinearOperator make_sparse_gaussian(Index m, Index n, Index l,
                                             double density,
                                             std::uint64_t seed);

private:
  Kind kind_ = Kind::identity;
  Index m_ = 0, n_ = 0, l_ = 0;
  Matrix dense_a_;                      // dense kind: l x (m*n)
  Eigen::SparseMatrix<double> sparse_a_;  // sparse_gaussian kind
  IndexSet omega_;                      // selection kind
};

/// l x (m*n) sensing map with iid N(0,1)/sqrt(l) entries kept with the given
/// Bernoulli density. Deterministic per seed.
LinearOperator make_sparse_gaussian(Index m, Index n, Index l, double density,
                                    std::uint64_t seed);

}  // namespace gnlr
