#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "gnlr/gn_direction.hpp"
#include "gnlr/operators.hpp"
#include "gnlr/solvers.hpp"

namespace gnlr {

/// Matrix completion instance with integer-valued ground-truth factors.
struct McInstance {
  FactorPair ground_truth;  // entries in {1, ..., 5}
  IndexSet omega;
  Vector b;  // observed entries in omega order, possibly noisy
  double noise_sigma = 0.0;
};

struct Metrics {
  double delta_f = 0.0;  // relative objective residual on omega
  double nmae = 0.0;     // normalized mean absolute error
  double delta_x = 0.0;  // mean absolute error after entrywise floor
};

/// Integer low-rank completion data: factors uniform over {1,...,5},
/// M = U V^T, omega sampled at the given fraction, b = M_omega + sigma *
/// N(0,1). Deterministic per seed.
McInstance gen_mc_integer(Index m, Index n, Index r, double fraction,
                          double sigma, std::uint64_t seed);

/// Clustered-spectrum approximation data.
struct ClusteredInstance {
  Matrix b;      // clean + sparse Gaussian noise at 10% Frobenius ratio
  Matrix clean;  // orthonormal factors times diag(sigma)
  Vector sigma;  // sigma_i = i^{-0.01}, i = 1..r
};

ClusteredInstance gen_lowrank_clustered(Index m, Index n, Index r,
                                        std::uint64_t seed);

/// Matrix sensing instance B = A(U V^T) + sigma * N(0, I).
struct SensingInstance {
  Problem problem;
  FactorPair ground_truth;
  bool underdetermined = false;  // l < r (m + n)
};

/// kind is "dense_gaussian" (l x mn iid N(0,1)/sqrt(l)) or
/// "sparse_gaussian" (same scaling, 10% density).
SensingInstance gen_sensing(Index m, Index n, Index r, Index l,
                            const std::string& kind, double sigma,
                            std::uint64_t seed);

/// delta_f = ||P_omega(U V^T) - B||_F / ||B||_F;
/// NMAE = sum |(UV^T)_ij - B_ij| / ((max B - min B) |omega|), 0 when the
/// observed range is degenerate; delta_x = mean |floor((UV^T)_ij) - B_ij|.
Metrics evaluate(const FactorPair& x, const McInstance& inst);

/// Disk round trip: <prefix>.obs.mtx (coordinate real), <prefix>.u.csv /
/// <prefix>.v.csv (dense CSV factors), <prefix>.meta (key=value).
void save_mc_instance(const McInstance& inst, const std::string& prefix);
McInstance load_mc_instance(const std::string& prefix);

}  // namespace gnlr
