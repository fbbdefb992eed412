#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "gnlr/gn_direction.hpp"
#include "gnlr/linalg.hpp"
#include "gnlr/objectives.hpp"
#include "gnlr/operators.hpp"

namespace gnlr {

struct SolverConfig {
  int max_iters = 200;
  double eps1 = 1e-6;   // optimality / direction / feasibility tolerance
  double eps2 = 1e-4;   // zero-residual tolerance
  double c1 = 0.5;      // Armijo constant
  double beta = 0.3819660112501051;  // (sqrt(5)-1)/(sqrt(5)+1)
  double alpha0 = 1.0;
  double rho = 0.0;     // ADMM penalty; <= 0 selects the auto rule
  enum class WStep { prox, gradient };
  WStep option = WStep::prox;       // ADMM W-step: exact prox or gradient step
  double gamma_u = 1e-3;            // RAD-ADMM ridge weights
  double gamma_v = 1e-3;
  int linesearch_cap = 50;
  std::uint64_t seed = 0;
  bool zero_residual_stop = false;  // enable the residual stopping rule
  bool rho_adapt = false;           // bump rho on feasibility stalls
  bool l1_rho_scaled_dual = false;  // robust-l1: rho-scaled dual update

  bool operator==(const SolverConfig&) const = default;
};

enum class SolveStatus { converged, max_iters, rank_deficient, linesearch_exhausted };
enum class StopRule { none, cond1, cond2, cond3, cond4 };

std::string to_string(SolveStatus s);
std::string to_string(StopRule r);

struct IterRecord {
  int k = 0;
  double objective = 0.0;
  double grad_norm = 0.0;
  double alpha = 0.0;
  int linesearch = 0;
  double feasibility = std::numeric_limits<double>::quiet_NaN();
  double lagrangian = std::numeric_limits<double>::quiet_NaN();
  double wall_ms = 0.0;
  // In-memory diagnostics used by invariant checks; not part of the CSV.
  double w_change = std::numeric_limits<double>::quiet_NaN();
  double delta_sq = std::numeric_limits<double>::quiet_NaN();
  double lambda_change = std::numeric_limits<double>::quiet_NaN();
  double surrogate_margin = std::numeric_limits<double>::quiet_NaN();
};

struct IterationTrace {
  std::vector<IterRecord> records;
  SolveStatus status = SolveStatus::max_iters;
  StopRule rule = StopRule::none;

  /// CSV with header k,objective,grad_norm,alpha,linesearch,feasibility,
  /// lagrangian,wall_ms and a trailing #status= metadata row.
  std::string to_csv() const;
};

struct Problem {
  LinearOperator op;
  Vector b;
  SmoothObjective phi;
  Index rank = 1;
  Index m = 0, n = 0;
  bool l1_mode = false;

  void validate() const;
};

/// Norms feeding the four stopping rules. NaN disables a rule.
struct StopState {
  double grad_u_norm = std::numeric_limits<double>::quiet_NaN();  // ||Phi' V||_F
  double grad_v_norm = std::numeric_limits<double>::quiet_NaN();  // ||U^T Phi'||_F
  double dir_u_norm = std::numeric_limits<double>::quiet_NaN();
  double dir_v_norm = std::numeric_limits<double>::quiet_NaN();
  double feasibility = std::numeric_limits<double>::quiet_NaN();
  double residual_norm = std::numeric_limits<double>::quiet_NaN();
  double norm_b = 1.0;
};

/// First satisfied rule in order: optimality, direction, feasibility,
/// residual. Deterministic classifier; termination policy lives in the
/// solvers.
StopRule check_stop(const StopState& state, const SolverConfig& cfg);

/// Armijo backtracking on Phi along the GN direction: returns (alpha, i_k)
/// with alpha = beta^{i_k} alpha0. Throws LinesearchExhaustedError.
std::pair<double, int> linesearch(const CompositeObjective& co,
                                  const FactorPair& x, const Direction& dir,
                                  double grad_norm2, const SolverConfig& cfg);

struct SolveResult {
  FactorPair x;
  IterationTrace trace;
};

struct SymSolveResult {
  Matrix u;
  IterationTrace trace;
};

/// Linesearch Gauss-Newton. Objective trace is strictly nonincreasing.
SolveResult solve_lsgn(const Problem& prob, const FactorPair& x0,
                       const SolverConfig& cfg);

/// Full-step GN (alpha = 1, no linesearch). For an identity map the step is
/// the closed-form direction family with D_r = 0; for a general map it is
/// the exact minimum-norm solution of the linearized least-squares
/// subproblem in measurement space. Monotonicity is not guaranteed; the
/// trace records any increase.
SolveResult solve_fsgn(const Problem& prob, const FactorPair& x0,
                       const SolverConfig& cfg);

/// Alternating direction baseline on the quadratic surrogate: exact
/// least-squares half-steps for U then V.
SolveResult solve_adm(const Problem& prob, const FactorPair& x0,
                      const SolverConfig& cfg);

/// Gauss-Newton ADMM on the slack reformulation, W-step per cfg.option.
SolveResult solve_gn_admm(const Problem& prob, const FactorPair& x0,
                          const SolverConfig& cfg);

/// ADMM variant with ridge-regularized alternating least squares replacing
/// the GN step.
SolveResult solve_rad_admm(const Problem& prob, const FactorPair& x0,
                           const SolverConfig& cfg);

/// Symmetric linesearch GN for phi(A(U U^T) - B).
SymSolveResult solve_slsgn(const Problem& prob, const Matrix& u0,
                           const SolverConfig& cfg);

/// Robust l1 recovery min ||U V^T - B||_1 via the prox-ADMM recursion.
/// Requires an identity operator. Trace objective is the relative l1 value
/// ||U V^T - B||_1 / ||B||_1.
SolveResult solve_l1(const Problem& prob, const FactorPair& x0,
                     const SolverConfig& cfg);

/// Spectral initialization: r-truncated SVD of M = A*(B), factors balanced
/// by the square-root of the singular values.
FactorPair init_point(const Problem& prob);

/// Penalty parameter 1.01x the proven lower bound for the chosen W-step.
double auto_rho(const SmoothObjective& phi, SolverConfig::WStep option);

/// Divides b by s = sigma_1(A*(b)) in place and returns s (1 when b = 0).
/// The Armijo constant c1 = 0.5 presumes O(1) factor spectra; solving the
/// rescaled problem and multiplying the recovered factors by sqrt(s)
/// restores the original scale.
double normalize_scale(Problem& prob);

}  // namespace gnlr
