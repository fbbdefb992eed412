#include "gnlr/solvers.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <tuple>
#include <utility>

namespace gnlr {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

double stop_threshold(const SolverConfig& cfg, double norm_b) {
  return cfg.eps1 * std::max(1.0, norm_b);
}

/// Backtracking: smallest i with value_at(beta^i alpha0) satisfying the
/// sufficient-decrease test f0 - 0.5 c1 alpha decrease_sq.
std::pair<double, int> armijo(const std::function<double(double)>& value_at,
                              double f0, double decrease_sq,
                              const SolverConfig& cfg) {
  double alpha = cfg.alpha0;
  for (int i = 0; i <= cfg.linesearch_cap; ++i) {
    if (value_at(alpha) <= f0 - 0.5 * cfg.c1 * alpha * decrease_sq) {
      return {alpha, i};
    }
    alpha *= cfg.beta;
  }
  throw LinesearchExhaustedError("linesearch: no step accepted within cap");
}

std::string fmt_double(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iters: return "max_iters";
    case SolveStatus::rank_deficient: return "rank_deficient";
    case SolveStatus::linesearch_exhausted: return "linesearch_exhausted";
  }
  return "unknown";
}

std::string to_string(StopRule r) {
  switch (r) {
    case StopRule::none: return "none";
    case StopRule::cond1: return "cond1";
    case StopRule::cond2: return "cond2";
    case StopRule::cond3: return "cond3";
    case StopRule::cond4: return "cond4";
  }
  return "unknown";
}

std::string IterationTrace::to_csv() const {
  std::string out =
      "k,objective,grad_norm,alpha,linesearch,feasibility,lagrangian,wall_ms\n";
  for (const IterRecord& r : records) {
    out += std::to_string(r.k);
    out += ',';
    out += fmt_double(r.objective);
    out += ',';
    out += fmt_double(r.grad_norm);
    out += ',';
    out += fmt_double(r.alpha);
    out += ',';
    out += std::to_string(r.linesearch);
    out += ',';
    out += fmt_double(r.feasibility);
    out += ',';
    out += fmt_double(r.lagrangian);
    out += ',';
    out += fmt_double(r.wall_ms);
    out += '\n';
  }
  out += "#status=" + to_string(status) + ",rule=" + to_string(rule) + "\n";
  return out;
}

void Problem::validate() const {
  if (m != op.in_rows() || n != op.in_cols()) {
    throw DimensionMismatchError("Problem: operator shape != (m, n)");
  }
  if (b.size() != op.out_len()) {
    throw DimensionMismatchError("Problem: |B| != operator output length");
  }
  if (rank < 1 || rank > std::min(m, n)) {
    throw ValidationError("rank", "must satisfy 1 <= r <= min(m, n)");
  }
  check_finite(b, "Problem: B");
}

StopRule check_stop(const StopState& s, const SolverConfig& cfg) {
  const double t1 = stop_threshold(cfg, s.norm_b);
  const auto on = [](double x) { return !std::isnan(x); };
  if (on(s.grad_u_norm) && on(s.grad_v_norm) &&
      std::max(s.grad_u_norm, s.grad_v_norm) <= t1) {
    return StopRule::cond1;
  }
  if (on(s.dir_u_norm) && on(s.dir_v_norm) &&
      std::max(s.dir_u_norm, s.dir_v_norm) <= t1) {
    return StopRule::cond2;
  }
  if (on(s.feasibility) && s.feasibility <= t1) {
    return StopRule::cond3;
  }
  if (cfg.zero_residual_stop && on(s.residual_norm) &&
      s.residual_norm <= cfg.eps2 * std::max(1.0, s.norm_b)) {
    return StopRule::cond4;
  }
  return StopRule::none;
}

std::pair<double, int> linesearch(const CompositeObjective& co,
                                  const FactorPair& x, const Direction& dir,
                                  double grad_norm2, const SolverConfig& cfg) {
  const double f0 = co.value(x.u, x.v);
  return armijo(
      [&](double a) {
        return co.value(x.u + a * dir.d_u, x.v + a * dir.d_v);
      },
      f0, grad_norm2, cfg);
}

double auto_rho(const SmoothObjective& phi, SolverConfig::WStep option) {
  if (option == SolverConfig::WStep::prox) {
    return 1.01 * 0.5 *
           (std::sqrt(phi.mu_phi + 8.0 * phi.l_phi * phi.l_phi) + phi.mu_phi);
  }
  return 1.01 * 3.0 * phi.l_phi;
}

double normalize_scale(Problem& prob) {
  prob.validate();
  if (prob.b.norm() == 0.0) return 1.0;
  const Matrix m = prob.op.adjoint(prob.b);
  const double s = truncated_svd(m, 1).sigma(0);
  if (s <= 0.0) return 1.0;
  prob.b /= s;
  return s;
}

FactorPair init_point(const Problem& prob) {
  prob.validate();
  const Matrix m = prob.op.adjoint(prob.b);
  const SvdTriple t = truncated_svd(m, prob.rank);
  const Vector root = t.sigma.cwiseSqrt();
  FactorPair x;
  x.u = t.u * root.asDiagonal();
  x.v = t.v * root.asDiagonal();
  return x;
}

// ---------------------------------------------------------------------------
// Unconstrained GN family: Ls-GN, Fs-GN, and the alternating baseline.
// ---------------------------------------------------------------------------

SolveResult solve_lsgn(const Problem& prob, const FactorPair& x0,
                       const SolverConfig& cfg) {
  prob.validate();
  const CompositeObjective co(prob.phi, prob.op, prob.b);
  const double norm_b = prob.b.norm();
  FactorPair x = x0;
  IterationTrace trace;

  for (int k = 0; k < cfg.max_iters; ++k) {
    const auto t0 = Clock::now();
    IterRecord rec;
    rec.k = k;

    const Vector residual = prob.op.apply(x.u * x.v.transpose()) - prob.b;
    rec.objective = prob.phi.value(residual);
    const Matrix p = prob.op.adjoint(prob.phi.gradient(residual));
    const Matrix g_u = p * x.v;
    const Matrix g_v = p.transpose() * x.u;
    const double grad_sq = g_u.squaredNorm() + g_v.squaredNorm();
    rec.grad_norm = std::sqrt(grad_sq);

    StopState st;
    st.norm_b = norm_b;
    st.grad_u_norm = g_u.norm();
    st.grad_v_norm = g_v.norm();
    if (cfg.zero_residual_stop) st.residual_norm = residual.norm();
    StopRule rule = check_stop(st, cfg);
    if (rule != StopRule::none) {
      rec.wall_ms = ms_since(t0);
      trace.records.push_back(rec);
      trace.status = SolveStatus::converged;
      trace.rule = rule;
      return {x, trace};
    }

    const Matrix z = -p / co.lipschitz;
    Direction dir;
    try {
      dir = gn_direction(x, z);
    } catch (const RankDeficientError&) {
      rec.wall_ms = ms_since(t0);
      trace.records.push_back(rec);
      trace.status = SolveStatus::rank_deficient;
      return {x, trace};
    }

    st.dir_u_norm = dir.d_u.norm();
    st.dir_v_norm = dir.d_v.norm();
    rule = check_stop(st, cfg);
    if (rule != StopRule::none) {
      rec.wall_ms = ms_since(t0);
      trace.records.push_back(rec);
      trace.status = SolveStatus::converged;
      trace.rule = rule;
      return {x, trace};
    }

    double alpha = 0.0;
    int ik = 0;
    try {
      std::tie(alpha, ik) = linesearch(co, x, dir, grad_sq, cfg);
    } catch (const LinesearchExhaustedError&) {
      rec.wall_ms = ms_since(t0);
      trace.records.push_back(rec);
      trace.status = SolveStatus::linesearch_exhausted;
      return {x, trace};
    }
    x.u += alpha * dir.d_u;
    x.v += alpha * dir.d_v;
    rec.alpha = alpha;
    rec.linesearch = ik;
    rec.wall_ms = ms_since(t0);
    trace.records.push_back(rec);
  }
  trace.status = SolveStatus::max_iters;
  return {x, trace};
}

namespace {

/// Minimum-norm solution of the full linearized least-squares subproblem
///   min over (D_U, D_V) of  0.5 || A(D_U V^T + U D_V^T) + residual ||^2,
/// solved in measurement space via a complete orthogonal decomposition of
/// the l x r(m+n) Jacobian. For an identity map this coincides with the
/// closed-form direction family; for a general map it is the classical
/// Gauss-Newton step, which the norm-scaled surrogate direction only
/// approximates (and approximates poorly when ||A||^2 is far above the
/// restricted conditioning of A, stalling convergence).
Direction linearized_step(const LinearOperator& op, const FactorPair& x,
                          const Vector& residual) {
  const Index m = x.u.rows();
  const Index n = x.v.rows();
  const Index r = x.u.cols();
  const Index nu = m * r;
  const Index nv = n * r;
  Matrix j(op.out_len(), nu + nv);
  Matrix t = Matrix::Zero(m, n);
  for (Index c = 0; c < nu; ++c) {
    t.row(c % m) = x.v.col(c / m).transpose();
    j.col(c) = op.apply(t);
    t.row(c % m).setZero();
  }
  for (Index c = 0; c < nv; ++c) {
    t.col(c % n) = x.u.col(c / n);
    j.col(nu + c) = op.apply(t);
    t.col(c % n).setZero();
  }
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(j);
  const Vector d = cod.solve(-residual);
  Direction dir;
  dir.d_u = unvec(d.head(nu), m, r);
  dir.d_v = unvec(d.tail(nv), n, r);
  return dir;
}

}  // namespace

SolveResult solve_fsgn(const Problem& prob, const FactorPair& x0,
                       const SolverConfig& cfg) {
  prob.validate();
  const CompositeObjective co(prob.phi, prob.op, prob.b);
  const double norm_b = prob.b.norm();
  const Matrix d_r_zero = Matrix::Zero(prob.rank, prob.rank);
  const bool closed_form =
      prob.op.kind() == LinearOperator::Kind::identity;
  FactorPair x = x0;
  IterationTrace trace;

  for (int k = 0; k < cfg.max_iters; ++k) {
    const auto t0 = Clock::now();
    IterRecord rec;
    rec.k = k;

    const Vector residual = prob.op.apply(x.u * x.v.transpose()) - prob.b;
    rec.objective = prob.phi.value(residual);
    const Matrix p = prob.op.adjoint(prob.phi.gradient(residual));
    const Matrix g_u = p * x.v;
    const Matrix g_v = p.transpose() * x.u;
    rec.grad_norm = std::sqrt(g_u.squaredNorm() + g_v.squaredNorm());

    StopState st;
    st.norm_b = norm_b;
    st.grad_u_norm = g_u.norm();
    st.grad_v_norm = g_v.norm();
    if (cfg.zero_residual_stop) st.residual_norm = residual.norm();
    StopRule rule = check_stop(st, cfg);
    if (rule != StopRule::none) {
      rec.wall_ms = ms_since(t0);
      trace.records.push_back(rec);
      trace.status = SolveStatus::converged;
      trace.rule = rule;
      return {x, trace};
    }

    Direction dir;
    try {
      if (closed_form) {
        const Matrix z = -p / co.lipschitz;
        dir = gn_direction_general(x, z, d_r_zero);
      } else {
        dir = linearized_step(prob.op, x, residual);
      }
    } catch (const RankDeficientError&) {
      rec.wall_ms = ms_since(t0);
      trace.records.push_back(rec);
      trace.status = SolveStatus::rank_deficient;
      return {x, trace};
    }

    st.dir_u_norm = dir.d_u.norm();
    st.dir_v_norm = dir.d_v.norm();
    rule = check_stop(st, cfg);
    if (rule != StopRule::none) {
      rec.wall_ms = ms_since(t0);
      trace.records.push_back(rec);
      trace.status = SolveStatus::converged;
      trace.rule = rule;
      return {x, trace};
    }

    x.u += dir.d_u;
    x.v += dir.d_v;
    rec.alpha = 1.0;
    rec.wall_ms = ms_since(t0);
    trace.records.push_back(rec);
  }
  trace.status = SolveStatus::max_iters;
  return {x, trace};
}

SolveResult solve_adm(const Problem& prob, const FactorPair& x0,
                      const SolverConfig& cfg) {
  prob.validate();
  const CompositeObjective co(prob.phi, prob.op, prob.b);
  const double norm_b = prob.b.norm();
  FactorPair x = x0;
  IterationTrace trace;

  for (int k = 0; k < cfg.max_iters; ++k) {
    const auto t0 = Clock::now();
    IterRecord rec;
    rec.k = k;

    const Vector residual = prob.op.apply(x.u * x.v.transpose()) - prob.b;
    rec.objective = prob.phi.value(residual);
    const Matrix p = prob.op.adjoint(prob.phi.gradient(residual));
    const Matrix g_u = p * x.v;
    const Matrix g_v = p.transpose() * x.u;
    rec.grad_norm = std::sqrt(g_u.squaredNorm() + g_v.squaredNorm());

    StopState st;
    st.norm_b = norm_b;
    st.grad_u_norm = g_u.norm();
    st.grad_v_norm = g_v.norm();
    if (cfg.zero_residual_stop) st.residual_norm = residual.norm();
    StopRule rule = check_stop(st, cfg);
    if (rule != StopRule::none) {
      rec.wall_ms = ms_since(t0);
      trace.records.push_back(rec);
      trace.status = SolveStatus::converged;
      trace.rule = rule;
      return {x, trace};
    }

    // Alternating exact least squares against the shifted target
    // M = U V^T + Z: first U, then V with the fresh U.
    const Matrix m_target = x.u * x.v.transpose() - p / co.lipschitz;
    Matrix u_next, vt_next;
    try {
      u_next = m_target * pseudo_inverse(x.v).transpose();
      vt_next = pseudo_inverse(u_next) * m_target;
    } catch (const RankDeficientError&) {
      rec.wall_ms = ms_since(t0);
      trace.records.push_back(rec);
      trace.status = SolveStatus::rank_deficient;
      return {x, trace};
    }

    st.dir_u_norm = (u_next - x.u).norm();
    st.dir_v_norm = (vt_next.transpose() - x.v).norm();
    x.u = u_next;
    x.v = vt_next.transpose();
    rec.alpha = 1.0;
    rec.wall_ms = ms_since(t0);
    trace.records.push_back(rec);

    rule = check_stop(st, cfg);
    if (rule != StopRule::none) {
      trace.status = SolveStatus::converged;
      trace.rule = rule;
      return {x, trace};
    }
  }
  trace.status = SolveStatus::max_iters;
  return {x, trace};
}

// ---------------------------------------------------------------------------
// ADMM family on the slack reformulation min phi(W) s.t. A(UV^T) - W = B.
// ---------------------------------------------------------------------------

namespace {

/// Everything shared between the GN-ADMM and RAD-ADMM outer loops except the
/// (U, V) update, which is supplied as a callback returning the accepted
/// step size, the linesearch count, and the surrogate-decrease margin.
struct AdmmLoop {
  const Problem& prob;
  const SolverConfig& cfg;
  double rho;
  double l_a;  // ||A||^2

  // Updates x in place given the gradient kernel g = A*(E - W); returns
  // {alpha, i_k, surrogate_margin}. Throws RankDeficientError or
  // LinesearchExhaustedError.
  std::function<std::tuple<double, int, double>(
      FactorPair& x, const Matrix& g, const Vector& q_shift)>
      primal_step;
};

SolveResult run_admm(const AdmmLoop& loop, const FactorPair& x0) {
  const Problem& prob = loop.prob;
  const SolverConfig& cfg = loop.cfg;
  const double rho = loop.rho;
  const double norm_b = prob.b.norm();
  const bool use_prox = cfg.option == SolverConfig::WStep::prox;
  if (use_prox && !prob.phi.prox) {
    throw ValidationError("option",
                          "prox W-step requires SmoothObjective.prox");
  }

  FactorPair x = x0;
  Vector w = prob.op.apply(x.u * x.v.transpose()) - prob.b;
  Vector lam = Vector::Zero(prob.op.out_len());
  IterationTrace trace;

  double rho_k = rho;
  std::vector<double> feas_hist;

  for (int k = 0; k < cfg.max_iters; ++k) {
    const auto t0 = Clock::now();
    IterRecord rec;
    rec.k = k;

    const Vector y = prob.op.apply(x.u * x.v.transpose()) - prob.b;  // A(UV)-B
    const Vector slack = y - w;                                      // feas gap
    const double feas = slack.norm();
    rec.feasibility = feas;
    rec.lagrangian = prob.phi.value(w) + lam.dot(slack) +
                     0.5 * rho_k * slack.squaredNorm();
    rec.objective = prob.phi.value(y);

    const Matrix p = prob.op.adjoint(prob.phi.gradient(y));
    const Matrix g_u = p * x.v;
    const Matrix g_v = p.transpose() * x.u;
    rec.grad_norm = std::sqrt(g_u.squaredNorm() + g_v.squaredNorm());

    // Terminate when feasibility holds together with one of the
    // optimality/direction/residual rules.
    StopState st_feas;
    st_feas.norm_b = norm_b;
    st_feas.feasibility = feas;
    const bool feas_ok = check_stop(st_feas, cfg) == StopRule::cond3;

    StopState st;
    st.norm_b = norm_b;
    st.grad_u_norm = g_u.norm();
    st.grad_v_norm = g_v.norm();
    if (cfg.zero_residual_stop) st.residual_norm = y.norm();
    const StopRule rule = check_stop(st, cfg);
    if (feas_ok && rule != StopRule::none) {
      rec.wall_ms = ms_since(t0);
      trace.records.push_back(rec);
      trace.status = SolveStatus::converged;
      trace.rule = rule;
      return {x, trace};
    }

    // Primal step against Q(U, V) = 0.5 || A(UV^T) - W - B + Lambda/rho ||^2.
    const Vector q_shift = w + prob.b - lam / rho_k;  // A(UV^T) minus this
    const Vector e_minus_w = y - w + lam / rho_k;
    const Matrix g = prob.op.adjoint(e_minus_w);
    rec.delta_sq = (x.u.transpose() * g).squaredNorm() + (g * x.v).squaredNorm();

    double alpha = 0.0;
    int ik = 0;
    try {
      std::tie(alpha, ik, rec.surrogate_margin) =
          loop.primal_step(x, g, q_shift);
    } catch (const RankDeficientError&) {
      rec.wall_ms = ms_since(t0);
      trace.records.push_back(rec);
      trace.status = SolveStatus::rank_deficient;
      return {x, trace};
    } catch (const LinesearchExhaustedError&) {
      rec.wall_ms = ms_since(t0);
      trace.records.push_back(rec);
      trace.status = SolveStatus::linesearch_exhausted;
      return {x, trace};
    }
    rec.alpha = alpha;
    rec.linesearch = ik;

    // W-step, then dual ascent.
    const Vector y_next = prob.op.apply(x.u * x.v.transpose()) - prob.b;
    Vector w_next;
    if (use_prox) {
      w_next = prob.phi.prox(y_next + lam / rho_k, rho_k);
    } else {
      w_next = (prob.phi.l_phi * w - prob.phi.gradient(w) + lam +
                rho_k * y_next) /
               (rho_k + prob.phi.l_phi);
    }
    const Vector lam_next = lam + rho_k * (y_next - w_next);

    rec.w_change = (w_next - w).norm();
    rec.lambda_change = (lam_next - lam).norm();
    w = w_next;
    lam = lam_next;

    // Optional penalty adaptation: bump rho when feasibility stalls.
    feas_hist.push_back(feas);
    if (cfg.rho_adapt && k >= 10 &&
        feas > 0.95 * feas_hist[static_cast<std::size_t>(k - 10)] &&
        rho_k < 1e6) {
      rho_k *= 1.1;
    }

    rec.wall_ms = ms_since(t0);
    trace.records.push_back(rec);
  }
  trace.status = SolveStatus::max_iters;
  return {x, trace};
}

}  // namespace

SolveResult solve_gn_admm(const Problem& prob, const FactorPair& x0,
                          const SolverConfig& cfg) {
  prob.validate();
  const double a_norm = prob.op.estimate_norm();
  AdmmLoop loop{prob, cfg,
                cfg.rho > 0.0 ? cfg.rho : auto_rho(prob.phi, cfg.option),
                a_norm * a_norm};

  loop.primal_step = [&prob, &cfg, &loop](FactorPair& x, const Matrix& g,
                                          const Vector& q_shift)
      -> std::tuple<double, int, double> {
    const Matrix z = -g / loop.l_a;
    const Direction dir = gn_direction(x, z);
    const double delta_sq =
        (x.u.transpose() * g).squaredNorm() + (g * x.v).squaredNorm();
    const auto q_at = [&](const Matrix& u, const Matrix& v) {
      return 0.5 *
             (prob.op.apply(u * v.transpose()) - q_shift).squaredNorm();
    };
    const double q0 = q_at(x.u, x.v);
    const auto [alpha, ik] = armijo(
        [&](double a) { return q_at(x.u + a * dir.d_u, x.v + a * dir.d_v); },
        q0, delta_sq, cfg);
    x.u += alpha * dir.d_u;
    x.v += alpha * dir.d_v;
    return {alpha, ik, std::numeric_limits<double>::quiet_NaN()};
  };
  return run_admm(loop, x0);
}

SolveResult solve_rad_admm(const Problem& prob, const FactorPair& x0,
                           const SolverConfig& cfg) {
  prob.validate();
  const double a_norm = prob.op.estimate_norm();
  AdmmLoop loop{prob, cfg,
                cfg.rho > 0.0 ? cfg.rho : auto_rho(prob.phi, cfg.option),
                a_norm * a_norm};
  const Index r = prob.rank;

  loop.primal_step = [&prob, &cfg, &loop, r](FactorPair& x, const Matrix& g,
                                             const Vector& q_shift)
      -> std::tuple<double, int, double> {
    // Ridge-regularized alternating solves against M = U V^T + Z,
    // Z = -g / ||A||^2.
    const Matrix m_target = x.u * x.v.transpose() - g / loop.l_a;
    const Matrix eye = Matrix::Identity(r, r);
    const auto q_at = [&](const Matrix& u, const Matrix& v) {
      return 0.5 *
             (prob.op.apply(u * v.transpose()) - q_shift).squaredNorm();
    };
    const double q0 = q_at(x.u, x.v);

    const Matrix gram_v = x.v.transpose() * x.v + cfg.gamma_u * eye;
    const Matrix u_next =
        gram_v.ldlt()
            .solve((m_target * x.v + cfg.gamma_u * x.u).transpose())
            .transpose();
    const Matrix gram_u = u_next.transpose() * u_next + cfg.gamma_v * eye;
    const Matrix vt_next = gram_u.ldlt().solve(u_next.transpose() * m_target +
                                               cfg.gamma_v * x.v.transpose());

    const double du_sq = (u_next - x.u).squaredNorm();
    const double dv_sq = (vt_next.transpose() - x.v).squaredNorm();
    x.u = u_next;
    x.v = vt_next.transpose();
    const double q1 = q_at(x.u, x.v);
    // Guaranteed surrogate decrease margin; nonnegative up to roundoff.
    const double margin = q0 - q1 -
                          0.5 * loop.l_a * cfg.gamma_u * du_sq -
                          0.5 * loop.l_a * cfg.gamma_v * dv_sq;
    return {1.0, 0, margin};
  };
  return run_admm(loop, x0);
}

// ---------------------------------------------------------------------------
// Symmetric variant.
// ---------------------------------------------------------------------------

SymSolveResult solve_slsgn(const Problem& prob, const Matrix& u0,
                           const SolverConfig& cfg) {
  prob.validate();
  if (prob.m != prob.n) {
    throw DimensionMismatchError("solve_slsgn: requires a square model");
  }
  if (prob.op.kind() == LinearOperator::Kind::identity) {
    const Matrix bm = unvec(prob.b, prob.m, prob.n);
    if ((bm - bm.transpose()).norm() > 1e-10 * bm.norm()) {
      throw AsymmetricInputError("solve_slsgn: B is not symmetric");
    }
  }
  const CompositeObjective co(prob.phi, prob.op, prob.b);
  const double norm_b = prob.b.norm();
  Matrix u = u0;
  IterationTrace trace;

  for (int k = 0; k < cfg.max_iters; ++k) {
    const auto t0 = Clock::now();
    IterRecord rec;
    rec.k = k;

    const Vector residual = prob.op.apply(u * u.transpose()) - prob.b;
    rec.objective = prob.phi.value(residual);
    const Matrix p = prob.op.adjoint(prob.phi.gradient(residual));
    const Matrix grad = (p + p.transpose()) * u;  // grad Phi(U)
    const double grad_sq = grad.squaredNorm();
    rec.grad_norm = std::sqrt(grad_sq);

    const double t1 = stop_threshold(cfg, norm_b);
    if ((u.transpose() * p).norm() <= t1) {
      rec.wall_ms = ms_since(t0);
      trace.records.push_back(rec);
      trace.status = SolveStatus::converged;
      trace.rule = StopRule::cond1;
      return {u, trace};
    }

    const Matrix z = -(p + p.transpose()) / (2.0 * co.lipschitz);
    Matrix d_u;
    try {
      d_u = symmetric_direction(u, z);
    } catch (const RankDeficientError&) {
      rec.wall_ms = ms_since(t0);
      trace.records.push_back(rec);
      trace.status = SolveStatus::rank_deficient;
      return {u, trace};
    }

    // Direction rule normalized by the iterate, not by B.
    if (d_u.norm() <= cfg.eps1 * std::max(1.0, u.norm())) {
      rec.wall_ms = ms_since(t0);
      trace.records.push_back(rec);
      trace.status = SolveStatus::converged;
      trace.rule = StopRule::cond2;
      return {u, trace};
    }

    const double f0 = rec.objective;
    double alpha = 0.0;
    int ik = 0;
    try {
      std::tie(alpha, ik) = armijo(
          [&](double a) {
            const Matrix ua = u + a * d_u;
            return prob.phi.value(prob.op.apply(ua * ua.transpose()) -
                                  prob.b);
          },
          f0, grad_sq, cfg);
    } catch (const LinesearchExhaustedError&) {
      rec.wall_ms = ms_since(t0);
      trace.records.push_back(rec);
      trace.status = SolveStatus::linesearch_exhausted;
      return {u, trace};
    }
    u += alpha * d_u;
    rec.alpha = alpha;
    rec.linesearch = ik;
    rec.wall_ms = ms_since(t0);
    trace.records.push_back(rec);
  }
  trace.status = SolveStatus::max_iters;
  return {u, trace};
}

// ---------------------------------------------------------------------------
// Robust l1 recovery.
// ---------------------------------------------------------------------------

SolveResult solve_l1(const Problem& prob, const FactorPair& x0,
                     const SolverConfig& cfg) {
  prob.validate();
  if (prob.op.kind() != LinearOperator::Kind::identity) {
    throw ValidationError("op", "solve_l1 requires the identity operator");
  }
  const Matrix bm = unvec(prob.b, prob.m, prob.n);
  const double b1 = bm.lpNorm<1>();
  const double scale = std::max(1.0, b1);
  const double norm_b = bm.norm();
  const double rho = cfg.rho > 0.0 ? cfg.rho : 0.25;

  FactorPair x = x0;
  Matrix w = Matrix::Zero(prob.m, prob.n);
  Matrix lam = Matrix::Zero(prob.m, prob.n);
  IterationTrace trace;

  for (int k = 0; k < cfg.max_iters; ++k) {
    const auto t0 = Clock::now();
    IterRecord rec;
    rec.k = k;
    rec.objective = (x.u * x.v.transpose() - bm).lpNorm<1>() / scale;

    // Factor half-steps against the shifted data; both pseudo-inverses are
    // taken at the incoming iterate.
    const Matrix m_target = cfg.l1_rho_scaled_dual ? Matrix(bm + w - lam / rho)
                                                   : Matrix(bm + w - lam);
    Matrix u_pinv, v_pinv;
    try {
      u_pinv = pseudo_inverse(x.u);
      v_pinv = pseudo_inverse(x.v);
    } catch (const RankDeficientError&) {
      rec.wall_ms = ms_since(t0);
      trace.records.push_back(rec);
      trace.status = SolveStatus::rank_deficient;
      return {x, trace};
    }
    const Matrix vt_next = u_pinv * m_target;
    const Matrix u_next =
        x.u + (m_target - x.u * vt_next) * v_pinv.transpose();
    const double du = (u_next - x.u).norm();
    const double dv = (vt_next.transpose() - x.v).norm();
    x.u = u_next;
    x.v = vt_next.transpose();

    const Matrix product = x.u * x.v.transpose();
    Matrix w_next, lam_next;
    if (cfg.l1_rho_scaled_dual) {
      w_next = prox_l1(product - bm + lam / rho, 1.0 / rho);
      lam_next = lam + rho * (product - w_next - bm);
    } else {
      w_next = prox_l1(product + lam - bm, 1.0 / rho);
      lam_next = lam + (product - w_next - bm);
    }
    const double feas = (product - w_next - bm).norm();
    rec.feasibility = feas;
    rec.alpha = 1.0;
    rec.w_change = (w_next - w).norm();
    rec.lambda_change = (lam_next - lam).norm();
    w = w_next;
    lam = lam_next;
    rec.wall_ms = ms_since(t0);
    trace.records.push_back(rec);

    const double t1 = stop_threshold(cfg, norm_b);
    if (std::max({du, dv, rec.w_change, rec.lambda_change}) <= t1) {
      trace.status = SolveStatus::converged;
      trace.rule = StopRule::cond2;
      return {x, trace};
    }
  }
  trace.status = SolveStatus::max_iters;
  return {x, trace};
}

}  // namespace gnlr
