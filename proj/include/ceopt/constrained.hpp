#pragma once

// Augmented-Lagrangian outer loop for nonlinear equality / inequality
// constraints. Each outer iteration minimizes
//   F~(x) = F(x) + sum_i (lamE_i H_i + 0.5 nu H_i^2)
//               - sum_j lamI_j s_j ln(s_j - G_j(x)),   s_j = lamI_j / nu,
// with the unconstrained CE solver, then updates the multipliers
//   lamE_i <- lamE_i + nu H_i,   lamI_j <- max(0, lamI_j + nu G_j)
// and raises nu toward penalty_cap.

#include <cmath>
#include <vector>

#include "ceopt/core.hpp"
#include "ceopt/solver.hpp"

namespace ceopt {

inline constexpr double kShiftFloor = 1e-8;
inline constexpr double kBarrierEps = 1e-6;
inline constexpr int kMaxOuterIterations = 20;

struct MultiplierState {
  Vector lambda_e;        // equality multipliers
  Vector lambda_i;        // inequality multipliers, kept nonnegative
  double nu = 1.0;        // penalty factor, nondecreasing across outer iterations
  int outer_iter = 0;
};

inline Vector shift_vector(const MultiplierState& m) {
  if (!(m.nu > 0.0)) throw ValidationError("shift_vector: nu must be positive");
  return (m.lambda_i / m.nu).cwiseMax(kShiftFloor);
}

namespace detail {

// Log-barrier contribution of one inequality. For G >= s(1 - eps) the log is
// replaced by its value-plus-slope extrapolation at the threshold, keeping
// the landscape finite and increasing.
inline double barrier_term(double lambda, double s, double g) {
  const double thr = s * (1.0 - kBarrierEps);
  if (g < thr) return -lambda * s * std::log(s - g);
  const double r_thr = s - thr;  // = s * kBarrierEps
  return -lambda * s * std::log(r_thr) + (lambda * s / r_thr) * (g - thr);
}

inline double augmented_terms(const ConstraintValues& c, const MultiplierState& m, const Vector& shifts) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < c.h.size(); ++i) {
    acc += m.lambda_e[i] * c.h[i] + 0.5 * m.nu * c.h[i] * c.h[i];
  }
  for (Eigen::Index j = 0; j < c.g.size(); ++j) {
    acc += barrier_term(m.lambda_i[j], shifts[j], c.g[j]);
  }
  return acc;
}

}  // namespace detail

// Single-point view of the augmented objective (reduces exactly to F when the
// problem has no constraints).
inline PointObjective augmented_objective(const ProblemSpec& problem, const MultiplierState& m) {
  const Vector shifts = m.lambda_i.size() > 0 ? shift_vector(m) : Vector();
  return [problem, m, shifts](const Vector& x) {
    double f = problem.is_vectorized ? problem.objective_batch(x.transpose())[0] : problem.objective(x);
    if (problem.has_constraints()) {
      f += detail::augmented_terms(problem.constraints(x), m, shifts);
    }
    return f;
  };
}

inline MultiplierState update_multipliers(const MultiplierState& m, const Vector& h_vals,
                                          const Vector& g_vals, double penalty_factor,
                                          double penalty_cap) {
  if (!h_vals.allFinite() || !g_vals.allFinite()) {
    throw std::runtime_error("update_multipliers: non-finite constraint values");
  }
  MultiplierState out = m;
  out.lambda_e += m.nu * h_vals;
  out.lambda_i = (m.lambda_i + m.nu * g_vals).cwiseMax(0.0);
  out.nu = std::min(penalty_factor * m.nu, penalty_cap);
  out.outer_iter = m.outer_iter + 1;
  return out;
}

// Infinity norm of the violations: max(|H_i|, max(0, G_j)).
inline double constraint_violation(const Vector& h_vals, const Vector& g_vals) {
  double v = 0.0;
  for (Eigen::Index i = 0; i < h_vals.size(); ++i) v = std::max(v, std::abs(h_vals[i]));
  for (Eigen::Index j = 0; j < g_vals.size(); ++j) v = std::max(v, g_vals[j]);
  return std::max(v, 0.0);
}

inline RunResult ce_minimize_constrained(const ProblemSpec& problem, const Vector& xmean0,
                                         const Vector& sigma0, const CeSettings& s,
                                         const EvalOptions& eval = {}) {
  validate_problem(problem);
  validate_settings(s, problem.nvars);
  if (!problem.has_constraints()) {
    throw ValidationError("ce_minimize_constrained: problem has no constraints");
  }

  const ConstraintValues c0 = problem.constraints(xmean0);
  MultiplierState m;
  m.lambda_e = Vector::Zero(c0.h.size());
  m.lambda_i = Vector::Ones(c0.g.size());
  m.nu = s.initial_penalty;

  const Vector restart_floor = 1e-3 * (problem.upper_bounds - problem.lower_bounds);
  auto violation_at = [&problem](const Vector& x) {
    const ConstraintValues c = problem.constraints(x);
    return constraint_violation(c.h, c.g);
  };
  auto raw_objective_at = [&problem, &eval](const Vector& x) {
    return detail::evaluate_batch(problem, x.transpose(), eval)[0];
  };

  std::vector<IterationRecord> history;
  long long iters_used = 0;
  long long fcount_used = 0;
  Vector start = xmean0;
  Vector sig = sigma0;
  bool have_feasible = false;
  Vector best_x = xmean0;
  double best_f = std::numeric_limits<double>::infinity();
  double best_viol = std::numeric_limits<double>::infinity();
  int final_flag = 1;
  bool success = false;

  for (int k = 0; k < kMaxOuterIterations; ++k) {
    CeSettings inner = s;
    inner.max_iter = s.max_iter - iters_used;
    if (inner.max_iter < 1) {
      final_flag = 1;
      break;
    }
    if (s.max_fcount != kUnboundedFcount) {
      inner.max_fcount = s.max_fcount - fcount_used;
      if (inner.max_fcount < 1) {
        final_flag = 3;
        break;
      }
    }

    ProblemSpec stage = problem;
    const Vector shifts = m.lambda_i.size() > 0 ? shift_vector(m) : Vector();
    const MultiplierState stage_m = m;
    stage.is_vectorized = true;
    stage.objective = nullptr;
    stage.objective_batch = [problem, stage_m, shifts, eval](const Matrix& pts) {
      Vector f = detail::evaluate_batch(problem, pts, eval);
      if (problem.has_constraints()) {
        for (Eigen::Index i = 0; i < pts.rows(); ++i) {
          f[i] += detail::augmented_terms(problem.constraints(pts.row(i)), stage_m, shifts);
        }
      }
      return f;
    };

    detail::LoopHooks hooks;
    hooks.violation_at = violation_at;
    hooks.nu = &m.nu;
    hooks.iter_offset = iters_used;
    hooks.fcount_offset = fcount_used;
    RunResult inner_res;
    try {
      inner_res = detail::ce_minimize_impl(stage, start, sig, inner, {}, hooks);
    } catch (EvaluationError& e) {
      history.insert(history.end(), e.history.begin(), e.history.end());
      throw EvaluationError(e.what(), std::move(history));
    }

    iters_used += static_cast<long long>(inner_res.history.size());
    fcount_used = inner_res.history.back().fcount;
    history.insert(history.end(), inner_res.history.begin(), inner_res.history.end());

    const ConstraintValues c = problem.constraints(inner_res.xopt);
    const double viol = constraint_violation(c.h, c.g);
    const double f_raw = raw_objective_at(inner_res.xopt);
    fcount_used += 1;

    const bool feasible = viol <= s.tol_con;
    if (feasible && (!have_feasible || f_raw < best_f)) {
      have_feasible = true;
      best_x = inner_res.xopt;
      best_f = f_raw;
      best_viol = viol;
    } else if (!have_feasible && viol < best_viol) {
      best_x = inner_res.xopt;
      best_f = f_raw;
      best_viol = viol;
    }

    final_flag = inner_res.exit_flag;
    const bool inner_converged = inner_res.exit_flag >= 4;
    if (feasible && inner_converged) {
      success = true;
      break;
    }
    if (inner_res.exit_flag == 1 && iters_used >= s.max_iter) break;
    if (inner_res.exit_flag == 3 && s.max_fcount != kUnboundedFcount && fcount_used >= s.max_fcount) break;

    m = update_multipliers(m, c.h, c.g, s.penalty_factor, s.penalty_cap);
    start = best_x;
    sig = (sigma0 * std::pow(0.5, k + 1)).cwiseMax(restart_floor);
  }

  // All outer iterations spent without a feasible converged point: report a
  // budget flag, not the last inner stage's success flag.
  if (!success && final_flag >= 4) final_flag = 1;

  RunResult res;
  res.xopt = best_x;
  res.fopt = best_f;
  res.exit_flag = final_flag;
  res.convergence_status = success || best_viol <= s.tol_con;
  res.history = std::move(history);
  res.settings_echo = s;
  return res;
}

}  // namespace ceopt
