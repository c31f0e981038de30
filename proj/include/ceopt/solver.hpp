#pragma once

// Cross-entropy minimization over a box: sample a truncated Gaussian,
// evaluate, select the elite set, refit the distribution by maximum
// likelihood, smooth the parameters, and repeat until a stopping criterion
// fires. Exit flags:
//   1 maximum iterations, 2 stalled, 3 evaluation budget,
//   4 objective-range tolerance, 5 sigma convergence, 6 target value reached.

#include <cmath>
#include <cstdio>
#include <deque>
#include <optional>
#include <span>
#include <thread>
#include <vector>

#include "ceopt/core.hpp"
#include "ceopt/stats.hpp"

namespace ceopt {

struct SolverState {
  long long t = 0;
  Vector mu_hat;
  Vector sigma_hat;
  Vector xbest;
  double fbest = std::numeric_limits<double>::infinity();
  long long stall = 0;
  long long fcount = 0;
  Vector prev_sigma;
  std::vector<IterationRecord> history;
};

struct EvalOptions {
  int workers = 1;  // objective-evaluation threads for non-vectorized problems
};

inline double dynamic_beta(long long t, double beta, int q) {
  return beta - beta * std::pow(1.0 - 1.0 / static_cast<double>(t), q);
}

inline Vector smooth_mean(const Vector& mu_tilde, const Vector& mu_prev, double alpha) {
  return alpha * mu_tilde + (1.0 - alpha) * mu_prev;
}

inline Vector smooth_sigma(const Vector& sigma_tilde, const Vector& sigma_prev, double beta_t) {
  return beta_t * sigma_tilde + (1.0 - beta_t) * sigma_prev;
}

// Criteria are evaluated success-first: 6, 4, 5, 3, 2, 1. The window holds
// the most recent fbest values (at most max_stall of them) and flag 4 only
// triggers once it is full.
inline std::optional<int> check_stopping(const SolverState& state, const CeSettings& s,
                                         double error_s, std::span<const double> fbest_window) {
  if (state.fbest <= s.min_fval) return 6;
  if (static_cast<long long>(fbest_window.size()) == s.max_stall) {
    double lo = fbest_window[0], hi = fbest_window[0];
    for (double v : fbest_window) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (hi - lo <= s.tol_fun) return 4;
  }
  if (error_s <= 1.0) return 5;
  if (state.fcount >= s.max_fcount) return 3;
  if (state.stall >= s.max_stall) return 2;
  if (state.t >= s.max_iter) return 1;
  return std::nullopt;
}

namespace detail {

// Evaluates the batch row by row, fanning out to threads when requested.
// Results are written to pre-assigned slots, so the output is identical for
// any worker count. Throws EvaluationError naming the lowest failing row.
inline Vector evaluate_rows(const PointObjective& f, const Matrix& pts, int workers) {
  const auto rows = pts.rows();
  Vector out(rows);
  if (workers <= 1 || rows < 2) {
    for (Eigen::Index i = 0; i < rows; ++i) out[i] = f(pts.row(i));
    return out;
  }
  const int nw = static_cast<int>(std::min<Eigen::Index>(workers, rows));
  std::vector<std::string> errors(static_cast<std::size_t>(nw));
  std::vector<Eigen::Index> error_rows(static_cast<std::size_t>(nw), -1);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(nw));
  for (int w = 0; w < nw; ++w) {
    const Eigen::Index begin = rows * w / nw;
    const Eigen::Index end = rows * (w + 1) / nw;
    pool.emplace_back([&, w, begin, end] {
      for (Eigen::Index i = begin; i < end; ++i) {
        try {
          out[i] = f(pts.row(i));
        } catch (const std::exception& e) {
          errors[static_cast<std::size_t>(w)] = e.what();
          error_rows[static_cast<std::size_t>(w)] = i;
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  Eigen::Index first_bad = -1;
  std::string msg;
  for (std::size_t w = 0; w < error_rows.size(); ++w) {
    if (error_rows[w] >= 0 && (first_bad < 0 || error_rows[w] < first_bad)) {
      first_bad = error_rows[w];
      msg = errors[w];
    }
  }
  if (first_bad >= 0) {
    throw std::runtime_error("objective failed at sample " + std::to_string(first_bad) + ": " + msg);
  }
  return out;
}

inline Vector evaluate_batch(const ProblemSpec& p, const Matrix& pts, const EvalOptions& opt) {
  if (p.is_vectorized) {
    Vector v = p.objective_batch(pts);
    if (v.size() != pts.rows()) {
      throw std::runtime_error("vectorized objective returned " + std::to_string(v.size()) +
                               " values for " + std::to_string(pts.rows()) + " samples");
    }
    return v;
  }
  return evaluate_rows(p.objective, pts, opt.workers);
}

inline Vector columnwise_median(Matrix pts) {
  const auto rows = pts.rows();
  Vector med(pts.cols());
  for (Eigen::Index k = 0; k < pts.cols(); ++k) {
    auto col = pts.col(k);
    std::sort(col.begin(), col.end());
    med[k] = (rows % 2 == 1) ? col[rows / 2] : 0.5 * (col[rows / 2 - 1] + col[rows / 2]);
  }
  return med;
}

// Extras threaded through by the constrained outer loop: per-record
// constraint violation, the current penalty for verbose output, and offsets
// that keep iteration/fcount numbering and RNG substreams distinct across
// outer stages.
struct LoopHooks {
  std::function<double(const Vector&)> violation_at;
  const double* nu = nullptr;
  long long iter_offset = 0;
  long long fcount_offset = 0;
};

inline RunResult ce_minimize_impl(const ProblemSpec& problem, const Vector& xmean0,
                                  const Vector& sigma0, const CeSettings& s,
                                  const EvalOptions& eval, const LoopHooks& hooks) {
  validate_problem(problem);
  validate_settings(s, problem.nvars);
  const auto n = static_cast<Eigen::Index>(problem.nvars);
  if (xmean0.size() != n || sigma0.size() != n) {
    throw ValidationError("ce_minimize: start vectors must have nvars entries");
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    if (!(xmean0[k] >= problem.lower_bounds[k] && xmean0[k] <= problem.upper_bounds[k])) {
      throw ValidationError("ce_minimize: start point outside the box at index " + std::to_string(k));
    }
    if (!(sigma0[k] > 0.0)) {
      throw ValidationError("ce_minimize: sigma0 must be positive at index " + std::to_string(k));
    }
  }
  const int elite_count = resolve_elite_count(s.nsamp, s.elite_factor);
  const Vector sigma_floor = 1e-12 * (problem.upper_bounds - problem.lower_bounds);

  SolverState st;
  st.mu_hat = xmean0;
  st.sigma_hat = sigma0;
  st.prev_sigma = sigma0;
  st.xbest = xmean0;
  std::vector<double> window;

  if (s.verbose && hooks.iter_offset == 0) {
    if (hooks.nu) {
      std::printf("%8s %15s %15s %12s %10s %12s %12s\n", "iter", "fbest", "fmean", "error_s",
                  "fcount", "error_c", "nu");
    } else {
      std::printf("%8s %15s %15s %12s %10s\n", "iter", "fbest", "fmean", "error_s", "fcount");
    }
  }

  for (long long t = 1;; ++t) {
    auto rng = SplitMix64::substream(s.seed, static_cast<std::uint64_t>(hooks.iter_offset + t));
    SampleBatch batch;
    batch.points = sample_truncated_normal(
        {st.mu_hat, st.sigma_hat, problem.lower_bounds, problem.upper_bounds}, s.nsamp, rng);
    try {
      batch.values = evaluate_batch(problem, batch.points, eval);
    } catch (const std::exception& e) {
      throw EvaluationError("ce_minimize: iteration " + std::to_string(hooks.iter_offset + t) +
                                ": " + e.what(),
                            std::move(st.history));
    }
    const Matrix& pts = batch.points;
    const Vector& vals = batch.values;
    st.fcount += s.nsamp;

    const auto [elite_idx, gamma_hat] = elite_select(vals, elite_count);
    Matrix elite(elite_count, n);
    double fsum = 0.0;
    Vector elite_vals(elite_count);
    for (int i = 0; i < elite_count; ++i) {
      elite.row(i) = pts.row(elite_idx[static_cast<std::size_t>(i)]);
      elite_vals[i] = vals[elite_idx[static_cast<std::size_t>(i)]];
      fsum += elite_vals[i];
    }
    const Vector mu_tilde = mle_mean(elite);
    const Vector sigma_tilde = mle_std(elite, mu_tilde);
    const double beta_t = dynamic_beta(t, s.beta, s.q);
    st.mu_hat = smooth_mean(mu_tilde, st.mu_hat, s.alpha);
    st.sigma_hat = smooth_sigma(sigma_tilde, st.sigma_hat, beta_t).cwiseMax(sigma_floor);

    // Best over all evaluated samples, not only the elite set.
    const double fbest_prev = st.fbest;
    for (Eigen::Index i = 0; i < vals.size(); ++i) {
      if (!std::isnan(vals[i]) && vals[i] < st.fbest) {
        st.fbest = vals[i];
        st.xbest = pts.row(i);
      }
    }
    if (st.fbest < fbest_prev) {
      st.stall = 0;
    } else {
      ++st.stall;
    }

    const Vector w = error_weights(st.prev_sigma, s.tol_abs, s.tol_rel);
    const double error_s = wrms_norm(st.sigma_hat - st.prev_sigma, w);
    st.prev_sigma = st.sigma_hat;
    st.t = t;

    window.push_back(st.fbest);
    if (static_cast<long long>(window.size()) > s.max_stall) window.erase(window.begin());

    IterationRecord rec;
    rec.iter = hooks.iter_offset + t;
    rec.xmean = st.mu_hat;
    rec.xmedian = columnwise_median(pts);
    rec.xbest = st.xbest;
    rec.fmean = fsum / elite_count;
    std::sort(elite_vals.begin(), elite_vals.end());
    rec.fmedian = (elite_count % 2 == 1)
                      ? elite_vals[elite_count / 2]
                      : 0.5 * (elite_vals[elite_count / 2 - 1] + elite_vals[elite_count / 2]);
    rec.fbest = st.fbest;
    rec.sigma = st.sigma_hat;
    rec.error_s = error_s;
    rec.error_c = hooks.violation_at ? hooks.violation_at(st.xbest) : 0.0;
    rec.fcount = hooks.fcount_offset + st.fcount;
    st.history.push_back(rec);

    if (s.verbose) {
      if (hooks.nu) {
        std::printf("%8lld %15.6e %15.6e %12.3e %10lld %12.3e %12.3e\n", rec.iter, rec.fbest,
                    rec.fmean, rec.error_s, rec.fcount, rec.error_c, *hooks.nu);
      } else {
        std::printf("%8lld %15.6e %15.6e %12.3e %10lld\n", rec.iter, rec.fbest, rec.fmean,
                    rec.error_s, rec.fcount);
      }
    }

    if (const auto flag = check_stopping(st, s, error_s, window)) {
      RunResult res;
      res.xopt = st.xbest;
      res.fopt = st.fbest;
      res.exit_flag = *flag;
      if (*flag >= 4) {
        res.convergence_status = true;
      } else if (*flag == 2 && static_cast<long long>(window.size()) == s.max_stall) {
        double lo = window[0], hi = window[0];
        for (double v : window) {
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
        res.convergence_status = (hi - lo <= s.tol_fun);
      }
      res.history = std::move(st.history);
      res.settings_echo = s;
      return res;
    }
  }
}

}  // namespace detail

inline Vector evaluate_batch(const ProblemSpec& p, const Matrix& pts, const EvalOptions& opt = {}) {
  return detail::evaluate_batch(p, pts, opt);
}

inline RunResult ce_minimize(const ProblemSpec& problem, const Vector& xmean0, const Vector& sigma0,
                             const CeSettings& settings, const EvalOptions& eval = {}) {
  return detail::ce_minimize_impl(problem, xmean0, sigma0, settings, eval, {});
}

}  // namespace ceopt
