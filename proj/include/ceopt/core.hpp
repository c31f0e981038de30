#pragma once

// Problem, settings, result, and history data model shared by all solvers.
// All types are immutable value types once constructed; nothing here mutates
// shared state, so instances are safe to share across threads.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "ceopt/stats.hpp"

namespace ceopt {

using json = nlohmann::json;

inline constexpr long long kUnboundedFcount = std::numeric_limits<long long>::max();
inline constexpr double kNegInfinity = -std::numeric_limits<double>::infinity();

using PointObjective = std::function<double(const Vector&)>;
using BatchObjective = std::function<Vector(const Matrix&)>;  // one sample per row

struct ConstraintValues {
  Vector h;  // equality values, feasible iff h == 0
  Vector g;  // inequality values, feasible iff g <= 0
};
using PointConstraints = std::function<ConstraintValues(const Vector&)>;

struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Thrown when a user objective fails during a run; carries the iteration
// records completed before the failure.
struct EvaluationError : std::runtime_error {
  EvaluationError(const std::string& msg, std::vector<struct IterationRecord> hist);
  std::vector<struct IterationRecord> history;
};

struct ProblemSpec {
  PointObjective objective;       // used when is_vectorized == false
  BatchObjective objective_batch; // used when is_vectorized == true
  int nvars = 0;
  Vector lower_bounds;
  Vector upper_bounds;
  PointConstraints constraints;   // optional; empty means unconstrained
  bool is_vectorized = false;

  bool has_constraints() const { return static_cast<bool>(constraints); }
};

struct CeSettings {
  int nsamp = 100;
  double elite_factor = 0.05;
  long long max_iter = 100;
  long long max_stall = 50;
  long long max_fcount = kUnboundedFcount;
  double min_fval = kNegInfinity;
  Vector tol_abs;                 // one positive entry per design variable
  double tol_rel = 1e-3;
  double tol_con = 1e-3;
  double tol_fun = 1e-6;
  double alpha = 0.7;
  double beta = 0.8;
  int q = 5;
  double initial_penalty = 10.0;
  double penalty_factor = 10.0;
  double penalty_cap = 1e8;
  bool verbose = false;
  std::uint64_t seed = 0;
};

struct IterationRecord {
  long long iter = 0;
  Vector xmean;    // smoothed distribution mean after the update
  Vector xmedian;  // componentwise median of the iteration's samples
  Vector xbest;    // best point evaluated so far
  double fmean = 0.0;    // mean objective over the elite set
  double fmedian = 0.0;  // median objective over the elite set
  double fbest = 0.0;
  Vector sigma;    // smoothed standard deviation after the update
  double error_s = 0.0;  // wrms measure of the sigma change
  double error_c = 0.0;  // constraint violation at xbest (0 when unconstrained)
  long long fcount = 0;  // cumulative objective evaluations
};

inline EvaluationError::EvaluationError(const std::string& msg, std::vector<IterationRecord> hist)
    : std::runtime_error(msg), history(std::move(hist)) {}

struct RunResult {
  Vector xopt;
  double fopt = std::numeric_limits<double>::infinity();
  int exit_flag = 0;  // 1..6, see check_stopping
  bool convergence_status = false;
  std::vector<IterationRecord> history;
  CeSettings settings_echo;  // the resolved settings the run actually used
};

namespace detail {

// ceil for a nonnegative product that may sit a few ulp off an integer.
inline int ceil_int(double x) {
  const double r = std::nearbyint(x);
  if (std::abs(x - r) < 1e-9 * std::max(1.0, std::abs(x))) return static_cast<int>(r);
  return static_cast<int>(std::ceil(x));
}

}  // namespace detail

inline const ProblemSpec& validate_problem(const ProblemSpec& problem) {
  if (problem.nvars < 1) {
    throw ValidationError("ProblemSpec: nvars must be >= 1, got " + std::to_string(problem.nvars));
  }
  const auto n = static_cast<Eigen::Index>(problem.nvars);
  if (problem.lower_bounds.size() != n || problem.upper_bounds.size() != n) {
    throw ValidationError("ProblemSpec: bounds dimension mismatch (lb has " +
                          std::to_string(problem.lower_bounds.size()) + ", ub has " +
                          std::to_string(problem.upper_bounds.size()) + ", nvars is " +
                          std::to_string(problem.nvars) + ")");
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    if (!std::isfinite(problem.lower_bounds[k]) || !std::isfinite(problem.upper_bounds[k])) {
      throw ValidationError("ProblemSpec: non-finite bound at index " + std::to_string(k));
    }
    if (!(problem.lower_bounds[k] < problem.upper_bounds[k])) {
      throw ValidationError("ProblemSpec: lower bound >= upper bound at index " + std::to_string(k));
    }
  }
  if (problem.is_vectorized) {
    if (!problem.objective_batch) throw ValidationError("ProblemSpec: is_vectorized set but no batch objective");
  } else {
    if (!problem.objective) throw ValidationError("ProblemSpec: no objective callable");
  }
  return problem;
}

inline int resolve_elite_count(int nsamp, double elite_factor) {
  if (nsamp < 2) throw ValidationError("resolve_elite_count: nsamp must be >= 2");
  if (!(elite_factor > 0.0 && elite_factor < 1.0)) {
    throw ValidationError("resolve_elite_count: elite_factor must lie in (0,1)");
  }
  const int count = std::max(detail::ceil_int(elite_factor * nsamp), 2);
  if (count > nsamp) {
    throw ValidationError("resolve_elite_count: elite count " + std::to_string(count) +
                          " exceeds nsamp " + std::to_string(nsamp));
  }
  return count;
}

inline CeSettings default_settings(int nvars) {
  if (nvars < 1) throw ValidationError("default_settings: nvars must be >= 1");
  CeSettings s;
  s.max_iter = 100LL * nvars;
  s.tol_abs = Vector::Constant(nvars, 1e-6);
  return s;
}

inline void validate_settings(const CeSettings& s, int nvars) {
  if (s.nsamp < 2) throw ValidationError("CeSettings: nsamp must be >= 2");
  resolve_elite_count(s.nsamp, s.elite_factor);
  if (s.max_iter < 1) throw ValidationError("CeSettings: max_iter must be >= 1");
  if (s.max_stall < 1) throw ValidationError("CeSettings: max_stall must be >= 1");
  if (s.max_fcount < 1) throw ValidationError("CeSettings: max_fcount must be >= 1");
  if (s.tol_abs.size() != nvars) {
    throw ValidationError("CeSettings: tol_abs must have one entry per design variable");
  }
  for (Eigen::Index k = 0; k < s.tol_abs.size(); ++k) {
    if (!(s.tol_abs[k] > 0.0)) throw ValidationError("CeSettings: tol_abs entries must be positive");
  }
  if (!(s.tol_rel > 0.0)) throw ValidationError("CeSettings: tol_rel must be positive");
  if (!(s.tol_con > 0.0)) throw ValidationError("CeSettings: tol_con must be positive");
  if (!(s.tol_fun > 0.0)) throw ValidationError("CeSettings: tol_fun must be positive");
  if (!(s.alpha > 0.0 && s.alpha <= 1.0)) throw ValidationError("CeSettings: alpha must lie in (0,1]");
  if (!(s.beta >= 0.0)) throw ValidationError("CeSettings: beta must be >= 0");
  if (s.q < 1) throw ValidationError("CeSettings: q must be >= 1");
  if (!(s.initial_penalty > 0.0)) throw ValidationError("CeSettings: initial_penalty must be positive");
  if (!(s.penalty_factor > 1.0)) throw ValidationError("CeSettings: penalty_factor must be > 1");
  if (!(s.penalty_cap > 0.0)) throw ValidationError("CeSettings: penalty_cap must be positive");
}

// --- settings <-> JSON -------------------------------------------------
//
// Unbounded max_fcount and min_fval = -inf map to null (JSON carries no
// infinities). tol_abs always serializes as the full array; config files may
// give a scalar, which broadcasts over all variables.

inline json settings_to_json(const CeSettings& s) {
  json j;
  j["nsamp"] = s.nsamp;
  j["elite_factor"] = s.elite_factor;
  j["max_iter"] = s.max_iter;
  j["max_stall"] = s.max_stall;
  j["max_fcount"] = s.max_fcount == kUnboundedFcount ? json() : json(s.max_fcount);
  j["min_fval"] = std::isfinite(s.min_fval) ? json(s.min_fval) : json();
  j["tol_abs"] = std::vector<double>(s.tol_abs.begin(), s.tol_abs.end());
  j["tol_rel"] = s.tol_rel;
  j["tol_con"] = s.tol_con;
  j["tol_fun"] = s.tol_fun;
  j["alpha"] = s.alpha;
  j["beta"] = s.beta;
  j["q"] = s.q;
  j["initial_penalty"] = s.initial_penalty;
  j["penalty_factor"] = s.penalty_factor;
  j["penalty_cap"] = s.penalty_cap;
  j["verbose"] = s.verbose;
  j["seed"] = s.seed;
  return j;
}

namespace detail {

inline const std::vector<std::string>& settings_keys() {
  static const std::vector<std::string> keys = {
      "nsamp",   "elite_factor", "max_iter",        "max_stall",      "max_fcount",
      "min_fval", "tol_abs",     "tol_rel",         "tol_con",        "tol_fun",
      "alpha",   "beta",         "q",               "initial_penalty", "penalty_factor",
      "penalty_cap", "verbose",  "seed"};
  return keys;
}

inline void reject_unknown_keys(const json& j) {
  const auto& keys = settings_keys();
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(keys.begin(), keys.end(), it.key()) == keys.end()) {
      throw ValidationError("settings: unknown key '" + it.key() + "'");
    }
  }
}

inline Vector tol_abs_from_json(const json& v, Eigen::Index fallback_size) {
  if (v.is_number()) {
    if (fallback_size < 1) throw ValidationError("settings: scalar tol_abs needs a known nvars");
    return Vector::Constant(fallback_size, v.get<double>());
  }
  auto vec = v.get<std::vector<double>>();
  return Eigen::Map<const Vector>(vec.data(), static_cast<Eigen::Index>(vec.size()));
}

}  // namespace detail

// Overlay the fields present in `j` onto `base`; unknown keys are errors.
inline CeSettings apply_json_overrides(CeSettings base, const json& j) {
  if (!j.is_object()) throw ValidationError("settings: expected a JSON object");
  detail::reject_unknown_keys(j);
  if (j.contains("nsamp")) base.nsamp = j.at("nsamp").get<int>();
  if (j.contains("elite_factor")) base.elite_factor = j.at("elite_factor").get<double>();
  if (j.contains("max_iter")) base.max_iter = j.at("max_iter").get<long long>();
  if (j.contains("max_stall")) base.max_stall = j.at("max_stall").get<long long>();
  if (j.contains("max_fcount")) {
    const auto& v = j.at("max_fcount");
    base.max_fcount = v.is_null() ? kUnboundedFcount : v.get<long long>();
  }
  if (j.contains("min_fval")) {
    const auto& v = j.at("min_fval");
    base.min_fval = v.is_null() ? kNegInfinity : v.get<double>();
  }
  if (j.contains("tol_abs")) base.tol_abs = detail::tol_abs_from_json(j.at("tol_abs"), base.tol_abs.size());
  if (j.contains("tol_rel")) base.tol_rel = j.at("tol_rel").get<double>();
  if (j.contains("tol_con")) base.tol_con = j.at("tol_con").get<double>();
  if (j.contains("tol_fun")) base.tol_fun = j.at("tol_fun").get<double>();
  if (j.contains("alpha")) base.alpha = j.at("alpha").get<double>();
  if (j.contains("beta")) base.beta = j.at("beta").get<double>();
  if (j.contains("q")) base.q = j.at("q").get<int>();
  if (j.contains("initial_penalty")) base.initial_penalty = j.at("initial_penalty").get<double>();
  if (j.contains("penalty_factor")) base.penalty_factor = j.at("penalty_factor").get<double>();
  if (j.contains("penalty_cap")) base.penalty_cap = j.at("penalty_cap").get<double>();
  if (j.contains("verbose")) base.verbose = j.at("verbose").get<bool>();
  if (j.contains("seed")) base.seed = j.at("seed").get<std::uint64_t>();
  return base;
}

// Exact reconstruction of a settings object produced by settings_to_json.
inline CeSettings settings_from_json(const json& j) {
  detail::reject_unknown_keys(j);
  for (const auto& key : detail::settings_keys()) {
    if (!j.contains(key)) throw ValidationError("settings: missing key '" + key + "'");
  }
  CeSettings s;
  s.tol_abs = detail::tol_abs_from_json(j.at("tol_abs"), 0);
  return apply_json_overrides(s, j);
}

inline bool settings_equal(const CeSettings& a, const CeSettings& b) {
  return a.nsamp == b.nsamp && a.elite_factor == b.elite_factor && a.max_iter == b.max_iter &&
         a.max_stall == b.max_stall && a.max_fcount == b.max_fcount &&
         ((std::isinf(a.min_fval) && std::isinf(b.min_fval)) || a.min_fval == b.min_fval) &&
         a.tol_abs.size() == b.tol_abs.size() && a.tol_abs == b.tol_abs &&
         a.tol_rel == b.tol_rel && a.tol_con == b.tol_con && a.tol_fun == b.tol_fun &&
         a.alpha == b.alpha && a.beta == b.beta && a.q == b.q &&
         a.initial_penalty == b.initial_penalty && a.penalty_factor == b.penalty_factor &&
         a.penalty_cap == b.penalty_cap && a.verbose == b.verbose && a.seed == b.seed;
}

}  // namespace ceopt
