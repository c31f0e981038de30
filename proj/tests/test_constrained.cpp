#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "ceopt/constrained.hpp"

using namespace ceopt;

namespace {

ProblemSpec sum_to_one_problem() {
  // minimize x1^2 + x2^2 subject to x1 + x2 - 1 = 0 on [-2,2]^2
  ProblemSpec p;
  p.nvars = 2;
  p.lower_bounds = Vector::Constant(2, -2.0);
  p.upper_bounds = Vector::Constant(2, 2.0);
  p.objective = [](const Vector& x) { return x.squaredNorm(); };
  p.constraints = [](const Vector& x) {
    ConstraintValues c;
    c.h = Vector::Constant(1, x[0] + x[1] - 1.0);
    c.g = Vector(0);
    return c;
  };
  return p;
}

}  // namespace

TEST_CASE("shift vector", "[constrained]") {
  MultiplierState m;
  m.lambda_e = Vector(0);

  m.lambda_i = Vector::Constant(1, 1.0);
  m.nu = 1.0;
  CHECK(shift_vector(m)[0] == 1.0);

  m.lambda_i = Vector::Constant(1, 0.0);
  m.nu = 10.0;
  CHECK(shift_vector(m)[0] == kShiftFloor);  // zero-multiplier floor

  m.lambda_i = (Vector(2) << 4.0, 2.0).finished();
  m.nu = 2.0;
  const Vector s = shift_vector(m);
  CHECK(s[0] == 2.0);
  CHECK(s[1] == 1.0);
}

TEST_CASE("augmented objective terms", "[constrained]") {
  SECTION("equality quadratic penalty") {
    ProblemSpec p;
    p.nvars = 1;
    p.lower_bounds = Vector::Constant(1, -5.0);
    p.upper_bounds = Vector::Constant(1, 5.0);
    p.objective = [](const Vector& x) { return x[0] * x[0]; };
    p.constraints = [](const Vector& x) {
      ConstraintValues c;
      c.h = Vector::Constant(1, x[0] - 1.0);
      c.g = Vector(0);
      return c;
    };
    MultiplierState m;
    m.lambda_e = Vector::Zero(1);
    m.lambda_i = Vector(0);
    m.nu = 2.0;
    const auto f = augmented_objective(p, m);
    CHECK(f(Vector::Zero(1)) == Catch::Approx(1.0).epsilon(1e-14));  // 0 + 0 + 0.5*2*1
  }

  SECTION("log barrier values") {
    ProblemSpec p;
    p.nvars = 1;
    p.lower_bounds = Vector::Constant(1, -5.0);
    p.upper_bounds = Vector::Constant(1, 5.0);
    p.objective = [](const Vector&) { return 0.0; };
    double g_value = 0.0;
    p.constraints = [&g_value](const Vector&) {
      ConstraintValues c;
      c.h = Vector(0);
      c.g = Vector::Constant(1, g_value);
      return c;
    };
    MultiplierState m;
    m.lambda_e = Vector(0);
    m.lambda_i = Vector::Constant(1, 1.0);
    m.nu = 1.0;  // shift = 1
    const auto f = augmented_objective(p, m);
    g_value = 0.0;
    CHECK(f(Vector::Zero(1)) == Catch::Approx(0.0).margin(1e-14));  // -ln(1)
    g_value = 1.0 - M_E;
    CHECK(f(Vector::Zero(1)) == Catch::Approx(-1.0).epsilon(1e-12));  // -ln(e)
  }

  SECTION("reduces exactly to F without constraints") {
    ProblemSpec p;
    p.nvars = 2;
    p.lower_bounds = Vector::Constant(2, -1.0);
    p.upper_bounds = Vector::Constant(2, 1.0);
    p.objective = [](const Vector& x) { return std::sin(x[0]) + x[1]; };
    MultiplierState m;
    m.lambda_e = Vector(0);
    m.lambda_i = Vector(0);
    m.nu = 10.0;
    const auto f = augmented_objective(p, m);
    const Vector x = (Vector(2) << 0.3, -0.7).finished();
    CHECK(f(x) == p.objective(x));
  }

  SECTION("barrier safeguard keeps the landscape finite and increasing") {
    ProblemSpec p;
    p.nvars = 1;
    p.lower_bounds = Vector::Constant(1, -10.0);
    p.upper_bounds = Vector::Constant(1, 10.0);
    p.objective = [](const Vector&) { return 0.0; };
    p.constraints = [](const Vector& x) {
      ConstraintValues c;
      c.h = Vector(0);
      c.g = Vector::Constant(1, x[0]);  // G = x, shift s = 1
      return c;
    };
    MultiplierState m;
    m.lambda_e = Vector(0);
    m.lambda_i = Vector::Constant(1, 1.0);
    m.nu = 1.0;
    const auto f = augmented_objective(p, m);
    double prev = -std::numeric_limits<double>::infinity();
    for (double x = -5.0; x <= 10.0; x += 0.01) {  // crosses G = s at x = 1
      const double v = f(Vector::Constant(1, x));
      CHECK(std::isfinite(v));
      CHECK(v >= prev);
      prev = v;
    }
    // continuity across the extrapolation threshold
    const double thr = 1.0 * (1.0 - kBarrierEps);
    const double below = f(Vector::Constant(1, thr - 1e-9));
    const double above = f(Vector::Constant(1, thr + 1e-9));
    CHECK(std::abs(above - below) < 1e-2);
  }
}

TEST_CASE("multiplier updates follow the max(0, .) rule", "[constrained]") {
  MultiplierState m;
  m.lambda_e = Vector::Zero(1);
  m.lambda_i = Vector::Constant(1, 1.0);
  m.nu = 2.0;

  SECTION("equality accumulates nu * H") {
    const MultiplierState out =
        update_multipliers(m, Vector::Constant(1, 0.5), Vector::Constant(1, 0.0), 10.0, 1e8);
    CHECK(out.lambda_e[0] == 1.0);
    CHECK(out.nu == 20.0);
    CHECK(out.outer_iter == 1);
  }
  SECTION("inequality clamps at zero") {
    const MultiplierState a =
        update_multipliers(m, Vector::Zero(1), Vector::Constant(1, -0.25), 10.0, 1e8);
    CHECK(a.lambda_i[0] == 0.5);
    MultiplierState m2 = m;
    m2.lambda_i = Vector::Constant(1, 0.1);
    const MultiplierState b =
        update_multipliers(m2, Vector::Zero(1), Vector::Constant(1, -1.0), 10.0, 1e8);
    CHECK(b.lambda_i[0] == 0.0);
  }
  SECTION("penalty is capped") {
    MultiplierState m3 = m;
    m3.nu = 5e7;
    const MultiplierState out =
        update_multipliers(m3, Vector::Zero(1), Vector::Zero(1), 10.0, 1e8);
    CHECK(out.nu == 1e8);
  }
  SECTION("non-finite constraint values are rejected") {
    CHECK_THROWS(update_multipliers(m, Vector::Constant(1, std::nan("")), Vector::Zero(1), 10, 1e8));
  }

  SECTION("nonnegativity and monotone penalty over random sequences") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    MultiplierState cur;
    cur.lambda_e = Vector::Zero(2);
    cur.lambda_i = Vector::Constant(3, 1.0);
    cur.nu = 10.0;
    double prev_nu = cur.nu;
    for (int step = 0; step < 200; ++step) {
      Vector h(2), g(3);
      for (int i = 0; i < 2; ++i) h[i] = unif(gen);
      for (int j = 0; j < 3; ++j) g[j] = unif(gen);
      cur = update_multipliers(cur, h, g, 10.0, 1e8);
      CHECK((cur.lambda_i.array() >= 0.0).all());
      CHECK(cur.nu >= prev_nu);
      CHECK(cur.nu <= 1e8);
      prev_nu = cur.nu;
    }
  }
}

TEST_CASE("constraint violation is an infinity norm of the active parts", "[constrained]") {
  CHECK(constraint_violation(Vector::Zero(1), Vector::Constant(1, -1.0)) == 0.0);
  CHECK(constraint_violation((Vector(2) << 0.2, -0.1).finished(), Vector(0)) == 0.2);
  CHECK(constraint_violation(Vector(0), (Vector(2) << 0.05, -3.0).finished()) == 0.05);
  CHECK(constraint_violation(Vector(0), Vector(0)) == 0.0);
}

TEST_CASE("equality-constrained toy problem solves to the analytic point", "[constrained]") {
  const ProblemSpec p = sum_to_one_problem();
  CeSettings s = default_settings(2);
  s.seed = 1;
  const RunResult r =
      ce_minimize_constrained(p, Vector::Zero(2), Vector::Constant(2, 1.0), s);
  CHECK(r.convergence_status);
  CHECK(std::abs(r.xopt[0] - 0.5) <= 0.02);
  CHECK(std::abs(r.xopt[1] - 0.5) <= 0.02);
  CHECK(std::abs(r.xopt.sum() - 1.0) <= s.tol_con);
  CHECK(r.fopt == Catch::Approx(0.5).margin(0.02));
  CHECK(std::abs(r.fopt - p.objective(r.xopt)) <= 1e-15);

  SECTION("history records carry the violation measure") {
    REQUIRE(!r.history.empty());
    CHECK(r.history.back().error_c <= s.tol_con);
    // iteration numbering stays strictly increasing across outer stages
    for (std::size_t i = 1; i < r.history.size(); ++i) {
      CHECK(r.history[i].iter == r.history[i - 1].iter + 1);
    }
  }
  SECTION("deterministic rerun") {
    const RunResult r2 =
        ce_minimize_constrained(p, Vector::Zero(2), Vector::Constant(2, 1.0), s);
    CHECK(r2.xopt == r.xopt);
    CHECK(r2.fopt == r.fopt);
    CHECK(r2.history.size() == r.history.size());
  }
}

TEST_CASE("inactive constraints behave as unconstrained, one outer stage", "[constrained]") {
  ProblemSpec p;
  p.nvars = 2;
  p.lower_bounds = Vector::Constant(2, -2.0);
  p.upper_bounds = Vector::Constant(2, 2.0);
  p.objective = [](const Vector& x) { return x.squaredNorm(); };
  p.constraints = [](const Vector& x) {
    ConstraintValues c;
    c.h = Vector(0);
    c.g = Vector::Constant(1, x[0] - 10.0);  // never active inside the box
    return c;
  };
  CeSettings s = default_settings(2);
  s.seed = 4;
  const RunResult r = ce_minimize_constrained(p, Vector::Ones(2), Vector::Ones(2), s);
  CHECK(r.convergence_status);
  CHECK((r.exit_flag == 4 || r.exit_flag == 5));
  CHECK(r.fopt <= 1e-4);
  // single outer stage: iteration numbers are contiguous from 1
  CHECK(r.history.front().iter == 1);
  CHECK(r.history.back().iter == static_cast<long long>(r.history.size()));
}

TEST_CASE("infeasible problems report failure honestly", "[constrained]") {
  ProblemSpec p;
  p.nvars = 1;
  p.lower_bounds = Vector::Constant(1, -1.0);
  p.upper_bounds = Vector::Constant(1, 1.0);
  p.objective = [](const Vector& x) { return x[0] * x[0]; };
  p.constraints = [](const Vector& x) {
    ConstraintValues c;
    c.h = Vector::Constant(1, x[0] - 5.0);  // unreachable inside the box
    c.g = Vector(0);
    return c;
  };
  CeSettings s = default_settings(1);
  s.max_iter = 400;
  const RunResult r = ce_minimize_constrained(p, Vector::Zero(1), Vector::Ones(1), s);
  CHECK_FALSE(r.convergence_status);
  CHECK((r.exit_flag == 1 || r.exit_flag == 3));
  // least-violating fallback pushes toward the upper bound
  CHECK(r.xopt[0] > 0.5);
}
