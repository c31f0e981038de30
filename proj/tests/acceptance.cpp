// Acceptance suite: every gate runs at its pinned tolerance and prints one
// pass/fail line. Exit code 0 only when all criteria hold.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "ceopt/ceopt.hpp"

using namespace ceopt;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(const std::string& name, bool ok, const std::string& detail = "") {
  std::printf("[%s] %s%s%s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.empty() ? "" : " — ",
              detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

int pool_size() {
  const unsigned hc = std::thread::hardware_concurrency();
  return static_cast<int>(std::clamp(hc, 2u, 8u));
}

// Run fn(i) for i in [0, n) on a small pool; results land in preassigned slots.
template <typename Fn>
void parallel_for(int n, Fn&& fn) {
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  const int workers = std::min(pool_size(), n);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

std::vector<RunResult> seeded_benchmark_runs(const benchmarks::BenchmarkProblem& b, int runs) {
  std::vector<RunResult> out(static_cast<std::size_t>(runs));
  parallel_for(runs, [&](int i) {
    ProblemSpec p = benchmarks::make_benchmark_problem(b.name);
    auto [x0, sg0] = benchmarks::default_start(b);
    CeSettings s = benchmarks::recommended_bench_settings(b.name);
    s.seed = static_cast<std::uint64_t>(i);
    out[static_cast<std::size_t>(i)] = ce_minimize(p, x0, sg0, s);
  });
  return out;
}

bool fbest_monotone(const RunResult& r) {
  for (std::size_t i = 1; i < r.history.size(); ++i) {
    if (r.history[i].fbest > r.history[i - 1].fbest) return false;
  }
  return true;
}

// ---- criterion 1: easy benchmark set ------------------------------------

void criterion_1() {
  bool all_ok = true;
  std::string detail;
  for (const auto& name : benchmarks::easy_set()) {
    const auto& b = benchmarks::find_benchmark(name);
    const auto runs = seeded_benchmark_runs(b, 20);  // defaults + nsamp=200
    int ok = 0;
    for (const auto& r : runs) {
      if (std::abs(r.fopt - b.ref_min_value) <= 1e-3) ++ok;
    }
    if (ok < 18) {
      all_ok = false;
      detail += name + " " + std::to_string(ok) + "/20; ";
    }
  }
  report("criterion 1: easy benchmarks, 20 seeded runs, >=90% within 1e-3", all_ok, detail);
}

// ---- criterion 2: hard multimodal set ------------------------------------

void criterion_2() {
  bool all_ok = true;
  std::string detail;
  for (const auto& name : benchmarks::hard_set()) {
    const auto& b = benchmarks::find_benchmark(name);
    const auto runs = seeded_benchmark_runs(b, 20);  // hard-set bench settings, nsamp=500
    double best = std::numeric_limits<double>::infinity();
    for (const auto& r : runs) best = std::min(best, r.fopt);
    const double tol = (b.ref_min_value == 0.0) ? 1e-2 : 0.01 * std::abs(b.ref_min_value);
    if (!(best - b.ref_min_value <= tol)) {
      all_ok = false;
      char buf[128];
      std::snprintf(buf, sizeof(buf), "%s best %.6g vs ref %.6g; ", name.c_str(), best,
                    b.ref_min_value);
      detail += buf;
    }
  }
  report("criterion 2: hard benchmarks, best of 20 within 1% (1e-2 when ref = 0)", all_ok, detail);
}

// ---- criterion 3: Gaussian mixture ---------------------------------------

std::vector<RunResult> g_recorded_runs;  // reused by the monotonicity property

void criterion_3() {
  const examples::ExampleSetup ex = examples::make_example("gaussmix1d");
  int ok = 0;
  for (int i = 0; i < 10; ++i) {
    CeSettings s = ex.settings;
    s.seed = static_cast<std::uint64_t>(i);
    const RunResult r = ce_minimize(ex.problem, ex.xmean0, ex.sigma0, s);
    g_recorded_runs.push_back(r);
    if (std::abs(r.xopt[0] - 2.0) <= 0.01 && std::abs(r.fopt - 0.2) <= 1e-3) ++ok;
  }
  report("criterion 3: gaussmix1d recovers x=2.0+-0.01, f=0.2+-1e-3, 10/10", ok == 10,
         std::to_string(ok) + "/10");
}

// ---- criterion 4: Peaks ----------------------------------------------------

void criterion_4() {
  const examples::ExampleSetup ex = examples::make_example("peaks");
  const double ref = -6.551133332835839;  // grid + refinement oracle
  int ok = 0;
  for (int i = 0; i < 10; ++i) {
    CeSettings s = ex.settings;
    s.seed = static_cast<std::uint64_t>(i);
    const RunResult r = ce_minimize(ex.problem, ex.xmean0, ex.sigma0, s);
    g_recorded_runs.push_back(r);
    if (std::abs(r.fopt - ref) <= 1e-3) ++ok;
  }
  report("criterion 4: peaks fopt within 1e-3 of -6.5511, >=9/10", ok >= 9,
         std::to_string(ok) + "/10");
}

// ---- criterion 5: oscillator identification -------------------------------

void criterion_5() {
  const examples::ExampleSetup ex = examples::make_example("oscillator_id");
  const examples::OscillatorTruth truth = examples::canonical_oscillator_truth();
  const Vector truth_vec = (Vector(4) << truth.omega_n, truth.zeta, truth.y0, truth.v0).finished();
  // v0's true value is 0, so its "relative" error is anchored at unit scale:
  // |est - true| / max(|true|, 1).
  std::vector<int> oks(10, 0);
  std::vector<double> misfits(10, 0.0);
  parallel_for(10, [&](int i) {
    CeSettings s = ex.settings;
    s.seed = static_cast<std::uint64_t>(i);
    const RunResult r = ce_minimize(ex.problem, ex.xmean0, ex.sigma0, s);
    bool good = true;
    for (int k = 0; k < 4; ++k) {
      const double tol = (k == 1 ? 0.20 : 0.05) * std::max(std::abs(truth_vec[k]), 1.0);
      if (std::abs(r.xopt[k] - truth_vec[k]) > tol) good = false;
    }
    misfits[static_cast<std::size_t>(i)] = r.fopt;
    if (r.fopt > 1.2 * truth.noise_std) good = false;
    oks[static_cast<std::size_t>(i)] = good ? 1 : 0;
  });
  int ok = 0;
  for (int v : oks) ok += v;
  report("criterion 5: oscillator params within 5% (zeta 20%), misfit <= 1.2 noise, >=8/10",
         ok >= 8, std::to_string(ok) + "/10");
}

// ---- criterion 6: nonsmooth conic-constrained ------------------------------

void criterion_6() {
  // feasible-grid oracle at 2001x2001 over the box, tolerance 1e-3
  double oracle = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 2001; ++i) {
    const double x1 = -2.0 + 4.0 * i / 2000.0;
    for (int j = 0; j < 2001; ++j) {
      const double x2 = -2.0 + 4.0 * j / 2000.0;
      const auto ev = examples::nonsmooth_conic(x1, x2);
      if (std::max(std::abs(ev.h), std::max(ev.g, 0.0)) <= 1e-3) {
        oracle = std::min(oracle, ev.f);
      }
    }
  }

  const examples::ExampleSetup ex = examples::make_example("nonsmooth_conic");
  std::vector<int> oks(10, 0);
  parallel_for(10, [&](int i) {
    CeSettings s = ex.settings;
    s.seed = static_cast<std::uint64_t>(i);
    const RunResult r = ce_minimize_constrained(ex.problem, ex.xmean0, ex.sigma0, s);
    const auto ev = examples::nonsmooth_conic(r.xopt[0], r.xopt[1]);
    const double viol = std::max(std::abs(ev.h), std::max(ev.g, 0.0));
    oks[static_cast<std::size_t>(i)] = (viol <= 1e-3 && r.fopt <= oracle + 0.05) ? 1 : 0;
  });
  int ok = 0;
  for (int v : oks) ok += v;
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%d/10, grid oracle %.6f", ok, oracle);
  report("criterion 6: conic-constrained feasible within 1e-3 and near-oracle, 10/10", ok == 10,
         buf);
}

// ---- criterion 7: CE-SINDy --------------------------------------------------

void criterion_7() {
  const auto t_start = Clock::now();
  const examples::SindyConfig cfg;
  const examples::SindyData data = examples::make_sindy_data(cfg);

  // expected support rows after thresholding (dictionary order)
  const std::set<int> support_x1 = {2};           // x2
  const std::set<int> support_x2 = {1, 2, 4, 9};  // x1, x2, x1^3, cos(x3)
  const std::set<int> support_x3 = {0};           // 1
  Matrix truth = Matrix::Zero(10, 3);
  truth(2, 0) = 1.0;                                // dx1 = x2
  truth(1, 1) = cfg.params.alpha;                   // dx2 = x1 ...
  truth(2, 1) = -cfg.params.delta;
  truth(4, 1) = cfg.params.beta;
  truth(9, 1) = cfg.params.gamma;
  truth(0, 2) = cfg.params.omega;                   // dx3 = omega

  std::vector<int> oks(10, 0);
  parallel_for(10, [&](int i) {
    const auto res = examples::run_ce_sindy(cfg, data, static_cast<std::uint64_t>(10 * i), 400);
    bool good = true;
    const std::set<int>* expected[3] = {&support_x1, &support_x2, &support_x3};
    for (int c = 0; c < 3 && good; ++c) {
      std::set<int> got;
      for (int r = 0; r < 10; ++r) {
        if (res.xi_thresholded(r, c) != 0.0) got.insert(r);
      }
      if (got != *expected[c]) good = false;
      for (int r = 0; r < 10 && good; ++r) {
        if (res.xi_thresholded(r, c) != 0.0 &&
            std::abs(res.xi_thresholded(r, c) - truth(r, c)) > 0.35) {
          good = false;
        }
      }
    }
    oks[static_cast<std::size_t>(i)] = good ? 1 : 0;
  });
  int ok = 0;
  for (int v : oks) ok += v;
  const double secs = std::chrono::duration<double>(Clock::now() - t_start).count();
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%d/10 in %.1f s", ok, secs);
  report("criterion 7: CE-SINDy support pattern + coefficients within 0.35, >=7/10, under 2 min",
         ok >= 7 && secs < 120.0, buf);
}

// ---- criterion 8: property suites ------------------------------------------

void criterion_8() {
  bool ok = true;
  std::string detail;
  auto expect = [&](bool cond, const char* what) {
    if (!cond) {
      ok = false;
      detail += std::string(what) + "; ";
    }
  };

  // sampler boundedness + moments
  {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> unif(-4.0, 4.0);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    bool bounded = true;
    for (int trial = 0; trial < 20; ++trial) {
      TruncatedNormalSpec spec;
      const double a = unif(gen);
      const double w = std::abs(unif(gen)) + 0.2;
      spec.mu = Vector::Constant(1, a + w * u01(gen));  // mass inside the window
      spec.sigma = Vector::Constant(1, std::abs(unif(gen)) + 0.05);
      spec.lb = Vector::Constant(1, a);
      spec.ub = Vector::Constant(1, a + w);
      auto rng = SplitMix64::substream(500 + trial, 0);
      const Matrix pts = sample_truncated_normal(spec, 5000, rng);
      if (pts.minCoeff() < a || pts.maxCoeff() > a + w) bounded = false;
    }
    expect(bounded, "sampler boundedness");

    TruncatedNormalSpec wide;
    wide.mu = Vector::Constant(1, 0.25);
    wide.sigma = Vector::Constant(1, 0.75);
    wide.lb = Vector::Constant(1, 0.25 - 6 * 0.75);
    wide.ub = Vector::Constant(1, 0.25 + 6 * 0.75);
    auto rng = SplitMix64::substream(9, 0);
    const int n = 100000;
    const Matrix pts = sample_truncated_normal(wide, n, rng);
    const double mean = pts.col(0).mean();
    const double sd = std::sqrt((pts.col(0).array() - mean).square().sum() / (n - 1));
    expect(std::abs(mean - 0.25) <= 3.0 * 0.75 / std::sqrt(double(n)), "sampler mean");
    expect(std::abs(sd - 0.75) <= 3.0 * 0.75 / std::sqrt(2.0 * n), "sampler std");
  }

  // MLE brute-force equivalence
  {
    auto rng = SplitMix64::substream(77, 3);
    TruncatedNormalSpec spec;
    spec.mu = Vector::Zero(4);
    spec.sigma = Vector::Constant(4, 1.5);
    spec.lb = Vector::Constant(4, -6.0);
    spec.ub = Vector::Constant(4, 6.0);
    const Matrix pts = sample_truncated_normal(spec, 800, rng);
    const Vector mu = mle_mean(pts);
    const Vector sd = mle_std(pts, mu);
    bool match = true;
    for (int k = 0; k < 4; ++k) {
      double acc = 0;
      for (int i = 0; i < 800; ++i) acc += pts(i, k);
      const double mu_ref = acc / 800.0;
      double var = 0;
      for (int i = 0; i < 800; ++i) var += (pts(i, k) - mu_ref) * (pts(i, k) - mu_ref);
      const double sd_ref = std::sqrt(var / 800.0);
      if (std::abs(mu[k] - mu_ref) > 1e-12 * std::max(1.0, std::abs(mu_ref))) match = false;
      if (std::abs(sd[k] - sd_ref) > 1e-12 * std::max(1.0, sd_ref)) match = false;
    }
    expect(match, "mle brute-force equivalence");
  }

  // dynamic beta endpoints
  expect(dynamic_beta(1, 0.8, 5) == 0.8, "beta at t=1");
  expect(dynamic_beta(1000000, 0.8, 5) < 1e-5, "beta limit");

  // wrms hand values
  {
    Vector x(2), w(2);
    x << 3, 4;
    w << 1, 1;
    expect(std::abs(wrms_norm(x, w) - std::sqrt(12.5)) < 1e-14, "wrms hand value");
    expect(wrms_norm(Vector::Zero(3), Vector::Ones(3)) == 0.0, "wrms zero");
  }

  // multiplier update unit cases including the clamp
  {
    MultiplierState m;
    m.lambda_e = Vector::Zero(1);
    m.lambda_i = Vector::Constant(1, 1.0);
    m.nu = 2.0;
    const auto a = update_multipliers(m, Vector::Constant(1, 0.5), Vector::Zero(1), 10, 1e8);
    expect(a.lambda_e[0] == 1.0, "equality update");
    const auto b = update_multipliers(m, Vector::Zero(1), Vector::Constant(1, -0.25), 10, 1e8);
    expect(b.lambda_i[0] == 0.5, "inequality update");
    MultiplierState m2 = m;
    m2.lambda_i = Vector::Constant(1, 0.1);
    const auto c = update_multipliers(m2, Vector::Zero(1), Vector::Constant(1, -1.0), 10, 1e8);
    expect(c.lambda_i[0] == 0.0, "max(0,.) clamp");
  }

  // lambda nonnegativity and nu monotonicity over random sequences
  {
    std::mt19937_64 gen(23);
    std::uniform_real_distribution<double> unif(-3.0, 3.0);
    MultiplierState cur;
    cur.lambda_e = Vector::Zero(2);
    cur.lambda_i = Vector::Constant(2, 1.0);
    cur.nu = 10.0;
    bool good = true;
    double prev_nu = cur.nu;
    for (int i = 0; i < 300; ++i) {
      Vector h(2), g(2);
      h << unif(gen), unif(gen);
      g << unif(gen), unif(gen);
      cur = update_multipliers(cur, h, g, 10.0, 1e8);
      if ((cur.lambda_i.array() < 0).any() || cur.nu < prev_nu || cur.nu > 1e8) good = false;
      prev_nu = cur.nu;
    }
    expect(good, "lambda nonnegativity / nu monotonicity");
  }

  // augmented objective reduces to F without constraints
  {
    ProblemSpec p;
    p.nvars = 2;
    p.lower_bounds = Vector::Constant(2, -1.0);
    p.upper_bounds = Vector::Constant(2, 1.0);
    p.objective = [](const Vector& x) { return std::cos(x[0]) * x[1]; };
    MultiplierState m;
    m.lambda_e = Vector(0);
    m.lambda_i = Vector(0);
    m.nu = 3.0;
    const auto f = augmented_objective(p, m);
    const Vector x = (Vector(2) << 0.4, -0.9).finished();
    expect(f(x) == p.objective(x), "augmented == F when constraint-free");
  }

  // fbest monotone on every recorded run
  {
    bool monotone = true;
    for (const auto& r : g_recorded_runs) {
      if (!fbest_monotone(r)) monotone = false;
    }
    expect(monotone && !g_recorded_runs.empty(), "fbest monotonicity");
  }

  // bit-identical rerun under a fixed seed at any worker count
  {
    ProblemSpec p;
    p.nvars = 3;
    p.lower_bounds = Vector::Constant(3, -4.0);
    p.upper_bounds = Vector::Constant(3, 4.0);
    p.objective = [](const Vector& x) { return (x.array() - 0.5).square().sum(); };
    CeSettings s = default_settings(3);
    s.seed = 31;
    s.max_iter = 40;
    const Vector x0 = Vector::Zero(3);
    const Vector sg0 = Vector::Constant(3, 2.0);
    const RunResult r1 = ce_minimize(p, x0, sg0, s, {.workers = 1});
    const RunResult r4 = ce_minimize(p, x0, sg0, s, {.workers = 4});
    bool identical = r1.fopt == r4.fopt && r1.xopt == r4.xopt &&
                     r1.history.size() == r4.history.size();
    for (std::size_t i = 0; identical && i < r1.history.size(); ++i) {
      identical = r1.history[i].fbest == r4.history[i].fbest &&
                  r1.history[i].xmean == r4.history[i].xmean &&
                  r1.history[i].sigma == r4.history[i].sigma;
    }
    expect(identical, "bit-identical at any worker count");
  }

  report("criterion 8: property suites", ok, detail);
}

// ---- criterion 9: RK4 convergence order -------------------------------------

void criterion_9() {
  auto decay = [](double, const Vector& y) { return (-y).eval(); };
  auto err = [&](double h) {
    const auto traj = examples::rk4_integrate(decay, Vector::Ones(1), 0.0, 1.0, h);
    return std::abs(traj.back()[0] - std::exp(-1.0));
  };
  const double e1 = err(0.1), e2 = err(0.05), e3 = err(0.025);
  const double p12 = std::log2(e1 / e2);
  const double p23 = std::log2(e2 / e3);
  const bool ok = std::abs(p12 - 4.0) <= 0.2 && std::abs(p23 - 4.0) <= 0.2;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "orders %.3f, %.3f", p12, p23);
  report("criterion 9: RK4 observed order 4.0 +- 0.2", ok, buf);
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  std::printf("%s (%d failure%s, %.1f s total)\n", g_failures == 0 ? "ALL CRITERIA PASSED" : "FAILURES PRESENT",
              g_failures, g_failures == 1 ? "" : "s", secs);
  return g_failures == 0 ? 0 : 1;
}
