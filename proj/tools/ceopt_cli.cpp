// Command-line runner for the cross-entropy toolkit.
//
//   ceopt list                         registries, machine readable
//   ceopt solve <target> [flags]       one seeded run, trace emitted
//   ceopt example <key> [flags]        like solve, also writes datasets
//   ceopt bench <names...|all> [flags] repeated seeded runs + gate
//
// Settings precedence: built-in defaults < CEOPT_SEED < --config file < flags.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "ceopt/ceopt.hpp"

namespace fs = std::filesystem;
using namespace ceopt;

namespace {

struct RunRequest {
  std::string command;  // solve | bench | example | list
  std::string target;
  json settings_overrides = json::object();
  std::optional<std::uint64_t> seed;
  std::string config_path;
  std::string output_path;
  std::string format = "jsonl";
  bool verbose = false;
  // bench only
  std::vector<std::string> bench_names;
  int repeats = 20;
  int jobs = 1;
};

void add_settings_flags(CLI::App* cmd, RunRequest& req) {
  auto stash_int = [&req](const std::string& key) {
    return [&req, key](std::int64_t v) { req.settings_overrides[key] = v; };
  };
  auto stash_double = [&req](const std::string& key) {
    return [&req, key](double v) { req.settings_overrides[key] = v; };
  };
  cmd->add_option_function<std::uint64_t>(
      "--seed", [&req](std::uint64_t v) { req.seed = v; }, "root RNG seed");
  cmd->add_option_function<std::int64_t>("--nsamp", stash_int("nsamp"), "samples per iteration");
  cmd->add_option_function<double>("--elite-factor", stash_double("elite_factor"),
                                   "elite proportion in (0,1)");
  cmd->add_option_function<std::int64_t>("--max-iter", stash_int("max_iter"), "iteration cap");
  cmd->add_option_function<std::int64_t>("--max-stall", stash_int("max_stall"), "stall cap");
  cmd->add_option_function<double>("--tol-abs", stash_double("tol_abs"),
                                   "absolute tolerance (broadcast over variables)");
  cmd->add_option_function<double>("--tol-rel", stash_double("tol_rel"), "relative tolerance");
  cmd->add_option_function<double>("--tol-con", stash_double("tol_con"), "constraint tolerance");
  cmd->add_option_function<double>("--tol-fun", stash_double("tol_fun"), "objective tolerance");
  cmd->add_option_function<double>("--alpha", stash_double("alpha"), "mean smoothing in (0,1]");
  cmd->add_option_function<double>("--beta", stash_double("beta"), "sigma smoothing >= 0");
  cmd->add_option_function<std::int64_t>("--q", stash_int("q"), "dynamic smoothing exponent");
  cmd->add_option("--config", req.config_path, "JSON settings file (exact snake_case keys)");
  cmd->add_option("--output", req.output_path, "trace / summary output path");
  cmd->add_option("--format", req.format, "trace format: jsonl (default) or csv")
      ->check(CLI::IsMember({"jsonl", "csv"}));
  cmd->add_flag("--verbose", req.verbose, "print one line per iteration");
}

CeSettings resolve_settings(int nvars, const RunRequest& req) {
  CeSettings s = default_settings(nvars);
  if (const char* env = std::getenv("CEOPT_SEED")) {
    s.seed = std::strtoull(env, nullptr, 10);
  }
  if (!req.config_path.empty()) {
    std::ifstream is(req.config_path);
    if (!is) throw ValidationError("cannot open config file '" + req.config_path + "'");
    json j;
    is >> j;
    s = apply_json_overrides(s, j);
  }
  s = apply_json_overrides(s, req.settings_overrides);
  if (req.seed) s.seed = *req.seed;
  if (req.verbose) s.verbose = true;
  validate_settings(s, nvars);
  return s;
}

// Apply recommended per-example settings first, then the user's overrides.
CeSettings resolve_settings_over(CeSettings base, const RunRequest& req) {
  if (const char* env = std::getenv("CEOPT_SEED")) {
    base.seed = std::strtoull(env, nullptr, 10);
  }
  if (!req.config_path.empty()) {
    std::ifstream is(req.config_path);
    if (!is) throw ValidationError("cannot open config file '" + req.config_path + "'");
    json j;
    is >> j;
    base = apply_json_overrides(base, j);
  }
  base = apply_json_overrides(base, req.settings_overrides);
  if (req.seed) base.seed = *req.seed;
  if (req.verbose) base.verbose = true;
  return base;
}

fs::path default_output(const std::string& target, const std::string& format) {
  return fs::path(target + "_trace." + format);
}

void print_summary(const RunResult& r) {
  std::ostringstream os;
  os.precision(10);
  os << "xopt = [";
  for (Eigen::Index i = 0; i < r.xopt.size(); ++i) os << (i ? ", " : "") << r.xopt[i];
  os << "]\nfopt = " << r.fopt << "\nexit_flag = " << r.exit_flag
     << "\nconvergence_status = " << (r.convergence_status ? "true" : "false")
     << "\niterations = " << r.history.size()
     << "\nfcount = " << (r.history.empty() ? 0 : r.history.back().fcount) << "\n";
  std::cout << os.str();
}

void write_text_file(const fs::path& path, const std::string& contents) {
  if (!path.parent_path().empty()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
  os << contents;
  os.close();
  fs::rename(tmp, path);
}

int run_sindy_flow(const RunRequest& req) {
  using namespace ceopt::examples;
  const ExampleSetup ex = make_example("sindy_duffing");
  CeSettings s = resolve_settings_over(ex.settings, req);
  validate_settings(s, kDictionarySize);
  const SindyConfig cfg;
  const SindyData data = make_sindy_data(cfg);
  const SindyResult res = run_ce_sindy(cfg, data, s.seed, s.nsamp);

  const fs::path out_dir =
      req.output_path.empty() ? fs::path(".") : fs::path(req.output_path).parent_path();
  for (const auto& [name, contents] : ex.datasets) {
    write_text_file(out_dir.empty() ? fs::path(name) : out_dir / name, contents);
  }
  std::ostringstream coeffs;
  coeffs.precision(17);
  coeffs << "dictionary,xi1_raw,xi2_raw,xi3_raw,xi1_thr,xi2_thr,xi3_thr\n";
  for (int r = 0; r < kDictionarySize; ++r) {
    coeffs << dictionary_labels()[static_cast<std::size_t>(r)];
    for (int c = 0; c < 3; ++c) coeffs << "," << res.xi(r, c);
    for (int c = 0; c < 3; ++c) coeffs << "," << res.xi_thresholded(r, c);
    coeffs << "\n";
  }
  const fs::path coeff_path = req.output_path.empty()
                                  ? fs::path("sindy_coefficients.csv")
                                  : fs::path(req.output_path);
  write_text_file(coeff_path, coeffs.str());

  std::cout << "identified coefficients (threshold " << cfg.lambda << "):\n";
  std::printf("%10s %12s %12s %12s\n", "function", "x1(t)", "x2(t)", "x3(t)");
  for (int r = 0; r < kDictionarySize; ++r) {
    std::printf("%10s %12.4f %12.4f %12.4f\n",
                dictionary_labels()[static_cast<std::size_t>(r)].c_str(),
                res.xi_thresholded(r, 0), res.xi_thresholded(r, 1), res.xi_thresholded(r, 2));
  }
  std::cout << "coefficients written to " << coeff_path.string() << "\n";
  return 0;
}

int run_single(const RunRequest& req, bool write_datasets) {
  const auto& bench_names = benchmarks::list_benchmarks();
  const bool is_bench =
      std::find(bench_names.begin(), bench_names.end(), req.target) != bench_names.end();
  const auto& example_keys = examples::list_examples();
  const bool is_example =
      std::find(example_keys.begin(), example_keys.end(), req.target) != example_keys.end();
  if (!is_bench && !is_example) {
    std::cerr << "error: unknown target '" << req.target << "' (see `ceopt list`)\n";
    return 1;
  }

  if (is_example && req.target == "sindy_duffing") return run_sindy_flow(req);

  ProblemSpec problem;
  Vector x0, sg0;
  CeSettings settings;
  bool constrained = false;
  std::vector<std::pair<std::string, std::string>> datasets;
  if (is_bench) {
    const auto& b = benchmarks::find_benchmark(req.target);
    problem = benchmarks::make_benchmark_problem(req.target);
    std::tie(x0, sg0) = benchmarks::default_start(b);
    settings = resolve_settings(problem.nvars, req);
  } else {
    examples::ExampleSetup ex = examples::make_example(req.target);
    problem = std::move(ex.problem);
    x0 = ex.xmean0;
    sg0 = ex.sigma0;
    constrained = ex.constrained;
    datasets = std::move(ex.datasets);
    settings = resolve_settings_over(ex.settings, req);
    validate_settings(settings, problem.nvars);
  }

  const RunResult result = constrained
                               ? ce_minimize_constrained(problem, x0, sg0, settings)
                               : ce_minimize(problem, x0, sg0, settings);

  const fs::path out =
      req.output_path.empty() ? default_output(req.target, req.format) : fs::path(req.output_path);
  emit_trace(result, out, trace_format_from_string(req.format));
  if (write_datasets) {
    const fs::path dir = out.parent_path();
    for (const auto& [name, contents] : datasets) {
      write_text_file(dir.empty() ? fs::path(name) : dir / name, contents);
    }
  }
  print_summary(result);
  std::cout << "trace written to " << out.string() << "\n";
  return 0;
}

int run_bench(const RunRequest& req) {
  std::vector<std::string> names = req.bench_names;
  if (names.size() == 1 && names[0] == "all") names = benchmarks::list_benchmarks();
  for (const auto& n : names) benchmarks::find_benchmark(n);  // fail fast on unknown names

  const std::uint64_t base_seed = req.seed.value_or(
      std::getenv("CEOPT_SEED") ? std::strtoull(std::getenv("CEOPT_SEED"), nullptr, 10) : 0ull);

  struct Row {
    std::string name;
    int successes = 0;
    double median_fbest = 0, median_fcount = 0, median_iters = 0;
    bool gate = false;
  };
  std::vector<Row> rows(names.size());

  struct Task {
    std::size_t bench_index;
    int repeat;
  };
  std::vector<Task> tasks;
  for (std::size_t bi = 0; bi < names.size(); ++bi) {
    for (int r = 0; r < req.repeats; ++r) tasks.push_back({bi, r});
  }
  std::vector<double> fbest(tasks.size()), fcounts(tasks.size()), iters(tasks.size());

  auto worker = [&](std::size_t task_index) {
    const Task& task = tasks[task_index];
    const auto& b = benchmarks::find_benchmark(names[task.bench_index]);
    ProblemSpec p = benchmarks::make_benchmark_problem(b.name);
    auto [x0, sg0] = benchmarks::default_start(b);
    RunRequest local = req;
    local.verbose = false;
    local.seed.reset();
    CeSettings s = benchmarks::recommended_bench_settings(b.name);
    s = resolve_settings_over(s, local);
    s.verbose = false;
    validate_settings(s, p.nvars);
    s.seed = base_seed + static_cast<std::uint64_t>(task.repeat);
    const RunResult r = ce_minimize(p, x0, sg0, s);
    fbest[task_index] = r.fopt;
    fcounts[task_index] = static_cast<double>(r.history.back().fcount);
    iters[task_index] = static_cast<double>(r.history.size());
  };

  if (req.jobs <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) worker(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int j = 0; j < req.jobs; ++j) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1)) worker(i);
      });
    }
    for (auto& th : pool) th.join();
  }

  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
  };

  bool all_pass = true;
  std::ostringstream table;
  table << "name,success_rate,median_fbest,median_fcount,median_iters,gate\n";
  std::printf("%-18s %9s %14s %13s %12s %5s\n", "benchmark", "success", "median_fbest",
              "median_fcount", "median_iter", "gate");
  for (std::size_t bi = 0; bi < names.size(); ++bi) {
    const auto& b = benchmarks::find_benchmark(names[bi]);
    std::vector<double> fb, fc, it;
    for (std::size_t ti = 0; ti < tasks.size(); ++ti) {
      if (tasks[ti].bench_index == bi) {
        fb.push_back(fbest[ti]);
        fc.push_back(fcounts[ti]);
        it.push_back(iters[ti]);
      }
    }
    int succ = 0;
    for (double f : fb) {
      if (std::abs(f - b.ref_min_value) <= b.ref_tolerance) ++succ;
    }
    const bool gate = benchmarks::bench_gate_passes(b, fb);
    all_pass = all_pass && gate;
    std::printf("%-18s %5d/%-3d %14.6e %13.0f %12.0f %5s\n", b.name.c_str(), succ,
                static_cast<int>(fb.size()), median(fb), median(fc), median(it),
                gate ? "pass" : "FAIL");
    table << b.name << ',' << succ << '/' << fb.size() << ',' << median(fb) << ',' << median(fc)
          << ',' << median(it) << ',' << (gate ? "pass" : "fail") << "\n";
  }
  if (!req.output_path.empty()) {
    write_text_file(req.output_path, table.str());
    std::cout << "summary written to " << req.output_path << "\n";
  }
  return all_pass ? 0 : 2;
}

int run_list() {
  std::cout << "# benchmarks: name,lb1,ub1,lb2,ub2,ref_min_value\n";
  for (const auto& b : benchmarks::benchmark_registry()) {
    std::ostringstream os;
    os.precision(17);
    os << b.name << ',' << b.lb[0] << ',' << b.ub[0] << ',' << b.lb[1] << ',' << b.ub[1] << ','
       << b.ref_min_value << "\n";
    std::cout << os.str();
  }
  std::cout << "# examples: key,description\n";
  for (const auto& key : examples::list_examples()) {
    std::cout << key << ',' << examples::make_example(key).summary << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cross-entropy optimization toolkit"};
  app.require_subcommand(1);
  RunRequest req;

  CLI::App* list_cmd = app.add_subcommand("list", "print benchmark and example registries");

  CLI::App* solve_cmd = app.add_subcommand("solve", "run one seeded solve on a registered target");
  solve_cmd->add_option("target", req.target, "benchmark or example key")->required();
  add_settings_flags(solve_cmd, req);

  CLI::App* example_cmd =
      app.add_subcommand("example", "run a packaged example and write its datasets");
  example_cmd->add_option("target", req.target, "example key")->required();
  add_settings_flags(example_cmd, req);

  CLI::App* bench_cmd = app.add_subcommand("bench", "repeated seeded benchmark runs");
  bench_cmd->add_option("names", req.bench_names, "benchmark names or 'all'")->required();
  bench_cmd->add_option("--repeats", req.repeats, "seeded runs per benchmark")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--jobs", req.jobs, "concurrent runs")->check(CLI::PositiveNumber);
  add_settings_flags(bench_cmd, req);

  CLI11_PARSE(app, argc, argv);

  try {
    if (list_cmd->parsed()) {
      req.command = "list";
      return run_list();
    }
    if (solve_cmd->parsed()) {
      req.command = "solve";
      return run_single(req, false);
    }
    if (example_cmd->parsed()) {
      req.command = "example";
      return run_single(req, true);
    }
    req.command = "bench";
    return run_bench(req);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
