// ergo: volumetric ergodic coverage benchmarks.
//
// Subcommands: run (one trial), bench (a whole suite), coeffs and footprint
// (debug dumps), config-reference. All output is CSV/JSON; plotting is left
// to external tools. ERGO_OUT_ROOT overrides output.dir.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ergo/config.hpp"
#include "ergo/io.hpp"
#include "ergo/kernels.hpp"
#include "ergo/tasks.hpp"

namespace {

using namespace ergo;

std::string out_root(const AppConfig& cfg) {
  if (const char* env = std::getenv("ERGO_OUT_ROOT"); env && *env) return env;
  return cfg.output.dir;
}

Suite suite_or_config(const std::string& flag, const AppConfig& cfg) {
  return parse_suite(flag.empty() ? cfg.task.suite : flag);
}

unsigned long long seed_or_config(long long flag, const AppConfig& cfg) {
  return flag < 0 ? cfg.task.seed_base : static_cast<unsigned long long>(flag);
}

void echo_config(const std::string& dir, const AppConfig& cfg) {
  std::filesystem::create_directories(dir);
  std::ofstream out(dir + "/resolved.json", std::ios::binary);
  out << resolved_config_json(cfg);
}

int cmd_run(const std::string& cfg_path, const std::vector<std::string>& sets,
            const std::string& suite_flag, long long seed_flag, const std::string& method_flag) {
  const AppConfig cfg = load_config(cfg_path, sets);
  const Suite suite = suite_or_config(suite_flag, cfg);
  const unsigned long long seed = seed_or_config(seed_flag, cfg);
  const Method method = parse_method(method_flag);

  const TrialRecord rec = run_trial(cfg, suite, method, seed);
  const std::string dir =
      out_root(cfg) + "/" + to_string(suite) + "/seed" + std::to_string(seed) + "/" +
      to_string(method);
  write_trial_outputs(dir, cfg, rec);
  echo_config(dir, cfg);

  if (rec.failed) {
    std::printf("trial failed at step %d: %s\n", rec.steps_run + 1, rec.failure_reason.c_str());
  } else if (rec.completion_step > 0) {
    std::printf("completed at step %d (budget %d)%s\n", rec.completion_step, rec.budget,
                rec.success_under_budget ? "" : " over budget");
  } else {
    std::printf("ran %d steps without completing (cap %d), final metric %.3e\n", rec.steps_run,
                rec.cap, rec.final_metric);
  }
  std::printf("outputs: %s\n", dir.c_str());
  return rec.failed ? 2 : 0;
}

void print_aggregate_row(const char* name, const MethodAggregate& a, int n) {
  std::printf("  %-9s %5d/%-5d %6d/%-6d %8.1f [%.1f, %.1f] %10.2f %7d\n", name, a.under_budget, n,
              a.completed, n, a.median_steps, a.q1_steps, a.q3_steps, a.mean_step_ms, a.failed);
}

int cmd_bench(const std::string& cfg_path, const std::vector<std::string>& sets,
              const std::string& suite_flag, int trials_flag, int jobs) {
  const AppConfig cfg = load_config(cfg_path, sets);
  const Suite suite = suite_or_config(suite_flag, cfg);
  const int n = trials_flag > 0 ? trials_flag : cfg.task.n_trials;

  const BenchReport rep = run_benchmark(cfg, suite, n, jobs);
  const std::string dir = out_root(cfg) + "/" + to_string(suite);
  write_bench_outputs(dir, cfg, rep);

  std::printf("suite %s: %d trial(s) per method, budget %d, cap %d\n", to_string(suite).c_str(),
              n, rep.budget, rep.cap);
  std::printf("  %-9s %11s %13s %24s %10s %7s\n", "method", "under", "completed",
              "median steps [IQR]", "ms/step", "failed");
  print_aggregate_row("vec", rep.vec_agg, static_cast<int>(rep.vec_trials.size()));
  if (!rep.baseline_trials.empty()) {
    print_aggregate_row("baseline", rep.baseline_agg,
                        static_cast<int>(rep.baseline_trials.size()));
    std::printf("  median step ratio vec/baseline: %.3f\n", rep.median_step_ratio);
  }
  std::printf("outputs: %s\n", dir.c_str());

  int failed = 0;
  for (const auto& t : rep.vec_trials) failed += t.failed;
  for (const auto& t : rep.baseline_trials) failed += t.failed;
  const int total = static_cast<int>(rep.vec_trials.size() + rep.baseline_trials.size());
  return failed == total && total > 0 ? 2 : 0;
}

int cmd_coeffs(const std::string& cfg_path, const std::vector<std::string>& sets,
               const std::string& suite_flag, long long seed_flag, bool uniform, int grid) {
  const AppConfig cfg = load_config(cfg_path, sets);
  const Suite suite = suite_or_config(suite_flag, cfg);
  const SearchSpace space = [&] {
    Eigen::VectorXd L(static_cast<Eigen::Index>(cfg.space.lengths.size()));
    for (size_t i = 0; i < cfg.space.lengths.size(); ++i)
      L[static_cast<Eigen::Index>(i)] = cfg.space.lengths[i];
    return SearchSpace(L);
  }();
  const BasisSet basis = build_basis(space, cfg.basis.modes_per_dim);

  Eigen::VectorXd phi;
  if (uniform) {
    phi = target_coefficients(basis, TargetDistribution(uniform_density(space)),
                              cfg.basis.quad_cells_per_dim);
  } else {
    const TrialSetup st = make_trial_setup(cfg, suite, seed_or_config(seed_flag, cfg));
    const TargetDistribution target = suite == Suite::Erasing ? TargetDistribution(*st.mask_target)
                                                              : TargetDistribution(*st.prior);
    phi = target_coefficients(basis, target, cfg.basis.quad_cells_per_dim);
  }

  const std::string dir = out_root(cfg) + "/coeffs";
  std::filesystem::create_directories(dir);
  Eigen::MatrixXd table(basis.n_modes(), 5);
  for (int m = 0; m < basis.n_modes(); ++m)
    table.row(m) << basis.indices(m, 0), basis.indices(m, 1), basis.normalizers[m],
        basis.weights[m], phi[m];
  io::write_csv_matrix(dir + "/coeffs.csv", "k0,k1,h,lambda,phi", table);

  // pointwise reconstruction sum(phi_k f_k) on a grid of cell centers
  Eigen::MatrixXd recon(grid * grid, 3);
  for (int r = 0; r < grid; ++r) {
    for (int c = 0; c < grid; ++c) {
      Eigen::MatrixXd x(1, 2);
      x << (c + 0.5) * space.lengths[0] / grid, (r + 0.5) * space.lengths[1] / grid;
      const auto tables = kernels::build_tables(basis, x, false);
      const double q = phi.dot(kernels::mode_values(basis, tables, 1.0));
      recon.row(r * grid + c) << x(0, 0), x(0, 1), q;
    }
  }
  io::write_csv_matrix(dir + "/reconstruction.csv", "x,y,q", recon);

  std::printf("%-6s %-6s %12s %12s %14s\n", "k0", "k1", "h", "lambda", "phi");
  for (int m = 0; m < std::min(basis.n_modes(), 10); ++m)
    std::printf("%-6d %-6d %12.6f %12.6f %14.6e\n", basis.indices(m, 0), basis.indices(m, 1),
                basis.normalizers[m], basis.weights[m], phi[m]);
  if (basis.n_modes() > 10) std::printf("... %d modes total\n", basis.n_modes());
  std::printf("outputs: %s\n", dir.c_str());
  return 0;
}

int cmd_footprint(const std::string& cfg_path, const std::vector<std::string>& sets,
                  const std::string& suite_flag, long long seed_flag,
                  const std::string& state_flag) {
  const AppConfig cfg = load_config(cfg_path, sets);
  const Suite suite = suite_or_config(suite_flag, cfg);
  const TrialSetup st = make_trial_setup(cfg, suite, seed_or_config(seed_flag, cfg));
  const DynamicsModel dyn = suite_dynamics(cfg, suite);
  const VolumetricModel model = physical_footprint(cfg, suite, st);

  Eigen::VectorXd s = st.s0;
  if (!state_flag.empty()) {
    std::vector<double> vals;
    std::stringstream ss(state_flag);
    std::string tok;
    while (std::getline(ss, tok, ',')) vals.push_back(std::stod(tok));
    if (static_cast<int>(vals.size()) != dyn.state_dim)
      throw std::invalid_argument("--state needs " + std::to_string(dyn.state_dim) +
                                  " comma-separated values");
    s = Eigen::Map<Eigen::VectorXd>(vals.data(), dyn.state_dim);
  }

  const SearchSpace space = [&] {
    Eigen::VectorXd L(2);
    L << cfg.space.lengths[0], cfg.space.lengths[1];
    return SearchSpace(L);
  }();
  const Eigen::MatrixXd pts = sample_points(model, dyn, space, s);
  std::printf("index,x,y\n");
  for (Eigen::Index i = 0; i < pts.rows(); ++i)
    std::printf("%lld,%.17g,%.17g\n", static_cast<long long>(i), pts(i, 0), pts(i, 1));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"volumetric ergodic coverage benchmarks"};
  app.require_subcommand(1);

  std::string cfg_path;
  std::vector<std::string> sets;
  std::string suite_flag, method_flag = "vec", state_flag;
  long long seed_flag = -1;
  int trials_flag = 0, jobs = 1, grid = 64;
  bool uniform = false;

  auto add_common = [&](CLI::App* sub, bool with_suite_seed = true) {
    sub->add_option("--config", cfg_path, "config file (JSON)");
    sub->add_option("--set", sets, "dotted override key=value, repeatable");
    if (with_suite_seed) {
      sub->add_option("--suite", suite_flag, "q1 | erasing | ground | aerial");
      sub->add_option("--seed", seed_flag, "trial seed (default: task.seed_base)");
    }
  };

  auto* run = app.add_subcommand("run", "run a single trial and write its records");
  add_common(run);
  run->add_option("--method", method_flag, "vec | baseline");

  auto* bench = app.add_subcommand("bench", "run a suite and write report + summary");
  add_common(bench);
  bench->add_option("--trials", trials_flag, "trials per method (default: task.n_trials)");
  bench->add_option("--jobs", jobs, "trial worker pool size");

  auto* coeffs = app.add_subcommand("coeffs", "dump basis/target coefficient tables");
  add_common(coeffs);
  coeffs->add_flag("--uniform", uniform, "use the uniform target instead of the trial's");
  coeffs->add_option("--grid", grid, "reconstruction grid resolution");

  auto* footprint = app.add_subcommand("footprint", "dump footprint samples at a state");
  add_common(footprint);
  footprint->add_option("--state", state_flag, "comma-separated state vector (default: trial s0)");

  auto* reference = app.add_subcommand("config-reference", "print every config key with defaults");
  add_common(reference, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (run->parsed()) return cmd_run(cfg_path, sets, suite_flag, seed_flag, method_flag);
    if (bench->parsed()) return cmd_bench(cfg_path, sets, suite_flag, trials_flag, jobs);
    if (coeffs->parsed()) return cmd_coeffs(cfg_path, sets, suite_flag, seed_flag, uniform, grid);
    if (footprint->parsed())
      return cmd_footprint(cfg_path, sets, suite_flag, seed_flag, state_flag);
    if (reference->parsed()) {
      std::cout << config_reference();
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
