#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ergo/config.hpp"
#include "ergo/control.hpp"
#include "ergo/dynamics.hpp"
#include "ergo/target.hpp"
#include "ergo/volumetric.hpp"

namespace ergo {

enum class Suite { Q1, Erasing, Ground, Aerial };
enum class Method { Vec, Baseline };

Suite parse_suite(const std::string& name);
Method parse_method(const std::string& name);
std::string to_string(Suite s);
std::string to_string(Method m);

/// Per-suite nominal budget when the config leaves it at 0.
int resolved_budget(const AppConfig& cfg, Suite suite);

/// Everything a trial randomizes, drawn once per (suite, seed) so both
/// methods face the identical world; only the controller's footprint model
/// may differ between methods.
struct TrialSetup {
  Eigen::VectorXd s0;
  Eigen::MatrixXd tool_points;  // tool in its own frame (rigid-body suites)
  Eigen::Vector2d pivot{0.0, 0.0};
  std::optional<GaussianMixture> prior;  // search prior / q1 target
  std::optional<GridDensity> mask_target;
  Eigen::MatrixXd targets;       // search: one row per hidden target
  Eigen::MatrixXd erase_points;  // erasing: occupied mask cell centers
  double erase_radius = 0.0;
  double detection_radius = 0.0;
};

struct TrialRecord {
  unsigned long long seed = 0;
  Suite suite = Suite::Erasing;
  Method method = Method::Vec;
  std::string platform;

  bool failed = false;  // controller/model divergence; not a timeout
  std::string failure_reason;
  int completion_step = -1;  // 1-based; -1 = not completed within the cap
  bool success_under_budget = false;
  int steps_run = 0;
  int budget = 0;
  int cap = 0;        // hard truncation (3x budget; q1 runs exactly budget)
  int remaining = 0;  // unerased points / unfound targets at the end
  double final_metric = 0.0;

  std::vector<double> metric_trace;     // executed E^v per step
  std::vector<double> plan_cost_trace;  // iLQR cost per replan
  std::vector<int> iters_trace;
  std::vector<double> wall_ms_trace;
  std::vector<double> area_trace;  // aerial: camera footprint area per step

  std::vector<Eigen::VectorXd> states;  // s_0 .. s_steps_run
  std::vector<Eigen::VectorXd> controls;
};

TrialSetup make_trial_setup(const AppConfig& cfg, Suite suite, unsigned long long seed);

/// The suite's platform dynamics and physical footprint (the model that
/// erases ink, detects targets, and is dumped for plots, whatever the
/// controller believes). Exposed for the debug subcommands.
DynamicsModel suite_dynamics(const AppConfig& cfg, Suite suite);
VolumetricModel physical_footprint(const AppConfig& cfg, Suite suite, const TrialSetup& st);

/// The controller settings a trial would run with (control penalty scaled
/// from controller.r_weight; quadcopter trials add the state anchoring).
ControllerConfig trial_controller(const AppConfig& cfg, const DynamicsModel& dyn);

/// Closed-loop execution until completion or the cap. Exceptions from the
/// controller or the footprint models mark the record failed instead of
/// propagating. Deterministic given (cfg, suite, method, seed).
TrialRecord run_trial(const AppConfig& cfg, Suite suite, Method method, unsigned long long seed);

struct MethodAggregate {
  int n = 0;
  int completed = 0;     // within the cap
  int under_budget = 0;  // within the nominal budget
  int failed = 0;
  double median_steps = 0.0;  // censored at the cap
  double q1_steps = 0.0;
  double q3_steps = 0.0;
  double mean_step_ms = 0.0;  // 0 when timing is off
};

struct BenchReport {
  Suite suite = Suite::Erasing;
  int n_trials = 0;
  int budget = 0;
  int cap = 0;
  std::vector<TrialRecord> vec_trials;
  std::vector<TrialRecord> baseline_trials;  // empty for q1
  MethodAggregate vec_agg;
  MethodAggregate baseline_agg;
  double median_step_ratio = 0.0;  // vec / baseline, 0 for q1
};

MethodAggregate aggregate(const std::vector<TrialRecord>& trials, int budget, int cap);

/// Runs the whole suite. For q1 the configured platform is used, or all three
/// when platform.name is empty, and only the volumetric method runs. `jobs`
/// sizes the trial worker pool; results are reduced in seed order regardless.
BenchReport run_benchmark(const AppConfig& cfg, Suite suite, int n_trials, int jobs);

/// Executed-trajectory metric trace of a single q1 trial.
std::vector<double> q1_metric_trace(const AppConfig& cfg, const std::string& platform,
                                    unsigned long long seed);

/// Writers. Trial outputs land in <dir>: trial.json, diagnostics.csv,
/// metric_trace.csv, trajectory.csv, footprint.csv. Bench outputs land in
/// <dir>: report.json, summary.csv, resolved.json plus seed<k>/<method>/
/// trial directories.
void write_trial_outputs(const std::string& dir, const AppConfig& cfg, const TrialRecord& rec);
void write_bench_outputs(const std::string& dir, const AppConfig& cfg, const BenchReport& report);

}  // namespace ergo
