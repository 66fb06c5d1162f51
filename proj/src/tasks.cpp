#include "ergo/tasks.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "ergo/evaluator.hpp"
#include "ergo/io.hpp"
#include "ergo/metric.hpp"
#include "ergo/rng.hpp"
#include "ergo/shapes.hpp"

namespace ergo {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

double deg2rad(double d) { return d * M_PI / 180.0; }

SearchSpace space_of(const AppConfig& cfg) {
  Eigen::VectorXd L(static_cast<Eigen::Index>(cfg.space.lengths.size()));
  for (size_t i = 0; i < cfg.space.lengths.size(); ++i)
    L[static_cast<Eigen::Index>(i)] = cfg.space.lengths[i];
  return SearchSpace(L);
}

std::string bound_platform(Suite suite) {
  switch (suite) {
    case Suite::Erasing: return "double_integrator";
    case Suite::Ground: return "diff_drive";
    case Suite::Aerial: return "quadcopter";
    case Suite::Q1: return "";
  }
  return "";
}

std::string platform_for(const AppConfig& cfg, Suite suite) {
  if (suite == Suite::Q1) {
    if (cfg.platform.name.empty())
      throw std::invalid_argument(
          "q1 trials need platform.name; benchmarks run all three when it is empty");
    return cfg.platform.name;
  }
  const std::string bound = bound_platform(suite);
  if (!cfg.platform.name.empty() && cfg.platform.name != bound)
    throw std::invalid_argument("platform.name '" + cfg.platform.name + "' conflicts with the " +
                                to_string(suite) + " suite, which runs on " + bound);
  return bound;
}

DynamicsModel make_dynamics(const AppConfig& cfg, const std::string& name) {
  const double dt = cfg.platform.dt;
  if (name == "double_integrator") return dt > 0.0 ? make_double_integrator(dt) : make_double_integrator();
  if (name == "diff_drive") return dt > 0.0 ? make_diff_drive(dt) : make_diff_drive();
  if (name == "quadcopter") return dt > 0.0 ? make_quadcopter(dt) : make_quadcopter();
  throw std::invalid_argument("unknown platform: " + name);
}

Eigen::MatrixXd build_tool(const FootprintConfig& fp) {
  const auto& t = fp.tool;
  if (t.shape == "disc") return tool_disc(t.size, fp.n_samples);
  if (t.shape == "bar") return tool_bar(t.size, fp.n_samples);
  if (t.shape == "lshape") return tool_lshape(t.size, fp.n_samples);
  return load_tool_csv(t.file);
}

Eigen::MatrixXd build_mask(const AppConfig& cfg, const SearchSpace& space) {
  const auto& m = cfg.task.mask;
  if (m.kind == "ring") return mask_ring(space, m.cells, m.r_out_frac, m.r_in_frac);
  if (m.kind == "disc") return mask_disc(space, m.cells, m.r_out_frac);
  if (m.kind == "bar") return mask_bar(space, m.cells, m.len_frac, m.wid_frac);
  return load_mask(m.file);
}

GaussianMixture draw_prior(const AppConfig& cfg, const SearchSpace& space, Rng& rng) {
  const int m = cfg.task.prior.components;
  const double L2 = space.min_length() * space.min_length();
  const double lo = cfg.task.prior.eig_min_frac, hi = cfg.task.prior.eig_max_frac;
  std::vector<double> w(m, 1.0 / m);
  std::vector<Eigen::VectorXd> means;
  std::vector<Eigen::MatrixXd> covs;
  for (int i = 0; i < m; ++i) {
    Eigen::VectorXd mu(2);
    mu[0] = space.lengths[0] * (0.1 + 0.8 * rng.uniform01());
    mu[1] = space.lengths[1] * (0.1 + 0.8 * rng.uniform01());
    const double e1 = L2 * (lo + (hi - lo) * rng.uniform01());
    const double e2 = L2 * (lo + (hi - lo) * rng.uniform01());
    const double a = M_PI * rng.uniform01();
    Eigen::Matrix2d rot;
    rot << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
    Eigen::Matrix2d cov = rot * Eigen::Vector2d(e1, e2).asDiagonal() * rot.transpose();
    means.push_back(mu);
    covs.push_back(cov);
  }
  return GaussianMixture(std::move(w), std::move(means), std::move(covs));
}

VolumetricModel make_physical(const AppConfig& cfg, const std::string& plat,
                              const SearchSpace& space, const TrialSetup& st) {
  if (plat == "double_integrator") {
    Eigen::MatrixXd body = st.tool_points;
    body.col(0).array() -= st.pivot[0];
    body.col(1).array() -= st.pivot[1];
    return make_rigid_body(std::move(body));
  }
  if (plat == "diff_drive") {
    const auto& l = cfg.footprint.lidar;
    return make_lidar_wedge(deg2rad(l.fov_deg), l.range_frac * space.min_length(), l.n_radial,
                            l.n_angular);
  }
  const auto& c = cfg.footprint.camera;
  return make_raycast_camera(c.n_u, c.n_v, deg2rad(c.hfov_deg), deg2rad(c.vfov_deg),
                             deg2rad(c.tilt_deg), c.clip_range);
}

VolumetricModel controller_model(const AppConfig& cfg, const VolumetricModel& phys) {
  const std::string& want = cfg.footprint.model;
  if (want == "auto") return phys;
  if (want == "point") return make_point_model();
  using Kind = VolumetricModel::Kind;
  static const std::map<Kind, std::string> names{{Kind::RigidBody, "rigid_body"},
                                                 {Kind::LidarWedge, "lidar_wedge"},
                                                 {Kind::RaycastCamera, "raycast_camera"}};
  const auto it = names.find(phys.kind);
  if (it == names.end() || it->second != want)
    throw std::invalid_argument("footprint.model '" + want +
                                "' does not match the suite's physical footprint");
  return phys;
}

ControllerConfig make_controller(const AppConfig& cfg, const DynamicsModel& dyn) {
  ControllerConfig cc;
  cc.horizon = cfg.controller.horizon;
  cc.dt = cfg.controller.dt > 0.0 ? cfg.controller.dt : dyn.dt;
  cc.R = cfg.controller.r_weight *
         Eigen::MatrixXd::Identity(dyn.control_dim, dyn.control_dim);
  cc.max_ilqr_iters = cfg.controller.max_ilqr_iters;
  if (cfg.controller.boundary_weight > 0.0) {
    const SearchSpace space = space_of(cfg);
    cc.boundary_weight = cfg.controller.boundary_weight;
    cc.bound_lo.setZero();
    cc.bound_hi = Eigen::Vector2d(space.lengths[0], space.lengths[1]);
    if (dyn.iz >= 0) cc.ground_z = cfg.controller.ground_margin_frac * space.min_length();
  }
  cc.ilqr_opts.mu_init = cfg.controller.mu_init;
  cc.ilqr_opts.ls_beta = cfg.controller.ls_beta;
  cc.ilqr_opts.ls_max_trials = cfg.controller.ls_max_trials;
  cc.ilqr_opts.armijo = cfg.controller.armijo;
  cc.ilqr_opts.tol = cfg.controller.tol;
  if (dyn.platform == Platform::Quadcopter12) {
    // The coverage cost has no gradient in altitude, attitude, or rates, so
    // anchor them: level attitude, damped vertical and body rates, altitude
    // held at the trial's start height. Same weights for both methods.
    cc.state_weight = Eigen::VectorXd::Zero(dyn.state_dim);
    cc.state_weight[2] = cfg.controller.quad_altitude_weight;
    cc.state_weight[3] = cfg.controller.quad_attitude_weight;
    cc.state_weight[4] = cfg.controller.quad_attitude_weight;
    cc.state_weight[8] = cfg.controller.quad_vz_weight;
    cc.state_weight.segment(9, 3).setConstant(cfg.controller.quad_rate_weight);
    cc.state_ref = Eigen::VectorXd::Zero(dyn.state_dim);
    cc.state_ref[2] = cfg.task.z0_frac * space_of(cfg).min_length();
  }
  return cc;
}

// Ground area swept by the camera's image rectangle: shoelace over the four
// corner rays' (clamped) ground hits. Qualitative by design.
double camera_corner_area(const VolumetricModel& m, const Eigen::MatrixXd& pts) {
  const int nv = m.n_samples / m.cam_nu;
  const int idx[4] = {0, nv - 1, m.n_samples - 1, (m.cam_nu - 1) * nv};
  double s = 0.0;
  for (int i = 0; i < 4; ++i) {
    const auto& a = pts.row(idx[i]);
    const auto& b = pts.row(idx[(i + 1) % 4]);
    s += a[0] * b[1] - b[0] * a[1];
  }
  return 0.5 * std::abs(s);
}

double trial_mean_step_ms(const TrialRecord& r) {
  if (r.steps_run <= 0) return 0.0;
  double s = 0.0;
  for (double w : r.wall_ms_trace) s += w;
  return s / r.steps_run;
}

double quantile(std::vector<double> v, double q) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const size_t lo = static_cast<size_t>(pos);
  const double frac = pos - static_cast<double>(lo);
  if (lo + 1 >= v.size()) return v.back();
  return v[lo] * (1.0 - frac) + v[lo + 1] * frac;
}

json trial_summary(const TrialRecord& r) {
  json j;
  j["seed"] = r.seed;
  j["suite"] = to_string(r.suite);
  j["method"] = to_string(r.method);
  j["platform"] = r.platform;
  j["failed"] = r.failed;
  j["failure_reason"] = r.failure_reason;
  j["completion_step"] = r.completion_step;
  j["success_under_budget"] = r.success_under_budget;
  j["steps_run"] = r.steps_run;
  j["budget"] = r.budget;
  j["cap"] = r.cap;
  j["remaining"] = r.remaining;
  j["final_metric"] = r.final_metric;
  j["mean_step_ms"] = trial_mean_step_ms(r);
  return j;
}

json agg_json(const MethodAggregate& a) {
  json j;
  j["n"] = a.n;
  j["completed"] = a.completed;
  j["under_budget"] = a.under_budget;
  j["failed"] = a.failed;
  j["median_steps"] = a.median_steps;
  j["q1_steps"] = a.q1_steps;
  j["q3_steps"] = a.q3_steps;
  j["mean_step_ms"] = a.mean_step_ms;
  return j;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

}  // namespace

Suite parse_suite(const std::string& name) {
  if (name == "q1") return Suite::Q1;
  if (name == "erasing") return Suite::Erasing;
  if (name == "ground") return Suite::Ground;
  if (name == "aerial") return Suite::Aerial;
  throw std::invalid_argument("unknown suite: " + name);
}

Method parse_method(const std::string& name) {
  if (name == "vec") return Method::Vec;
  if (name == "baseline") return Method::Baseline;
  throw std::invalid_argument("unknown method: " + name);
}

std::string to_string(Suite s) {
  switch (s) {
    case Suite::Q1: return "q1";
    case Suite::Erasing: return "erasing";
    case Suite::Ground: return "ground";
    case Suite::Aerial: return "aerial";
  }
  return "?";
}

std::string to_string(Method m) { return m == Method::Vec ? "vec" : "baseline"; }

int resolved_budget(const AppConfig& cfg, Suite suite) {
  if (cfg.task.budget > 0) return cfg.task.budget;
  switch (suite) {
    case Suite::Q1: return 150;
    case Suite::Erasing: return 400;
    case Suite::Ground: return 100;
    case Suite::Aerial: return 400;
  }
  return 0;
}

TrialSetup make_trial_setup(const AppConfig& cfg, Suite suite, unsigned long long seed) {
  const SearchSpace space = space_of(cfg);
  const std::string plat = platform_for(cfg, suite);
  const DynamicsModel dyn = make_dynamics(cfg, plat);
  Rng rng(seed);

  TrialSetup st;
  st.s0 = Eigen::VectorXd::Zero(dyn.state_dim);
  st.s0[dyn.ix] = space.lengths[0] * (0.1 + 0.8 * rng.uniform01());
  st.s0[dyn.iy] = space.lengths[1] * (0.1 + 0.8 * rng.uniform01());
  st.s0[dyn.itheta] = -M_PI + 2.0 * M_PI * rng.uniform01();
  if (dyn.iz >= 0) st.s0[dyn.iz] = cfg.task.z0_frac * space.min_length();

  if (plat == "double_integrator") {
    st.tool_points = build_tool(cfg.footprint);
    const double x0 = st.tool_points.col(0).minCoeff(), x1 = st.tool_points.col(0).maxCoeff();
    const double y0 = st.tool_points.col(1).minCoeff(), y1 = st.tool_points.col(1).maxCoeff();
    st.pivot[0] = x0 + (x1 - x0) * rng.uniform01();
    st.pivot[1] = y0 + (y1 - y0) * rng.uniform01();
  }

  if (suite == Suite::Erasing) {
    const Eigen::MatrixXd mask = build_mask(cfg, space);
    st.mask_target.emplace(space, mask);
    st.erase_points = mask_cell_centers(space, mask);
    st.erase_radius = cfg.task.erase_radius > 0.0
                          ? cfg.task.erase_radius
                          : 0.5 * median_nn_spacing(st.tool_points);
  } else {
    st.prior.emplace(draw_prior(cfg, space, rng));
    if (suite != Suite::Q1) {
      st.targets = sample_gmm(*st.prior, space, cfg.task.n_targets, rng);
      st.detection_radius = cfg.task.detection_radius > 0.0 ? cfg.task.detection_radius
                                                            : 0.05 * space.min_length();
    }
  }
  return st;
}

DynamicsModel suite_dynamics(const AppConfig& cfg, Suite suite) {
  return make_dynamics(cfg, platform_for(cfg, suite));
}

ControllerConfig trial_controller(const AppConfig& cfg, const DynamicsModel& dyn) {
  return make_controller(cfg, dyn);
}

VolumetricModel physical_footprint(const AppConfig& cfg, Suite suite, const TrialSetup& st) {
  return make_physical(cfg, platform_for(cfg, suite), space_of(cfg), st);
}

TrialRecord run_trial(const AppConfig& cfg, Suite suite, Method method, unsigned long long seed) {
  const SearchSpace space = space_of(cfg);
  const std::string plat = platform_for(cfg, suite);
  const TrialSetup st = make_trial_setup(cfg, suite, seed);
  const DynamicsModel dyn = make_dynamics(cfg, plat);
  const VolumetricModel phys = make_physical(cfg, plat, space, st);

  TrialRecord rec;
  rec.seed = seed;
  rec.suite = suite;
  rec.method = method;
  rec.platform = plat;
  rec.budget = resolved_budget(cfg, suite);
  rec.cap = suite == Suite::Q1 ? rec.budget : 3 * rec.budget;

  const BasisSet basis = build_basis(space, cfg.basis.modes_per_dim);
  const TargetDistribution target = suite == Suite::Erasing ? TargetDistribution(*st.mask_target)
                                                            : TargetDistribution(*st.prior);
  const Eigen::VectorXd phi = target_coefficients(basis, target, cfg.basis.quad_cells_per_dim);

  const VolumetricModel ctrl_model =
      method == Method::Vec ? controller_model(cfg, phys) : make_point_model();
  std::unique_ptr<CoverageEvaluator> eval;
  if (method == Method::Baseline)
    eval = std::make_unique<StandardEvaluator>(basis, dyn);
  else
    eval = std::make_unique<VolumetricEvaluator>(basis, ctrl_model, dyn);

  const ControllerConfig cc = make_controller(cfg, dyn);
  ControllerMemory mem(basis.n_modes());
  Eigen::VectorXd s = st.s0;

  const bool erasing = suite == Suite::Erasing;
  const Eigen::MatrixXd& goal_pts = erasing ? st.erase_points : st.targets;
  const double radius = erasing ? st.erase_radius : st.detection_radius;
  const double rad2 = radius * radius;
  std::vector<char> covered(suite == Suite::Q1 ? 0 : goal_pts.rows(), 0);
  int remaining = static_cast<int>(covered.size());

  for (int step = 1; step <= rec.cap; ++step) {
    StepResult r;
    try {
      if (cfg.task.force_zero_controls) {
        mem.fold(eval->values(s));
        r.executed_metric = ergodic_metric(basis.weights, mem.running_basis_mean(), phi);
        r.u = Eigen::VectorXd::Zero(dyn.control_dim);
        r.s_next = step_rk4(dyn, s, r.u, cc.dt);
        r.plan_cost = 0.0;
        r.ilqr_iters = 0;
        r.wall_ms = 0.0;
      } else {
        r = execute_step(cc, mem, basis, *eval, dyn, phi, s, cfg.output.timing);
      }
    } catch (const std::exception& e) {
      rec.failed = true;
      rec.failure_reason = e.what();
      break;
    }

    if (suite != Suite::Q1 || plat == "quadcopter") {
      Eigen::MatrixXd pts;
      try {
        pts = sample_points(phys, dyn, space, s);
      } catch (const std::exception& e) {
        rec.failed = true;
        rec.failure_reason = e.what();
        break;
      }
      for (Eigen::Index g = 0; g < goal_pts.rows() && suite != Suite::Q1; ++g) {
        if (covered[static_cast<size_t>(g)]) continue;
        for (Eigen::Index p = 0; p < pts.rows(); ++p) {
          if ((pts.row(p) - goal_pts.row(g)).squaredNorm() <= rad2) {
            covered[static_cast<size_t>(g)] = 1;
            --remaining;
            break;
          }
        }
      }
      if (plat == "quadcopter") rec.area_trace.push_back(camera_corner_area(phys, pts));
    }

    rec.states.push_back(s);
    rec.controls.push_back(r.u);
    rec.metric_trace.push_back(r.executed_metric);
    rec.plan_cost_trace.push_back(r.plan_cost);
    rec.iters_trace.push_back(r.ilqr_iters);
    rec.wall_ms_trace.push_back(r.wall_ms);
    rec.steps_run = step;
    s = r.s_next;

    if (suite != Suite::Q1 && remaining == 0) {
      rec.completion_step = step;
      break;
    }
  }

  rec.states.push_back(s);
  rec.remaining = remaining;
  rec.success_under_budget = rec.completion_step > 0 && rec.completion_step <= rec.budget;
  rec.final_metric = rec.metric_trace.empty() ? 0.0 : rec.metric_trace.back();
  return rec;
}

MethodAggregate aggregate(const std::vector<TrialRecord>& trials, int budget, int cap) {
  MethodAggregate a;
  a.n = static_cast<int>(trials.size());
  std::vector<double> steps;
  double ms_sum = 0.0;
  int ms_n = 0;
  for (const auto& t : trials) {
    if (t.failed) ++a.failed;
    if (t.completion_step > 0) {
      ++a.completed;
      if (t.completion_step <= budget) ++a.under_budget;
    }
    steps.push_back(t.completion_step > 0 ? static_cast<double>(t.completion_step)
                                          : static_cast<double>(cap));
    if (t.steps_run > 0) {
      ms_sum += trial_mean_step_ms(t);
      ++ms_n;
    }
  }
  a.median_steps = quantile(steps, 0.5);
  a.q1_steps = quantile(steps, 0.25);
  a.q3_steps = quantile(steps, 0.75);
  a.mean_step_ms = ms_n > 0 ? ms_sum / ms_n : 0.0;
  return a;
}

BenchReport run_benchmark(const AppConfig& cfg, Suite suite, int n_trials, int jobs) {
  if (n_trials < 1) throw std::invalid_argument("run_benchmark: n_trials must be at least 1");

  BenchReport rep;
  rep.suite = suite;
  rep.n_trials = n_trials;
  rep.budget = resolved_budget(cfg, suite);
  rep.cap = suite == Suite::Q1 ? rep.budget : 3 * rep.budget;

  struct Item {
    AppConfig cfg;
    Method method;
    unsigned long long seed;
  };
  std::vector<Item> items;
  if (suite == Suite::Q1) {
    std::vector<std::string> platforms;
    if (cfg.platform.name.empty())
      platforms = {"double_integrator", "diff_drive", "quadcopter"};
    else
      platforms = {cfg.platform.name};
    for (const auto& p : platforms) {
      AppConfig c = cfg;
      c.platform.name = p;
      for (int i = 0; i < n_trials; ++i) items.push_back({c, Method::Vec, cfg.task.seed_base + i});
    }
  } else {
    (void)platform_for(cfg, suite);  // fail fast on binding conflicts
    for (int i = 0; i < n_trials; ++i)
      items.push_back({cfg, Method::Vec, cfg.task.seed_base + i});
    for (int i = 0; i < n_trials; ++i)
      items.push_back({cfg, Method::Baseline, cfg.task.seed_base + i});
  }

  std::vector<TrialRecord> results(items.size());
  std::atomic<size_t> next{0};
  auto work = [&]() {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= items.size()) return;
      try {
        results[i] = run_trial(items[i].cfg, suite, items[i].method, items[i].seed);
      } catch (const std::exception& e) {
        TrialRecord r;
        r.seed = items[i].seed;
        r.suite = suite;
        r.method = items[i].method;
        r.platform = items[i].cfg.platform.name;
        r.budget = rep.budget;
        r.cap = rep.cap;
        r.failed = true;
        r.failure_reason = e.what();
        results[i] = r;
      }
    }
  };
  const int workers = std::max(1, jobs);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int i = 0; i < workers; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  for (auto& r : results) {
    if (r.method == Method::Vec)
      rep.vec_trials.push_back(std::move(r));
    else
      rep.baseline_trials.push_back(std::move(r));
  }
  rep.vec_agg = aggregate(rep.vec_trials, rep.budget, rep.cap);
  rep.baseline_agg = aggregate(rep.baseline_trials, rep.budget, rep.cap);
  rep.median_step_ratio = rep.baseline_trials.empty() || rep.baseline_agg.median_steps <= 0.0
                              ? 0.0
                              : rep.vec_agg.median_steps / rep.baseline_agg.median_steps;
  return rep;
}

std::vector<double> q1_metric_trace(const AppConfig& cfg, const std::string& platform,
                                    unsigned long long seed) {
  AppConfig c = cfg;
  c.platform.name = platform;
  return run_trial(c, Suite::Q1, Method::Vec, seed).metric_trace;
}

void write_trial_outputs(const std::string& dir, const AppConfig& cfg, const TrialRecord& rec) {
  fs::create_directories(dir);
  write_text(dir + "/trial.json", trial_summary(rec).dump(2) + "\n");

  const int T = rec.steps_run;
  Eigen::MatrixXd diag(T, 5);
  Eigen::MatrixXd trace(T, 3);
  double elapsed = 0.0;
  for (int t = 0; t < T; ++t) {
    diag(t, 0) = t + 1;
    diag(t, 1) = rec.metric_trace[t];
    diag(t, 2) = rec.plan_cost_trace[t];
    diag(t, 3) = rec.iters_trace[t];
    diag(t, 4) = rec.wall_ms_trace[t];
    elapsed += rec.wall_ms_trace[t];
    trace(t, 0) = t + 1;
    trace(t, 1) = rec.metric_trace[t];
    trace(t, 2) = elapsed;
  }
  io::write_csv_matrix(dir + "/diagnostics.csv", "step,E_v_executed,plan_cost,ilqr_iters,wall_ms",
                       diag);
  io::write_csv_matrix(dir + "/metric_trace.csv", "step,ergodic_metric,elapsed_wall_ms", trace);

  if (!rec.states.empty()) {
    const int n = static_cast<int>(rec.states.front().size());
    const int m = rec.controls.empty() ? 0 : static_cast<int>(rec.controls.front().size());
    Eigen::MatrixXd traj(rec.states.size(), 1 + n + m);
    traj.setZero();
    std::string header = "step";
    for (int i = 0; i < n; ++i) header += ",s" + std::to_string(i);
    for (int i = 0; i < m; ++i) header += ",u" + std::to_string(i);
    for (size_t t = 0; t < rec.states.size(); ++t) {
      traj(t, 0) = static_cast<double>(t);
      traj.block(t, 1, 1, n) = rec.states[t].transpose();
      if (t < rec.controls.size()) traj.block(t, 1 + n, 1, m) = rec.controls[t].transpose();
    }
    io::write_csv_matrix(dir + "/trajectory.csv", header, traj);
  }

  if (!rec.area_trace.empty()) {
    Eigen::MatrixXd area(rec.area_trace.size(), 2);
    for (size_t t = 0; t < rec.area_trace.size(); ++t) {
      area(t, 0) = static_cast<double>(t + 1);
      area(t, 1) = rec.area_trace[t];
    }
    io::write_csv_matrix(dir + "/footprint_area.csv", "step,area", area);
  }

  // Physical footprint at the final state, for plotting overlays.
  try {
    AppConfig c = cfg;
    if (rec.suite == Suite::Q1) c.platform.name = rec.platform;
    const SearchSpace space = space_of(c);
    const std::string plat = platform_for(c, rec.suite);
    const TrialSetup st = make_trial_setup(c, rec.suite, rec.seed);
    const DynamicsModel dyn = make_dynamics(c, plat);
    const VolumetricModel phys = make_physical(c, plat, space, st);
    const Eigen::MatrixXd pts = sample_points(phys, dyn, space, rec.states.back());
    Eigen::MatrixXd fp(pts.rows(), 3);
    for (Eigen::Index i = 0; i < pts.rows(); ++i) {
      fp(i, 0) = static_cast<double>(i);
      fp(i, 1) = pts(i, 0);
      fp(i, 2) = pts(i, 1);
    }
    io::write_csv_matrix(dir + "/footprint.csv", "index,x,y", fp);
  } catch (const std::exception&) {
    // a failed trial can end in a state the sensor model rejects; skip the dump
  }
}

void write_bench_outputs(const std::string& dir, const AppConfig& cfg, const BenchReport& rep) {
  fs::create_directories(dir);
  write_text(dir + "/resolved.json", resolved_config_json(cfg));

  auto trial_dir = [&](const TrialRecord& r) {
    std::string d = dir;
    if (rep.suite == Suite::Q1) d += "/" + r.platform;
    return d + "/seed" + std::to_string(r.seed) + "/" + to_string(r.method);
  };
  for (const auto& r : rep.vec_trials) write_trial_outputs(trial_dir(r), cfg, r);
  for (const auto& r : rep.baseline_trials) write_trial_outputs(trial_dir(r), cfg, r);

  json report;
  report["suite"] = to_string(rep.suite);
  report["n_trials"] = rep.n_trials;
  report["budget"] = rep.budget;
  report["cap"] = rep.cap;
  report["seed_base"] = cfg.task.seed_base;
  report["aggregates"]["vec"] = agg_json(rep.vec_agg);
  report["aggregates"]["baseline"] = agg_json(rep.baseline_agg);
  report["aggregates"]["median_step_ratio"] = rep.median_step_ratio;
  report["trials"]["vec"] = json::array();
  for (const auto& r : rep.vec_trials) report["trials"]["vec"].push_back(trial_summary(r));
  report["trials"]["baseline"] = json::array();
  for (const auto& r : rep.baseline_trials)
    report["trials"]["baseline"].push_back(trial_summary(r));
  write_text(dir + "/report.json", report.dump(2) + "\n");

  std::string csv =
      "suite,method,platform,seed,completed,success_under_budget,completion_step,steps_run,"
      "failed,final_metric,mean_step_ms\n";
  auto row = [&](const TrialRecord& r) {
    csv += to_string(r.suite) + "," + to_string(r.method) + "," + r.platform + "," +
           std::to_string(r.seed) + "," + (r.completion_step > 0 ? "1" : "0") + "," +
           (r.success_under_budget ? "1" : "0") + "," + std::to_string(r.completion_step) + "," +
           std::to_string(r.steps_run) + "," + (r.failed ? "1" : "0") + "," +
           json(r.final_metric).dump() + "," + json(trial_mean_step_ms(r)).dump() + "\n";
  };
  for (const auto& r : rep.vec_trials) row(r);
  for (const auto& r : rep.baseline_trials) row(r);
  write_text(dir + "/summary.csv", csv);
}

}  // namespace ergo
