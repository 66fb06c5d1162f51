#include "ergo/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ergo {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

/// Reads known keys out of one JSON object and complains, with the full
/// dotted path, about any key it was never asked for.
class Obj {
 public:
  Obj(json j, std::string path) : j_(std::move(j)), path_(std::move(path)) {
    if (!j_.is_object())
      fail(path_.empty() ? "config root must be a JSON object" : path_ + " must be an object");
  }

  template <class T>
  void get(const std::string& k, T& out) {
    seen_.insert(k);
    const auto it = j_.find(k);
    if (it == j_.end()) return;
    try {
      out = it->template get<T>();
    } catch (const json::exception&) {
      fail("config key " + path_ + k + " has the wrong type");
    }
  }

  Obj child(const std::string& k) {
    seen_.insert(k);
    const auto it = j_.find(k);
    return Obj(it == j_.end() ? json::object() : *it, path_ + k + ".");
  }

  void done() const {
    for (const auto& el : j_.items())
      if (!seen_.count(el.key())) fail("unknown config key: " + path_ + el.key());
  }

 private:
  json j_;
  std::string path_;
  std::set<std::string> seen_;
};

void apply_override(json& doc, const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0)
    fail("override must look like dotted.path=value: " + spec);
  const std::string path = spec.substr(0, eq);
  const std::string value = spec.substr(eq + 1);

  json* cur = &doc;
  size_t start = 0;
  for (;;) {
    const auto dot = path.find('.', start);
    const std::string part = path.substr(start, dot - start);
    if (part.empty()) fail("override has an empty path segment: " + spec);
    if (dot == std::string::npos) {
      json leaf;
      try {
        leaf = json::parse(value);
      } catch (const json::exception&) {
        leaf = value;  // bare words are strings
      }
      (*cur)[part] = leaf;
      return;
    }
    if (cur->contains(part) && !(*cur)[part].is_object())
      fail("override path crosses a non-object value: " + path);
    cur = &(*cur)[part];
    start = dot + 1;
  }
}

void check(bool ok, const std::string& msg) {
  if (!ok) fail(msg);
}

void validate(const AppConfig& c) {
  check(c.space.lengths.size() == 2, "space.lengths: benchmarks run on a 2-D search space");
  for (double L : c.space.lengths)
    check(L > 0.0 && std::isfinite(L), "space.lengths entries must be positive");

  check(c.basis.modes_per_dim >= 1, "basis.modes_per_dim must be at least 1");
  check(c.basis.quad_cells_per_dim >= 2 * c.basis.modes_per_dim,
        "basis.quad_cells_per_dim must be at least twice basis.modes_per_dim");

  static const std::set<std::string> kPlatforms{"", "double_integrator", "diff_drive",
                                                "quadcopter"};
  check(kPlatforms.count(c.platform.name) > 0,
        "platform.name must be double_integrator, diff_drive, or quadcopter");
  check(c.platform.dt >= 0.0, "platform.dt must be non-negative (0 = default)");

  static const std::set<std::string> kModels{"auto", "point", "rigid_body", "lidar_wedge",
                                             "raycast_camera"};
  check(kModels.count(c.footprint.model) > 0, "footprint.model is not a known variant");
  check(c.footprint.n_samples >= 1, "footprint.n_samples must be at least 1");
  static const std::set<std::string> kShapes{"disc", "bar", "lshape", "file"};
  check(kShapes.count(c.footprint.tool.shape) > 0,
        "footprint.tool.shape must be disc, bar, lshape, or file");
  check(c.footprint.tool.size > 0.0, "footprint.tool.size must be positive");
  check(c.footprint.tool.shape != "file" || !c.footprint.tool.file.empty(),
        "footprint.tool.file is required when footprint.tool.shape is file");
  check(c.footprint.lidar.fov_deg > 0.0 && c.footprint.lidar.fov_deg < 360.0,
        "footprint.lidar.fov_deg must be in (0, 360)");
  check(c.footprint.lidar.range_frac > 0.0, "footprint.lidar.range_frac must be positive");
  check(c.footprint.lidar.n_radial >= 1 && c.footprint.lidar.n_angular >= 1,
        "footprint.lidar grid counts must be at least 1");
  check(c.footprint.camera.n_u >= 1 && c.footprint.camera.n_v >= 1,
        "footprint.camera grid counts must be at least 1");
  check(c.footprint.camera.hfov_deg > 0.0 && c.footprint.camera.hfov_deg < 180.0,
        "footprint.camera.hfov_deg must be in (0, 180)");
  check(c.footprint.camera.vfov_deg > 0.0 && c.footprint.camera.vfov_deg < 180.0,
        "footprint.camera.vfov_deg must be in (0, 180)");
  check(c.footprint.camera.tilt_deg >= 0.0 && c.footprint.camera.tilt_deg < 90.0,
        "footprint.camera.tilt_deg must be in [0, 90)");
  check(c.footprint.camera.clip_range > 0.0, "footprint.camera.clip_range must be positive");

  check(c.controller.horizon >= 2, "controller.horizon must be at least 2");
  check(c.controller.dt >= 0.0, "controller.dt must be non-negative (0 = platform dt)");
  check(c.controller.r_weight > 0.0, "controller.r_weight must be positive");
  check(c.controller.max_ilqr_iters >= 1, "controller.max_ilqr_iters must be at least 1");
  check(c.controller.mu_init > 0.0, "controller.mu_init must be positive");
  check(c.controller.ls_beta > 0.0 && c.controller.ls_beta < 1.0,
        "controller.ls_beta must be in (0, 1)");
  check(c.controller.ls_max_trials >= 1, "controller.ls_max_trials must be at least 1");
  check(c.controller.armijo > 0.0, "controller.armijo must be positive");
  check(c.controller.tol > 0.0, "controller.tol must be positive");
  check(c.controller.quad_attitude_weight >= 0.0,
        "controller.quad_attitude_weight must be non-negative");
  check(c.controller.quad_rate_weight >= 0.0, "controller.quad_rate_weight must be non-negative");
  check(c.controller.quad_vz_weight >= 0.0, "controller.quad_vz_weight must be non-negative");
  check(c.controller.quad_altitude_weight >= 0.0,
        "controller.quad_altitude_weight must be non-negative");
  check(c.controller.boundary_weight >= 0.0, "controller.boundary_weight must be non-negative");
  check(c.controller.ground_margin_frac >= 0.0 && c.controller.ground_margin_frac < 1.0,
        "controller.ground_margin_frac must be in [0, 1)");

  static const std::set<std::string> kSuites{"q1", "erasing", "ground", "aerial"};
  check(kSuites.count(c.task.suite) > 0, "task.suite must be q1, erasing, ground, or aerial");
  check(c.task.n_trials >= 1, "task.n_trials must be at least 1");
  check(c.task.budget >= 0, "task.budget must be non-negative (0 = suite default)");
  check(c.task.erase_radius >= 0.0, "task.erase_radius must be non-negative (0 = auto)");
  check(c.task.detection_radius >= 0.0, "task.detection_radius must be non-negative (0 = auto)");
  check(c.task.n_targets >= 1, "task.n_targets must be at least 1");
  check(c.task.z0_frac > 0.0, "task.z0_frac must be positive");
  static const std::set<std::string> kMasks{"ring", "disc", "bar", "file"};
  check(kMasks.count(c.task.mask.kind) > 0, "task.mask.kind must be ring, disc, bar, or file");
  check(c.task.mask.kind != "file" || !c.task.mask.file.empty(),
        "task.mask.file is required when task.mask.kind is file");
  check(c.task.mask.cells >= 2, "task.mask.cells must be at least 2");
  check(c.task.mask.r_out_frac > c.task.mask.r_in_frac && c.task.mask.r_in_frac >= 0.0,
        "task.mask radii must satisfy 0 <= r_in_frac < r_out_frac");
  check(c.task.mask.len_frac > 0.0 && c.task.mask.wid_frac > 0.0,
        "task.mask bar extents must be positive");
  check(c.task.prior.components >= 1, "task.prior.components must be at least 1");
  check(c.task.prior.eig_min_frac > 0.0 && c.task.prior.eig_max_frac >= c.task.prior.eig_min_frac,
        "task.prior eigenvalue range must satisfy 0 < min <= max");

  check(!c.output.dir.empty(), "output.dir must not be empty");
}

AppConfig from_json(const json& doc) {
  AppConfig c;
  Obj root(doc, "");

  Obj space = root.child("space");
  space.get("lengths", c.space.lengths);
  space.done();

  Obj basis = root.child("basis");
  basis.get("modes_per_dim", c.basis.modes_per_dim);
  basis.get("quad_cells_per_dim", c.basis.quad_cells_per_dim);
  basis.done();

  Obj platform = root.child("platform");
  platform.get("name", c.platform.name);
  platform.get("dt", c.platform.dt);
  platform.done();

  Obj fp = root.child("footprint");
  fp.get("model", c.footprint.model);
  fp.get("n_samples", c.footprint.n_samples);
  Obj tool = fp.child("tool");
  tool.get("shape", c.footprint.tool.shape);
  tool.get("size", c.footprint.tool.size);
  tool.get("file", c.footprint.tool.file);
  tool.done();
  Obj lidar = fp.child("lidar");
  lidar.get("fov_deg", c.footprint.lidar.fov_deg);
  lidar.get("range_frac", c.footprint.lidar.range_frac);
  lidar.get("n_radial", c.footprint.lidar.n_radial);
  lidar.get("n_angular", c.footprint.lidar.n_angular);
  lidar.done();
  Obj cam = fp.child("camera");
  cam.get("n_u", c.footprint.camera.n_u);
  cam.get("n_v", c.footprint.camera.n_v);
  cam.get("hfov_deg", c.footprint.camera.hfov_deg);
  cam.get("vfov_deg", c.footprint.camera.vfov_deg);
  cam.get("tilt_deg", c.footprint.camera.tilt_deg);
  cam.get("clip_range", c.footprint.camera.clip_range);
  cam.done();
  fp.done();

  Obj ctrl = root.child("controller");
  ctrl.get("horizon", c.controller.horizon);
  ctrl.get("dt", c.controller.dt);
  ctrl.get("r_weight", c.controller.r_weight);
  ctrl.get("max_ilqr_iters", c.controller.max_ilqr_iters);
  ctrl.get("mu_init", c.controller.mu_init);
  ctrl.get("ls_beta", c.controller.ls_beta);
  ctrl.get("ls_max_trials", c.controller.ls_max_trials);
  ctrl.get("armijo", c.controller.armijo);
  ctrl.get("tol", c.controller.tol);
  ctrl.get("quad_attitude_weight", c.controller.quad_attitude_weight);
  ctrl.get("quad_rate_weight", c.controller.quad_rate_weight);
  ctrl.get("quad_vz_weight", c.controller.quad_vz_weight);
  ctrl.get("quad_altitude_weight", c.controller.quad_altitude_weight);
  ctrl.get("boundary_weight", c.controller.boundary_weight);
  ctrl.get("ground_margin_frac", c.controller.ground_margin_frac);
  ctrl.done();

  Obj task = root.child("task");
  task.get("suite", c.task.suite);
  task.get("n_trials", c.task.n_trials);
  task.get("seed_base", c.task.seed_base);
  task.get("budget", c.task.budget);
  task.get("erase_radius", c.task.erase_radius);
  task.get("detection_radius", c.task.detection_radius);
  task.get("n_targets", c.task.n_targets);
  task.get("z0_frac", c.task.z0_frac);
  task.get("force_zero_controls", c.task.force_zero_controls);
  Obj mask = task.child("mask");
  mask.get("kind", c.task.mask.kind);
  mask.get("file", c.task.mask.file);
  mask.get("cells", c.task.mask.cells);
  mask.get("r_out_frac", c.task.mask.r_out_frac);
  mask.get("r_in_frac", c.task.mask.r_in_frac);
  mask.get("len_frac", c.task.mask.len_frac);
  mask.get("wid_frac", c.task.mask.wid_frac);
  mask.done();
  Obj prior = task.child("prior");
  prior.get("components", c.task.prior.components);
  prior.get("eig_min_frac", c.task.prior.eig_min_frac);
  prior.get("eig_max_frac", c.task.prior.eig_max_frac);
  prior.done();
  task.done();

  Obj out = root.child("output");
  out.get("dir", c.output.dir);
  out.get("timing", c.output.timing);
  out.done();

  root.done();
  validate(c);
  return c;
}

json to_json(const AppConfig& c) {
  json j;
  j["space"]["lengths"] = c.space.lengths;
  j["basis"]["modes_per_dim"] = c.basis.modes_per_dim;
  j["basis"]["quad_cells_per_dim"] = c.basis.quad_cells_per_dim;
  j["platform"]["name"] = c.platform.name;
  j["platform"]["dt"] = c.platform.dt;
  j["footprint"]["model"] = c.footprint.model;
  j["footprint"]["n_samples"] = c.footprint.n_samples;
  j["footprint"]["tool"]["shape"] = c.footprint.tool.shape;
  j["footprint"]["tool"]["size"] = c.footprint.tool.size;
  j["footprint"]["tool"]["file"] = c.footprint.tool.file;
  j["footprint"]["lidar"]["fov_deg"] = c.footprint.lidar.fov_deg;
  j["footprint"]["lidar"]["range_frac"] = c.footprint.lidar.range_frac;
  j["footprint"]["lidar"]["n_radial"] = c.footprint.lidar.n_radial;
  j["footprint"]["lidar"]["n_angular"] = c.footprint.lidar.n_angular;
  j["footprint"]["camera"]["n_u"] = c.footprint.camera.n_u;
  j["footprint"]["camera"]["n_v"] = c.footprint.camera.n_v;
  j["footprint"]["camera"]["hfov_deg"] = c.footprint.camera.hfov_deg;
  j["footprint"]["camera"]["vfov_deg"] = c.footprint.camera.vfov_deg;
  j["footprint"]["camera"]["tilt_deg"] = c.footprint.camera.tilt_deg;
  j["footprint"]["camera"]["clip_range"] = c.footprint.camera.clip_range;
  j["controller"]["horizon"] = c.controller.horizon;
  j["controller"]["dt"] = c.controller.dt;
  j["controller"]["r_weight"] = c.controller.r_weight;
  j["controller"]["max_ilqr_iters"] = c.controller.max_ilqr_iters;
  j["controller"]["mu_init"] = c.controller.mu_init;
  j["controller"]["ls_beta"] = c.controller.ls_beta;
  j["controller"]["ls_max_trials"] = c.controller.ls_max_trials;
  j["controller"]["armijo"] = c.controller.armijo;
  j["controller"]["tol"] = c.controller.tol;
  j["controller"]["quad_attitude_weight"] = c.controller.quad_attitude_weight;
  j["controller"]["quad_rate_weight"] = c.controller.quad_rate_weight;
  j["controller"]["quad_vz_weight"] = c.controller.quad_vz_weight;
  j["controller"]["quad_altitude_weight"] = c.controller.quad_altitude_weight;
  j["controller"]["boundary_weight"] = c.controller.boundary_weight;
  j["controller"]["ground_margin_frac"] = c.controller.ground_margin_frac;
  j["task"]["suite"] = c.task.suite;
  j["task"]["n_trials"] = c.task.n_trials;
  j["task"]["seed_base"] = c.task.seed_base;
  j["task"]["budget"] = c.task.budget;
  j["task"]["erase_radius"] = c.task.erase_radius;
  j["task"]["detection_radius"] = c.task.detection_radius;
  j["task"]["n_targets"] = c.task.n_targets;
  j["task"]["z0_frac"] = c.task.z0_frac;
  j["task"]["force_zero_controls"] = c.task.force_zero_controls;
  j["task"]["mask"]["kind"] = c.task.mask.kind;
  j["task"]["mask"]["file"] = c.task.mask.file;
  j["task"]["mask"]["cells"] = c.task.mask.cells;
  j["task"]["mask"]["r_out_frac"] = c.task.mask.r_out_frac;
  j["task"]["mask"]["r_in_frac"] = c.task.mask.r_in_frac;
  j["task"]["mask"]["len_frac"] = c.task.mask.len_frac;
  j["task"]["mask"]["wid_frac"] = c.task.mask.wid_frac;
  j["task"]["prior"]["components"] = c.task.prior.components;
  j["task"]["prior"]["eig_min_frac"] = c.task.prior.eig_min_frac;
  j["task"]["prior"]["eig_max_frac"] = c.task.prior.eig_max_frac;
  j["output"]["dir"] = c.output.dir;
  j["output"]["timing"] = c.output.timing;
  return j;
}

const std::map<std::string, std::string>& key_docs() {
  static const std::map<std::string, std::string> docs{
      {"space.lengths", "side lengths of the rectangular search space, meters"},
      {"basis.modes_per_dim", "Fourier modes per dimension (K)"},
      {"basis.quad_cells_per_dim", "quadrature grid resolution for target coefficients"},
      {"platform.name", "robot platform; empty = bound by the suite"},
      {"platform.dt", "integration step, seconds; 0 = platform default"},
      {"footprint.model", "controller footprint; auto = physical model of the suite"},
      {"footprint.n_samples", "point budget for sampled tool footprints"},
      {"footprint.tool.shape", "procedural tool shape or 'file'"},
      {"footprint.tool.size", "tool characteristic size, meters"},
      {"footprint.tool.file", "CSV point set (columns x,y) when shape=file"},
      {"footprint.lidar.fov_deg", "lidar wedge field of view, degrees"},
      {"footprint.lidar.range_frac", "lidar range as a fraction of the shortest side"},
      {"footprint.lidar.n_radial", "lidar samples along each ray"},
      {"footprint.lidar.n_angular", "lidar rays across the wedge"},
      {"footprint.camera.n_u", "camera ray grid width"},
      {"footprint.camera.n_v", "camera ray grid height"},
      {"footprint.camera.hfov_deg", "camera horizontal field of view, degrees"},
      {"footprint.camera.vfov_deg", "camera vertical field of view, degrees"},
      {"footprint.camera.tilt_deg", "camera pitch from straight down, degrees"},
      {"footprint.camera.clip_range", "ray truncation distance, meters"},
      {"controller.horizon", "planning horizon H, steps"},
      {"controller.dt", "controller step, seconds; 0 = platform dt"},
      {"controller.r_weight", "control effort weight (deviation from neutral)"},
      {"controller.max_ilqr_iters", "iLQR iterations per replan"},
      {"controller.mu_init", "initial Levenberg regularization"},
      {"controller.ls_beta", "line-search backtracking factor"},
      {"controller.ls_max_trials", "line-search trials per iteration"},
      {"controller.armijo", "line-search sufficient-decrease fraction"},
      {"controller.tol", "stop when the cost gain falls below this"},
      {"controller.quad_attitude_weight", "quad roll/pitch anchor; keeps the planner level"},
      {"controller.quad_rate_weight", "quad body-rate damping weight"},
      {"controller.quad_vz_weight", "quad vertical-speed damping weight"},
      {"controller.quad_altitude_weight", "quad altitude anchor toward the start height"},
      {"controller.boundary_weight", "keeps planned positions inside the workspace box"},
      {"controller.ground_margin_frac", "planning floor for the camera, fraction of min side"},
      {"task.suite", "q1 | erasing | ground | aerial"},
      {"task.n_trials", "trials per method in a benchmark"},
      {"task.seed_base", "seed of trial i is seed_base + i"},
      {"task.budget", "nominal step budget; 0 = suite default (150/400/100/400)"},
      {"task.erase_radius", "erase distance, meters; 0 = half the tool sample spacing"},
      {"task.detection_radius", "detection distance, meters; 0 = 0.05 * shortest side"},
      {"task.n_targets", "hidden targets per search trial"},
      {"task.z0_frac", "aerial start altitude as a fraction of the shortest side"},
      {"task.force_zero_controls", "debug hook: execute zero controls instead of planning"},
      {"task.mask.kind", "erasing target mask: ring | disc | bar | file"},
      {"task.mask.file", "PGM or CSV mask when kind=file"},
      {"task.mask.cells", "mask grid resolution per side"},
      {"task.mask.r_out_frac", "ring/disc outer radius, fraction of the shortest side"},
      {"task.mask.r_in_frac", "ring inner radius, fraction of the shortest side"},
      {"task.mask.len_frac", "bar mask length, fraction of the x side"},
      {"task.mask.wid_frac", "bar mask width, fraction of the y side"},
      {"task.prior.components", "Gaussian components in the randomized prior"},
      {"task.prior.eig_min_frac", "min covariance eigenvalue, fraction of L^2"},
      {"task.prior.eig_max_frac", "max covariance eigenvalue, fraction of L^2"},
      {"output.dir", "output root; the ERGO_OUT_ROOT env var overrides it"},
      {"output.timing", "record wall times; disable for bitwise-identical outputs"},
  };
  return docs;
}

void walk_keys(const json& j, const std::string& prefix,
               std::vector<std::pair<std::string, std::string>>& out) {
  for (const auto& el : j.items()) {
    const std::string key = prefix.empty() ? el.key() : prefix + "." + el.key();
    if (el.value().is_object())
      walk_keys(el.value(), key, out);
    else
      out.emplace_back(key, el.value().dump());
  }
}

}  // namespace

AppConfig parse_config_text(const std::string& text, const std::vector<std::string>& overrides) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const size_t upto = std::min(text.size(), static_cast<size_t>(e.byte));
    const long line = 1 + std::count(text.begin(), text.begin() + upto, '\n');
    fail("config parse error at line " + std::to_string(line) + ": " + e.what());
  }
  for (const auto& ov : overrides) apply_override(doc, ov);
  return from_json(doc);
}

AppConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  if (path.empty()) return parse_config_text("{}", overrides);
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot read config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), overrides);
}

std::string resolved_config_json(const AppConfig& cfg) { return to_json(cfg).dump(2) + "\n"; }

std::string config_reference() {
  std::vector<std::pair<std::string, std::string>> keys;
  walk_keys(to_json(AppConfig{}), "", keys);
  size_t kw = 0, dw = 0;
  for (const auto& [k, d] : keys) {
    kw = std::max(kw, k.size());
    dw = std::max(dw, d.size());
  }
  std::ostringstream out;
  out << "Configuration reference. Values shown are the defaults; any key can\n"
         "be set in the JSON config file or overridden with --set key=value.\n\n";
  const auto& docs = key_docs();
  for (const auto& [k, d] : keys) {
    out << k << std::string(kw - k.size() + 2, ' ') << d << std::string(dw - d.size() + 2, ' ');
    const auto it = docs.find(k);
    out << (it != docs.end() ? it->second : "") << "\n";
  }
  return out.str();
}

}  // namespace ergo
