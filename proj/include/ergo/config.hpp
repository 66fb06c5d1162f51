#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ergo {

/// Fully-resolved run configuration. Defaults here are the single source of
/// truth; the JSON loader only overwrites what a file or override names, and
/// rejects keys it does not know.
struct SpaceConfig {
  std::vector<double> lengths{1.0, 1.0};
};

struct BasisConfig {
  int modes_per_dim = 10;
  int quad_cells_per_dim = 256;
};

struct PlatformConfig {
  std::string name;  // empty = bound by the suite; else double_integrator|diff_drive|quadcopter
  double dt = 0.0;   // 0 = platform default
};

struct ToolConfig {
  std::string shape = "disc";  // disc|bar|lshape|file
  double size = 0.12;          // meters: disc radius, bar length, L arm
  std::string file;            // CSV point set when shape = file
};

struct LidarConfig {
  double fov_deg = 120.0;
  double range_frac = 0.25;  // max range as a fraction of the shortest side
  int n_radial = 25;
  int n_angular = 40;
};

struct CameraConfig {
  int n_u = 40;
  int n_v = 25;
  double hfov_deg = 60.0;
  double vfov_deg = 45.0;
  double tilt_deg = 20.0;
  double clip_range = 2.0;  // meters
};

struct FootprintConfig {
  std::string model = "auto";  // auto|point|rigid_body|lidar_wedge|raycast_camera
  int n_samples = 1000;        // tool point budget (sensor grids are explicit)
  ToolConfig tool;
  LidarConfig lidar;
  CameraConfig camera;
};

struct ControllerConfigIn {
  int horizon = 20;
  double dt = 0.0;  // 0 = platform dt
  double r_weight = 1e-2;
  int max_ilqr_iters = 12;
  double mu_init = 1e-6;
  double ls_beta = 0.5;
  int ls_max_trials = 8;
  double armijo = 1e-4;
  double tol = 1e-10;
  // Quadcopter state anchoring (the coverage cost alone leaves altitude and
  // attitude unobservable, so the optimizer needs a restoring term there).
  // Applied identically to both methods; zero disables a term.
  double quad_attitude_weight = 2.0;
  double quad_rate_weight = 0.1;    // body rates
  double quad_vz_weight = 0.3;      // vertical speed (tames dive/launch cycles)
  double quad_altitude_weight = 1.0;
  // Keeps plans inside the workspace (the cosine metric is periodic and
  // cannot tell the box from its mirror images). Zero disables.
  double boundary_weight = 50.0;
  // Planning floor for the quadcopter, as a fraction of the shortest side;
  // the ray-cast camera is undefined at or below the ground plane.
  double ground_margin_frac = 0.1;
};

struct MaskConfig {
  std::string kind = "ring";  // ring|disc|bar|file
  std::string file;
  int cells = 32;
  double r_out_frac = 0.32;
  double r_in_frac = 0.18;
  double len_frac = 0.6;  // bar mask extents
  double wid_frac = 0.2;
};

struct PriorConfig {
  int components = 3;
  double eig_min_frac = 0.005;  // covariance eigenvalue range, fraction of L^2
  double eig_max_frac = 0.02;
};

struct TaskConfigIn {
  std::string suite = "erasing";  // q1|erasing|ground|aerial
  int n_trials = 25;
  unsigned long long seed_base = 1000;
  int budget = 0;                 // 0 = suite default (150/400/100/400)
  double erase_radius = 0.0;      // 0 = half the tool sample spacing
  double detection_radius = 0.0;  // 0 = 0.05 * shortest side
  int n_targets = 3;
  double z0_frac = 0.25;  // initial altitude as a fraction of the shortest side
  bool force_zero_controls = false;
  MaskConfig mask;
  PriorConfig prior;
};

struct OutputConfig {
  std::string dir = "out";
  bool timing = true;  // false makes every wall-time field exactly 0 for bitwise runs
};

struct AppConfig {
  SpaceConfig space;
  BasisConfig basis;
  PlatformConfig platform;
  FootprintConfig footprint;
  ControllerConfigIn controller;
  TaskConfigIn task;
  OutputConfig output;
};

/// Parse a JSON config document. Unknown keys anywhere raise
/// std::invalid_argument naming the dotted path; so do out-of-range values.
/// Overrides are "dotted.path=value" strings applied before validation.
AppConfig parse_config_text(const std::string& text, const std::vector<std::string>& overrides);

/// Like parse_config_text but reads the file (empty path = defaults only).
AppConfig load_config(const std::string& path, const std::vector<std::string>& overrides);

/// Canonical JSON echo of a resolved config; feeding it back through
/// parse_config_text reproduces the config exactly.
std::string resolved_config_json(const AppConfig& cfg);

/// Human-readable reference of every key, its default, and its meaning.
std::string config_reference();

}  // namespace ergo
