#pragma once

#include <cmath>
#include <utility>

#include <Eigen/Dense>

namespace ergo {

enum class Platform { DoubleIntegrator2DOri, DiffDrive2ndOrder, Quadcopter12 };

struct QuadcopterParams {
  double mass = 1.0;
  double gravity = 9.81;
  Eigen::Vector3d inertia{0.01, 0.01, 0.02};
};

/// Platform model: continuous dynamics, control box, integration step size,
/// and the state indices the volumetric models read their pose from.
struct DynamicsModel {
  Platform platform;
  int state_dim = 0;
  int control_dim = 0;
  double dt = 0.1;
  Eigen::VectorXd u_min, u_max;
  QuadcopterParams quad;

  int ix = 0, iy = 1;   // planar position
  int itheta = 2;       // planar heading (yaw for the quadcopter)
  int iz = -1;          // altitude, -1 when the platform is planar

  Eigen::Vector2d planar_position(const Eigen::VectorXd& s) const { return {s[ix], s[iy]}; }
  double heading(const Eigen::VectorXd& s) const { return s[itheta]; }
};

DynamicsModel make_double_integrator(double dt = 0.1);
DynamicsModel make_diff_drive(double dt = 0.1);
DynamicsModel make_quadcopter(double dt = 0.05);

inline double wrap_angle(double a) {
  a = std::fmod(a + M_PI, 2.0 * M_PI);
  if (a <= 0.0) a += 2.0 * M_PI;
  return a - M_PI;
}

Eigen::VectorXd clamp_control(const DynamicsModel& model, const Eigen::VectorXd& u);

/// Continuous-time right-hand side f(s, u). Control is used as given (the
/// box is applied by step_rk4).
Eigen::VectorXd derivative(const DynamicsModel& model, const Eigen::VectorXd& s,
                           const Eigen::VectorXd& u);

/// Classical RK4 with zero-order-hold control, box-clamped control, and angle
/// wrapping after the step. Throws on non-finite results and on quadcopter
/// pitch at or beyond pi/2.
Eigen::VectorXd step_rk4(const DynamicsModel& model, const Eigen::VectorXd& s,
                         const Eigen::VectorXd& u, double dt);

/// Discrete-time (A, B) of the RK4 step by central finite differences
/// (h = 1e-6) on the unwrapped step, control perturbations unclamped.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> linearize(const DynamicsModel& model,
                                                      const Eigen::VectorXd& s,
                                                      const Eigen::VectorXd& u, double dt);

/// Closed-form discrete (A, B) for the double integrator, as a cross-check
/// of the finite-difference path.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> di_analytic_linearization(const DynamicsModel& model,
                                                                      double dt);

/// Attitude rotation matrix body->world for the quadcopter (ZYX Euler).
Eigen::Matrix3d quad_rotation(const Eigen::VectorXd& s);

}  // namespace ergo
