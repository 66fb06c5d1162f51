#pragma once

#include <Eigen/Dense>

#include "ergo/basis.hpp"
#include "ergo/dynamics.hpp"
#include "ergo/kernels.hpp"
#include "ergo/space.hpp"

namespace ergo {

/// Differentiable mapping from a robot state to N points in the search
/// space: the robot's footprint (tool shape) or sensor coverage, used in
/// place of the single position point by the volumetric controller.
struct VolumetricModel {
  enum class Kind { Point, RigidBody, LidarWedge, RaycastCamera };

  Kind kind = Kind::Point;
  int n_samples = 1;

  // RigidBody and LidarWedge: fixed body-frame points (N x 2), moved by the
  // planar pose. For the wedge these are the precomputed polar grid samples.
  Eigen::MatrixXd body_points;

  // RaycastCamera: precomputed unit ray directions in the body frame
  // (N x 3, forward tilt already applied) and the range cutoff.
  Eigen::MatrixXd rays;
  double clip_range = 0.0;

  // Construction parameters, kept for config echo.
  double lidar_fov = 0.0, lidar_max_range = 0.0;
  int lidar_n_radial = 0, lidar_n_angular = 0;
  double cam_hfov = 0.0, cam_vfov = 0.0, cam_tilt = 0.0;
  int cam_nu = 0, cam_nv = 0;
};

VolumetricModel make_point_model();
VolumetricModel make_rigid_body(Eigen::MatrixXd body_points);
/// Polar grid: n_radial x n_angular midpoint samples, radii uniform in
/// [0.01 * max_range, max_range] (areal density ~ 1/r), forward = +x.
VolumetricModel make_lidar_wedge(double fov, double max_range, int n_radial, int n_angular);
/// Pinhole grid of n_u x n_v rays, uniform in tangent space, optical axis
/// pitched forward from nadir by tilt_rad.
VolumetricModel make_raycast_camera(int n_u, int n_v, double hfov, double vfov, double tilt_rad,
                                    double clip_range);

/// State dims that move the samples: planar pose for the body variants, the
/// full 6-DOF pose for the camera.
std::vector<int> dependent_dims(const VolumetricModel& model, const DynamicsModel& dyn);

/// N footprint points for state s (rows). Camera rays are intersected with
/// the ground plane, truncated at clip_range when they miss, and clamped
/// into the box.
Eigen::MatrixXd sample_points(const VolumetricModel& model, const DynamicsModel& dyn,
                              const SearchSpace& space, const Eigen::VectorXd& s);

/// d(sample)/d(state) in packed form: analytic for Point and RigidBody,
/// central differences (h = 1e-6) over the dependent dims for the sensors.
kernels::PackedJacobians sample_jacobians(const VolumetricModel& model, const DynamicsModel& dyn,
                                          const SearchSpace& space, const Eigen::VectorXd& s);

/// f^v over all modes: mean basis value over the footprint points.
Eigen::VectorXd vol_basis_all(const BasisSet& basis, const VolumetricModel& model,
                              const DynamicsModel& dyn, const Eigen::VectorXd& s);

/// d f^v / d s over all modes (n_modes x state_dim).
Eigen::MatrixXd vol_basis_grad_all(const BasisSet& basis, const VolumetricModel& model,
                                   const DynamicsModel& dyn, const Eigen::VectorXd& s);

double vol_basis(const BasisSet& basis, const VolumetricModel& model, const DynamicsModel& dyn,
                 const Eigen::VectorXi& k, const Eigen::VectorXd& s);
Eigen::VectorXd vol_basis_grad(const BasisSet& basis, const VolumetricModel& model,
                               const DynamicsModel& dyn, const Eigen::VectorXi& k,
                               const Eigen::VectorXd& s);

}  // namespace ergo
