#include "ergo/volumetric.hpp"

#include <cmath>
#include <stdexcept>

namespace ergo {

namespace {

Eigen::Matrix2d planar_rotation(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  Eigen::Matrix2d R;
  R << c, -s, s, c;
  return R;
}

// Evenly spread offsets in [-1, 1] (inclusive); a single sample sits at 0.
double linspace11(int i, int n) { return n == 1 ? 0.0 : -1.0 + 2.0 * i / (n - 1.0); }

}  // namespace

VolumetricModel make_point_model() {
  VolumetricModel m;
  m.kind = VolumetricModel::Kind::Point;
  m.n_samples = 1;
  return m;
}

VolumetricModel make_rigid_body(Eigen::MatrixXd body_points) {
  if (body_points.rows() < 1 || body_points.cols() != 2 || !body_points.allFinite())
    throw std::invalid_argument("make_rigid_body: need a finite N x 2 point set");
  VolumetricModel m;
  m.kind = VolumetricModel::Kind::RigidBody;
  m.n_samples = static_cast<int>(body_points.rows());
  m.body_points = std::move(body_points);
  return m;
}

VolumetricModel make_lidar_wedge(double fov, double max_range, int n_radial, int n_angular) {
  if (!(fov > 0.0 && fov < 2.0 * M_PI)) throw std::invalid_argument("make_lidar_wedge: bad fov");
  if (!(max_range > 0.0)) throw std::invalid_argument("make_lidar_wedge: bad range");
  if (n_radial < 1 || n_angular < 1) throw std::invalid_argument("make_lidar_wedge: bad grid");
  VolumetricModel m;
  m.kind = VolumetricModel::Kind::LidarWedge;
  m.n_samples = n_radial * n_angular;
  m.lidar_fov = fov;
  m.lidar_max_range = max_range;
  m.lidar_n_radial = n_radial;
  m.lidar_n_angular = n_angular;
  const double r_min = 0.01 * max_range;
  m.body_points.resize(m.n_samples, 2);
  for (int j = 0; j < n_radial; ++j) {
    const double r = r_min + (j + 0.5) * (max_range - r_min) / n_radial;
    for (int l = 0; l < n_angular; ++l) {
      const double a = -0.5 * fov + (l + 0.5) * fov / n_angular;
      m.body_points.row(j * n_angular + l) << r * std::cos(a), r * std::sin(a);
    }
  }
  return m;
}

VolumetricModel make_raycast_camera(int n_u, int n_v, double hfov, double vfov, double tilt_rad,
                                    double clip_range) {
  if (n_u < 1 || n_v < 1) throw std::invalid_argument("make_raycast_camera: bad grid");
  if (!(hfov > 0.0 && hfov < M_PI) || !(vfov > 0.0 && vfov < M_PI))
    throw std::invalid_argument("make_raycast_camera: fov must be in (0, pi)");
  if (!(tilt_rad >= 0.0 && tilt_rad < M_PI / 2.0))
    throw std::invalid_argument("make_raycast_camera: tilt must be in [0, pi/2)");
  if (!(clip_range > 0.0)) throw std::invalid_argument("make_raycast_camera: bad clip range");

  VolumetricModel m;
  m.kind = VolumetricModel::Kind::RaycastCamera;
  m.n_samples = n_u * n_v;
  m.clip_range = clip_range;
  m.cam_hfov = hfov;
  m.cam_vfov = vfov;
  m.cam_tilt = tilt_rad;
  m.cam_nu = n_u;
  m.cam_nv = n_v;

  // Body frame: x forward, y left, z up. With zero tilt the optical axis
  // points straight down; tilt pitches it forward.
  const Eigen::Vector3d optical(std::sin(tilt_rad), 0.0, -std::cos(tilt_rad));
  const Eigen::Vector3d img_x(0.0, -1.0, 0.0);
  const Eigen::Vector3d img_y = optical.cross(img_x);
  const double ta = std::tan(0.5 * hfov), tb = std::tan(0.5 * vfov);

  m.rays.resize(m.n_samples, 3);
  for (int iu = 0; iu < n_u; ++iu) {
    const double a = ta * linspace11(iu, n_u);
    for (int iv = 0; iv < n_v; ++iv) {
      const double b = tb * linspace11(iv, n_v);
      m.rays.row(iu * n_v + iv) = (optical + a * img_x + b * img_y).normalized().transpose();
    }
  }
  return m;
}

std::vector<int> dependent_dims(const VolumetricModel& model, const DynamicsModel& dyn) {
  switch (model.kind) {
    case VolumetricModel::Kind::Point:
      return {dyn.ix, dyn.iy};
    case VolumetricModel::Kind::RigidBody:
    case VolumetricModel::Kind::LidarWedge:
      return {dyn.ix, dyn.iy, dyn.itheta};
    case VolumetricModel::Kind::RaycastCamera:
      return {0, 1, 2, 3, 4, 5};
  }
  throw std::logic_error("dependent_dims: unknown variant");
}

Eigen::MatrixXd sample_points(const VolumetricModel& model, const DynamicsModel& dyn,
                              const SearchSpace& space, const Eigen::VectorXd& s) {
  if (!s.allFinite()) throw std::runtime_error("sample_points: non-finite state");
  switch (model.kind) {
    case VolumetricModel::Kind::Point:
      return dyn.planar_position(s).transpose();
    case VolumetricModel::Kind::RigidBody:
    case VolumetricModel::Kind::LidarWedge: {
      const Eigen::Matrix2d R = planar_rotation(dyn.heading(s));
      Eigen::MatrixXd pts = model.body_points * R.transpose();
      pts.col(0).array() += s[dyn.ix];
      pts.col(1).array() += s[dyn.iy];
      return pts;
    }
    case VolumetricModel::Kind::RaycastCamera: {
      if (dyn.platform != Platform::Quadcopter12)
        throw std::invalid_argument("sample_points: camera needs a platform with altitude");
      const double z = s[dyn.iz];
      if (!(z > 0.0)) throw std::runtime_error("sample_points: camera at or below ground plane");
      const Eigen::Matrix3d R = quad_rotation(s);
      const Eigen::Vector2d origin = dyn.planar_position(s);
      Eigen::MatrixXd pts(model.n_samples, 2);
      for (int i = 0; i < model.n_samples; ++i) {
        const Eigen::Vector3d dw = R * model.rays.row(i).transpose();
        double t = model.clip_range;
        if (dw[2] < -1e-12) t = std::min(t, -z / dw[2]);
        Eigen::Vector2d p = origin + t * dw.head<2>();
        p[0] = std::min(std::max(p[0], 0.0), space.lengths[0]);
        p[1] = std::min(std::max(p[1], 0.0), space.lengths[1]);
        pts.row(i) = p.transpose();
      }
      return pts;
    }
  }
  throw std::logic_error("sample_points: unknown variant");
}

kernels::PackedJacobians sample_jacobians(const VolumetricModel& model, const DynamicsModel& dyn,
                                          const SearchSpace& space, const Eigen::VectorXd& s) {
  kernels::PackedJacobians jac;
  jac.dep_dims = dependent_dims(model, dyn);
  const int ndep = jac.n_dep();
  const int N = model.n_samples;
  jac.blocks.resize(2 * static_cast<Eigen::Index>(N), ndep);

  switch (model.kind) {
    case VolumetricModel::Kind::Point:
      jac.blocks.setIdentity();
      return jac;
    case VolumetricModel::Kind::RigidBody: {
      const double c = std::cos(dyn.heading(s)), sn = std::sin(dyn.heading(s));
      for (int i = 0; i < N; ++i) {
        const double px = model.body_points(i, 0), py = model.body_points(i, 1);
        jac.blocks.block<2, 3>(2 * i, 0) << 1.0, 0.0, -sn * px - c * py, 0.0, 1.0, c * px - sn * py;
      }
      return jac;
    }
    case VolumetricModel::Kind::LidarWedge:
    case VolumetricModel::Kind::RaycastCamera: {
      const double h = 1e-6;
      for (int j = 0; j < ndep; ++j) {
        Eigen::VectorXd sp = s, sm = s;
        sp[jac.dep_dims[j]] += h;
        sm[jac.dep_dims[j]] -= h;
        const Eigen::MatrixXd fp = sample_points(model, dyn, space, sp);
        const Eigen::MatrixXd fm = sample_points(model, dyn, space, sm);
        for (int i = 0; i < N; ++i) {
          jac.blocks(2 * i, j) = (fp(i, 0) - fm(i, 0)) / (2.0 * h);
          jac.blocks(2 * i + 1, j) = (fp(i, 1) - fm(i, 1)) / (2.0 * h);
        }
      }
      return jac;
    }
  }
  throw std::logic_error("sample_jacobians: unknown variant");
}

Eigen::VectorXd vol_basis_all(const BasisSet& basis, const VolumetricModel& model,
                              const DynamicsModel& dyn, const Eigen::VectorXd& s) {
  const Eigen::MatrixXd pts = sample_points(model, dyn, basis.space, s);
  const auto tables = kernels::build_tables(basis, pts, false);
  return kernels::mode_values(basis, tables, 1.0 / model.n_samples);
}

Eigen::MatrixXd vol_basis_grad_all(const BasisSet& basis, const VolumetricModel& model,
                                   const DynamicsModel& dyn, const Eigen::VectorXd& s) {
  const Eigen::MatrixXd pts = sample_points(model, dyn, basis.space, s);
  const auto tables = kernels::build_tables(basis, pts, true);
  const auto jac = sample_jacobians(model, dyn, basis.space, s);
  return kernels::mode_gradients(basis, tables, jac, dyn.state_dim, 1.0 / model.n_samples);
}

double vol_basis(const BasisSet& basis, const VolumetricModel& model, const DynamicsModel& dyn,
                 const Eigen::VectorXi& k, const Eigen::VectorXd& s) {
  return vol_basis_all(basis, model, dyn, s)[mode_flat_index(basis, k)];
}

Eigen::VectorXd vol_basis_grad(const BasisSet& basis, const VolumetricModel& model,
                               const DynamicsModel& dyn, const Eigen::VectorXi& k,
                               const Eigen::VectorXd& s) {
  return vol_basis_grad_all(basis, model, dyn, s).row(mode_flat_index(basis, k)).transpose();
}

}  // namespace ergo
