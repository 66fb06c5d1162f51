#include "ergo/dynamics.hpp"

#include <stdexcept>

namespace ergo {

namespace {

Eigen::VectorXd rk4_raw(const DynamicsModel& model, const Eigen::VectorXd& s,
                        const Eigen::VectorXd& u, double dt) {
  const Eigen::VectorXd k1 = derivative(model, s, u);
  const Eigen::VectorXd k2 = derivative(model, s + 0.5 * dt * k1, u);
  const Eigen::VectorXd k3 = derivative(model, s + 0.5 * dt * k2, u);
  const Eigen::VectorXd k4 = derivative(model, s + dt * k3, u);
  return s + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

void check_shapes(const DynamicsModel& model, const Eigen::VectorXd& s, const Eigen::VectorXd& u) {
  if (s.size() != model.state_dim || u.size() != model.control_dim)
    throw std::invalid_argument("dynamics: state/control layout mismatch");
  if (!s.allFinite() || !u.allFinite()) throw std::runtime_error("dynamics: non-finite input");
}

}  // namespace

DynamicsModel make_double_integrator(double dt) {
  DynamicsModel m;
  m.platform = Platform::DoubleIntegrator2DOri;
  m.state_dim = 6;
  m.control_dim = 3;
  m.dt = dt;
  m.u_min = Eigen::Vector3d(-1.0, -1.0, -2.0);
  m.u_max = Eigen::Vector3d(1.0, 1.0, 2.0);
  return m;
}

DynamicsModel make_diff_drive(double dt) {
  DynamicsModel m;
  m.platform = Platform::DiffDrive2ndOrder;
  m.state_dim = 5;
  m.control_dim = 2;
  m.dt = dt;
  m.u_min = Eigen::Vector2d(-1.0, -2.0);
  m.u_max = Eigen::Vector2d(1.0, 2.0);
  return m;
}

DynamicsModel make_quadcopter(double dt) {
  DynamicsModel m;
  m.platform = Platform::Quadcopter12;
  m.state_dim = 12;
  m.control_dim = 4;
  m.dt = dt;
  m.itheta = 5;  // yaw
  m.iz = 2;
  const double tmax = 2.0 * m.quad.mass * m.quad.gravity;
  m.u_min = Eigen::Vector4d(0.0, -0.1, -0.1, -0.1);
  m.u_max = Eigen::Vector4d(tmax, 0.1, 0.1, 0.1);
  return m;
}

Eigen::VectorXd clamp_control(const DynamicsModel& model, const Eigen::VectorXd& u) {
  return u.cwiseMax(model.u_min).cwiseMin(model.u_max);
}

Eigen::Matrix3d quad_rotation(const Eigen::VectorXd& s) {
  const double cphi = std::cos(s[3]), sphi = std::sin(s[3]);
  const double cth = std::cos(s[4]), sth = std::sin(s[4]);
  const double cpsi = std::cos(s[5]), spsi = std::sin(s[5]);
  Eigen::Matrix3d Rz, Ry, Rx;
  Rz << cpsi, -spsi, 0, spsi, cpsi, 0, 0, 0, 1;
  Ry << cth, 0, sth, 0, 1, 0, -sth, 0, cth;
  Rx << 1, 0, 0, 0, cphi, -sphi, 0, sphi, cphi;
  return Rz * Ry * Rx;
}

Eigen::VectorXd derivative(const DynamicsModel& model, const Eigen::VectorXd& s,
                           const Eigen::VectorXd& u) {
  check_shapes(model, s, u);
  Eigen::VectorXd ds(model.state_dim);
  switch (model.platform) {
    case Platform::DoubleIntegrator2DOri:
      ds.head<3>() = s.segment<3>(3);
      ds.tail<3>() = u;
      break;
    case Platform::DiffDrive2ndOrder: {
      const double v = s[3], w = s[4];
      ds[0] = v * std::cos(s[2]);
      ds[1] = v * std::sin(s[2]);
      ds[2] = w;
      ds[3] = u[0];
      ds[4] = u[1];
      break;
    }
    case Platform::Quadcopter12: {
      const auto& qp = model.quad;
      const Eigen::Vector3d vel = s.segment<3>(6);
      const Eigen::Vector3d omega = s.segment<3>(9);
      const double cphi = std::cos(s[3]), sphi = std::sin(s[3]);
      const double cth = std::cos(s[4]), tth = std::tan(s[4]);

      ds.segment<3>(0) = vel;
      // ZYX Euler kinematics: [phi', theta', psi'] = E(phi, theta) * omega.
      ds[3] = omega[0] + sphi * tth * omega[1] + cphi * tth * omega[2];
      ds[4] = cphi * omega[1] - sphi * omega[2];
      ds[5] = (sphi * omega[1] + cphi * omega[2]) / cth;
      ds.segment<3>(6) =
          (u[0] / qp.mass) * (quad_rotation(s) * Eigen::Vector3d::UnitZ()) -
          Eigen::Vector3d(0.0, 0.0, qp.gravity);
      const Eigen::Vector3d J = qp.inertia;
      const Eigen::Vector3d Jw(J[0] * omega[0], J[1] * omega[1], J[2] * omega[2]);
      const Eigen::Vector3d tau = u.tail<3>();
      const Eigen::Vector3d gyro = omega.cross(Jw);
      ds.segment<3>(9) = (tau - gyro).cwiseQuotient(J);
      break;
    }
  }
  return ds;
}

Eigen::VectorXd step_rk4(const DynamicsModel& model, const Eigen::VectorXd& s,
                         const Eigen::VectorXd& u, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("step_rk4: dt must be positive");
  Eigen::VectorXd next = rk4_raw(model, s, clamp_control(model, u), dt);
  if (!next.allFinite()) throw std::runtime_error("step_rk4: non-finite state (blow-up)");
  if (model.platform == Platform::Quadcopter12) {
    next[3] = wrap_angle(next[3]);
    next[5] = wrap_angle(next[5]);
    if (!(std::abs(next[4]) < M_PI / 2.0))
      throw std::runtime_error("step_rk4: quadcopter pitch beyond gimbal guard");
  } else {
    next[2] = wrap_angle(next[2]);
  }
  return next;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> linearize(const DynamicsModel& model,
                                                      const Eigen::VectorXd& s,
                                                      const Eigen::VectorXd& u, double dt) {
  check_shapes(model, s, u);
  const double h = 1e-6;
  const Eigen::VectorXd uc = clamp_control(model, u);
  const int n = model.state_dim, m = model.control_dim;
  Eigen::MatrixXd A(n, n), B(n, m);
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd sp = s, sm = s;
    sp[i] += h;
    sm[i] -= h;
    A.col(i) = (rk4_raw(model, sp, uc, dt) - rk4_raw(model, sm, uc, dt)) / (2.0 * h);
  }
  for (int j = 0; j < m; ++j) {
    Eigen::VectorXd up = uc, um = uc;
    up[j] += h;
    um[j] -= h;
    B.col(j) = (rk4_raw(model, s, up, dt) - rk4_raw(model, s, um, dt)) / (2.0 * h);
  }
  return {A, B};
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> di_analytic_linearization(const DynamicsModel& model,
                                                                      double dt) {
  if (model.platform != Platform::DoubleIntegrator2DOri)
    throw std::invalid_argument("di_analytic_linearization: double integrator only");
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(6, 6);
  A.topRightCorner(3, 3) = dt * Eigen::Matrix3d::Identity();
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(6, 3);
  B.topRows(3) = 0.5 * dt * dt * Eigen::Matrix3d::Identity();
  B.bottomRows(3) = dt * Eigen::Matrix3d::Identity();
  return {A, B};
}

}  // namespace ergo
