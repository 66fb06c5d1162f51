#include <cmath>
#include <vector>

#include <doctest.h>

#include "ergo/rng.hpp"
#include "ergo/serial_ref.hpp"
#include "ergo/volumetric.hpp"

using ergo::DynamicsModel;
using ergo::SearchSpace;
using ergo::VolumetricModel;

namespace {

Eigen::MatrixXd grid_disc(double radius, int per_axis) {
  std::vector<Eigen::Vector2d> pts;
  for (int i = 0; i < per_axis; ++i)
    for (int j = 0; j < per_axis; ++j) {
      const double x = -radius + 2.0 * radius * (i + 0.5) / per_axis;
      const double y = -radius + 2.0 * radius * (j + 0.5) / per_axis;
      if (x * x + y * y <= radius * radius) pts.emplace_back(x, y);
    }
  Eigen::MatrixXd m(pts.size(), 2);
  for (size_t i = 0; i < pts.size(); ++i) m.row(i) = pts[i].transpose();
  return m;
}

Eigen::VectorXd quad_state(double x, double y, double z, double phi, double th, double psi) {
  Eigen::VectorXd s = Eigen::VectorXd::Zero(12);
  s << x, y, z, phi, th, psi, 0, 0, 0, 0, 0, 0;
  return s;
}

}  // namespace

TEST_CASE("point model projects the planar position") {
  auto dyn = ergo::make_double_integrator();
  SearchSpace space(Eigen::Vector2d(1.0, 1.0));
  auto m = ergo::make_point_model();
  Eigen::VectorXd s(6);
  s << 0.3, 0.7, 1.2, 0.0, 0.0, 0.0;
  Eigen::MatrixXd pts = ergo::sample_points(m, dyn, space, s);
  REQUIRE(pts.rows() == 1);
  CHECK(pts(0, 0) == 0.3);
  CHECK(pts(0, 1) == 0.7);
  auto jac = ergo::sample_jacobians(m, dyn, space, s);
  CHECK(jac.dep_dims == std::vector<int>{0, 1});
  CHECK(jac.blocks == Eigen::Matrix2d::Identity());
}

TEST_CASE("rigid body: pivot fixed under rotation, isometry under translation") {
  auto dyn = ergo::make_diff_drive();
  SearchSpace space(Eigen::Vector2d(1.0, 1.0));
  Eigen::MatrixXd body(3, 2);
  body << 0.0, 0.0, 0.1, 0.0, 0.0, -0.2;
  auto m = ergo::make_rigid_body(body);

  Eigen::VectorXd s(5);
  s << 0.5, 0.5, M_PI / 2.0, 0.0, 0.0;
  Eigen::MatrixXd pts = ergo::sample_points(m, dyn, space, s);
  CHECK(pts(0, 0) == 0.5);  // pivot point is translation only
  CHECK(pts(0, 1) == 0.5);
  CHECK(pts(1, 0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(pts(1, 1) == doctest::Approx(0.6).epsilon(1e-14));

  Eigen::VectorXd s2 = s;
  s2[0] += 0.17;
  s2[1] -= 0.06;
  Eigen::MatrixXd pts2 = ergo::sample_points(m, dyn, space, s2);
  for (int i = 0; i < 3; ++i) {
    CHECK(pts2(i, 0) - pts(i, 0) == doctest::Approx(0.17).epsilon(1e-13));
    CHECK(pts2(i, 1) - pts(i, 1) == doctest::Approx(-0.06).epsilon(1e-13));
  }
}

TEST_CASE("rigid body jacobian has the rotation derivative in the heading column") {
  auto dyn = ergo::make_diff_drive();
  SearchSpace space(Eigen::Vector2d(1.0, 1.0));
  Eigen::MatrixXd body(1, 2);
  body << 1.0, 0.0;
  auto m = ergo::make_rigid_body(body);
  Eigen::VectorXd s = Eigen::VectorXd::Zero(5);
  auto jac = ergo::sample_jacobians(m, dyn, space, s);
  CHECK(jac.dep_dims == std::vector<int>{0, 1, 2});
  CHECK(jac.blocks(0, 2) == 0.0);  // d(px)/d(theta) at theta=0, p=(1,0)
  CHECK(jac.blocks(1, 2) == 1.0);  // d(py)/d(theta)
  CHECK(jac.blocks(0, 0) == 1.0);
  CHECK(jac.blocks(1, 1) == 1.0);
}

TEST_CASE("lidar wedge grid is forward-facing with near-robot densification") {
  auto m = ergo::make_lidar_wedge(120.0 * M_PI / 180.0, 0.5, 10, 10);
  CHECK(m.n_samples == 100);
  const double r_min = 0.005;
  double prev_r = -1.0;
  for (int i = 0; i < m.n_samples; ++i) {
    const double r = m.body_points.row(i).norm();
    CHECK(r >= r_min);
    CHECK(r <= 0.5);
    CHECK(m.body_points(i, 0) > 0.0);  // 120 degree wedge stays in front
    if (i % 10 == 0) {
      if (prev_r > 0) CHECK(r > prev_r);  // radial rings increase
      prev_r = r;
    }
  }
  // Uniform radial spacing means ring areas grow with r, i.e. per-area
  // density drops as 1/r: equal point counts per ring by construction.
  auto dyn = ergo::make_diff_drive();
  SearchSpace space(Eigen::Vector2d(1.0, 1.0));
  Eigen::VectorXd s(5);
  s << 0.5, 0.5, 0.0, 0.0, 0.0;
  Eigen::MatrixXd pts = ergo::sample_points(m, dyn, space, s);
  REQUIRE(pts.rows() == 100);
  for (int i = 0; i < 100; ++i) CHECK(pts(i, 0) > 0.5);  // ahead of the robot
}

TEST_CASE("lidar finite-difference jacobian matches the rigid-body closed form") {
  auto lidar = ergo::make_lidar_wedge(1.8, 0.4, 6, 7);
  auto rigid = ergo::make_rigid_body(lidar.body_points);
  auto dyn = ergo::make_diff_drive();
  SearchSpace space(Eigen::Vector2d(1.0, 1.0));
  Eigen::VectorXd s(5);
  s << 0.4, 0.6, 1.1, 0.2, -0.1;
  auto jf = ergo::sample_jacobians(lidar, dyn, space, s);
  auto ja = ergo::sample_jacobians(rigid, dyn, space, s);
  CHECK((jf.blocks - ja.blocks).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("camera center ray hits the expected ground point") {
  auto dyn = ergo::make_quadcopter();
  SearchSpace space(Eigen::Vector2d(1.0, 1.0));

  auto nadir = ergo::make_raycast_camera(1, 1, 1.0, 0.8, 0.0, 50.0);
  Eigen::MatrixXd p0 = ergo::sample_points(nadir, dyn, space, quad_state(0.4, 0.4, 1.0, 0, 0, 0));
  CHECK(p0(0, 0) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(p0(0, 1) == doctest::Approx(0.4).epsilon(1e-12));

  const double tilt = 20.0 * M_PI / 180.0;
  auto tilted = ergo::make_raycast_camera(1, 1, 1.0, 0.8, tilt, 50.0);
  Eigen::MatrixXd p1 = ergo::sample_points(tilted, dyn, space, quad_state(0.4, 0.4, 1.0, 0, 0, 0));
  CHECK(p1(0, 0) - 0.4 == doctest::Approx(0.363970234266).epsilon(1e-9));
  CHECK(p1(0, 1) == doctest::Approx(0.4).epsilon(1e-12));

  // Yaw rotates the forward shift onto +y.
  Eigen::MatrixXd p2 =
      ergo::sample_points(tilted, dyn, space, quad_state(0.4, 0.4, 1.0, 0, 0, M_PI / 2.0));
  CHECK(p2(0, 0) == doctest::Approx(0.4).epsilon(1e-9));
  CHECK(p2(0, 1) - 0.4 == doctest::Approx(0.363970234266).epsilon(1e-9));
}

TEST_CASE("doubling altitude doubles the nadir footprint diameter") {
  auto dyn = ergo::make_quadcopter();
  SearchSpace space(Eigen::Vector2d(100.0, 100.0));
  auto cam = ergo::make_raycast_camera(2, 2, 60.0 * M_PI / 180.0, 45.0 * M_PI / 180.0, 0.0, 1e6);
  Eigen::MatrixXd lo = ergo::sample_points(cam, dyn, space, quad_state(50, 50, 1.0, 0, 0, 0));
  Eigen::MatrixXd hi = ergo::sample_points(cam, dyn, space, quad_state(50, 50, 2.0, 0, 0, 0));
  auto diameter = [](const Eigen::MatrixXd& pts) {
    double d = 0.0;
    for (int i = 0; i < pts.rows(); ++i)
      for (int j = i + 1; j < pts.rows(); ++j) d = std::max(d, (pts.row(i) - pts.row(j)).norm());
    return d;
  };
  CHECK(diameter(hi) / diameter(lo) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("rays that miss the ground are truncated and clamped, count conserved") {
  auto dyn = ergo::make_quadcopter();
  SearchSpace space(Eigen::Vector2d(1.0, 1.0));
  auto cam = ergo::make_raycast_camera(5, 4, 1.0, 0.8, 0.3, 10.0);
  // Large roll points part of the grid at the sky.
  Eigen::VectorXd s = quad_state(0.5, 0.5, 0.8, 2.2, 0.0, 0.4);
  Eigen::MatrixXd pts = ergo::sample_points(cam, dyn, space, s);
  REQUIRE(pts.rows() == 20);
  for (int i = 0; i < 20; ++i) {
    CHECK(pts.row(i).allFinite());
    CHECK(pts(i, 0) >= 0.0);
    CHECK(pts(i, 0) <= 1.0);
    CHECK(pts(i, 1) >= 0.0);
    CHECK(pts(i, 1) <= 1.0);
  }

  CHECK_THROWS_AS(ergo::sample_points(cam, dyn, space, quad_state(0.5, 0.5, 0.0, 0, 0, 0)),
                  std::runtime_error);
  auto planar = ergo::make_diff_drive();
  CHECK_THROWS_AS(ergo::sample_points(cam, planar, space, Eigen::VectorXd::Zero(5)),
                  std::invalid_argument);
}

TEST_CASE("camera jacobian is step-size consistent") {
  auto dyn = ergo::make_quadcopter();
  SearchSpace space(Eigen::Vector2d(2.0, 2.0));
  auto cam = ergo::make_raycast_camera(4, 3, 1.0, 0.8, 20.0 * M_PI / 180.0, 10.0);
  Eigen::VectorXd s = quad_state(1.0, 0.9, 0.7, 0.05, -0.03, 0.6);
  auto jac = ergo::sample_jacobians(cam, dyn, space, s);

  const double h = 1e-7;
  for (int j = 0; j < jac.n_dep(); ++j) {
    Eigen::VectorXd sp = s, sm = s;
    sp[jac.dep_dims[j]] += h;
    sm[jac.dep_dims[j]] -= h;
    Eigen::MatrixXd fp = ergo::sample_points(cam, dyn, space, sp);
    Eigen::MatrixXd fm = ergo::sample_points(cam, dyn, space, sm);
    for (int i = 0; i < cam.n_samples; ++i) {
      const double gx = (fp(i, 0) - fm(i, 0)) / (2 * h);
      const double gy = (fp(i, 1) - fm(i, 1)) / (2 * h);
      CHECK(jac.blocks(2 * i, j) == doctest::Approx(gx).epsilon(1e-3).scale(1.0));
      CHECK(jac.blocks(2 * i + 1, j) == doctest::Approx(gy).epsilon(1e-3).scale(1.0));
    }
  }
}

TEST_CASE("volumetric basis equals the brute-force footprint average") {
  auto dyn = ergo::make_diff_drive();
  SearchSpace space(Eigen::Vector2d(1.0, 1.0));
  ergo::BasisSet basis = ergo::build_basis(space, 5);
  Eigen::MatrixXd disc = grid_disc(0.08, 12);
  REQUIRE(disc.rows() >= 100);
  auto m = ergo::make_rigid_body(disc);
  Eigen::VectorXd s(5);
  s << 0.45, 0.55, 0.8, 0.0, 0.0;

  Eigen::VectorXd fv = ergo::vol_basis_all(basis, m, dyn, s);
  Eigen::MatrixXd pts = ergo::sample_points(m, dyn, space, s);
  for (int mode = 0; mode < basis.n_modes(); ++mode) {
    double mean = 0.0;
    for (int i = 0; i < pts.rows(); ++i) mean += ergo::eval_basis(basis, mode, pts.row(i).transpose());
    mean /= pts.rows();
    CHECK(fv[mode] == doctest::Approx(mean).epsilon(1e-12).scale(1.0));
  }
  // Constant mode is exactly the reciprocal normalizer for every model.
  CHECK(fv[0] == doctest::Approx(1.0 / basis.normalizers[0]).epsilon(1e-14));
}

TEST_CASE("volumetric basis gradient matches finite differences of the value") {
  SearchSpace space(Eigen::Vector2d(1.0, 1.0));
  ergo::BasisSet basis = ergo::build_basis(space, 5);
  ergo::Rng rng(31);

  auto check_fd = [&](const VolumetricModel& m, const DynamicsModel& dyn,
                      const Eigen::VectorXd& s) {
    Eigen::MatrixXd G = ergo::vol_basis_grad_all(basis, m, dyn, s);
    const double h = 1e-6;
    for (int trial = 0; trial < 10; ++trial) {
      const int mode = 1 + static_cast<int>(rng.uniform_int(basis.n_modes() - 1));
      for (int j = 0; j < dyn.state_dim; ++j) {
        Eigen::VectorXd sp = s, sm = s;
        sp[j] += h;
        sm[j] -= h;
        const double fd = (ergo::vol_basis_all(basis, m, dyn, sp)[mode] -
                           ergo::vol_basis_all(basis, m, dyn, sm)[mode]) /
                          (2 * h);
        CHECK(G(mode, j) == doctest::Approx(fd).epsilon(1e-4).scale(1.0));
      }
    }
    CHECK(G.row(0).cwiseAbs().maxCoeff() == 0.0);  // constant mode
  };

  auto dd = ergo::make_diff_drive();
  Eigen::VectorXd sdd(5);
  sdd << 0.52, 0.48, 0.9, 0.1, 0.0;
  check_fd(ergo::make_lidar_wedge(2.0, 0.3, 8, 8), dd, sdd);
  check_fd(ergo::make_rigid_body(grid_disc(0.06, 8)), dd, sdd);

  auto quad = ergo::make_quadcopter();
  check_fd(ergo::make_raycast_camera(5, 4, 1.0, 0.75, 20.0 * M_PI / 180.0, 5.0),
           quad, quad_state(0.5, 0.45, 0.35, 0.04, -0.02, 0.3));
}
