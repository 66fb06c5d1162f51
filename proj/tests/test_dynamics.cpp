#include <cmath>

#include <doctest.h>

#include "ergo/dynamics.hpp"

using ergo::DynamicsModel;

namespace {

// Integrate a constant control for duration T at step dt.
Eigen::VectorXd roll(const DynamicsModel& m, Eigen::VectorXd s, const Eigen::VectorXd& u, double dt,
                     double T) {
  const int n = static_cast<int>(std::llround(T / dt));
  for (int t = 0; t < n; ++t) s = ergo::step_rk4(m, s, u, dt);
  return s;
}

// Observed convergence order from three step sizes (h, h/2, h/4).
double observed_order(const DynamicsModel& m, const Eigen::VectorXd& s0, const Eigen::VectorXd& u,
                      double h, double T) {
  Eigen::VectorXd a = roll(m, s0, u, h, T);
  Eigen::VectorXd b = roll(m, s0, u, h / 2, T);
  Eigen::VectorXd c = roll(m, s0, u, h / 4, T);
  const double e1 = (a - b).norm();
  const double e2 = (b - c).norm();
  if (e2 < 1e-14) return 4.0;  // exact integration (linear dynamics)
  return std::log2(e1 / e2);
}

}  // namespace

TEST_CASE("equilibria and kinematic directions") {
  auto dd = ergo::make_diff_drive();
  Eigen::VectorXd s = Eigen::VectorXd::Zero(5), u = Eigen::VectorXd::Zero(2);
  CHECK(ergo::derivative(dd, s, u).norm() == 0.0);

  s << 0.0, 0.0, M_PI / 2.0, 1.0, 0.0;
  Eigen::VectorXd ds = ergo::derivative(dd, s, u);
  CHECK(ds[0] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(ds[1] == doctest::Approx(1.0).epsilon(1e-15));

  auto quad = ergo::make_quadcopter();
  Eigen::VectorXd sq = Eigen::VectorXd::Zero(12);
  Eigen::VectorXd uq(4);
  uq << quad.quad.mass * quad.quad.gravity, 0.0, 0.0, 0.0;
  CHECK(ergo::derivative(quad, sq, uq).norm() == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("hover is a fixed point over 100 steps") {
  auto quad = ergo::make_quadcopter();
  Eigen::VectorXd s = Eigen::VectorXd::Zero(12);
  s[2] = 1.0;
  Eigen::VectorXd u(4);
  u << quad.quad.mass * quad.quad.gravity, 0.0, 0.0, 0.0;
  Eigen::VectorXd s0 = s;
  for (int t = 0; t < 100; ++t) s = ergo::step_rk4(quad, s, u, quad.dt);
  CHECK((s - s0).norm() < 1e-9);
}

TEST_CASE("rk4 is exact for the double integrator") {
  auto di = ergo::make_double_integrator();
  Eigen::VectorXd s = Eigen::VectorXd::Zero(6);
  s[3] = 1.0;
  Eigen::VectorXd u = Eigen::VectorXd::Zero(3);
  Eigen::VectorXd next = ergo::step_rk4(di, s, u, 0.1);
  CHECK(next[0] == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(next[3] == 1.0);
}

TEST_CASE("observed rk4 order is at least 3.8 on all platforms") {
  auto di = ergo::make_double_integrator();
  Eigen::VectorXd sd = Eigen::VectorXd::Zero(6);
  sd << 0.1, 0.2, 0.3, 0.4, -0.2, 0.5;
  Eigen::VectorXd ud(3);
  ud << 0.5, -0.3, 0.8;
  CHECK(observed_order(di, sd, ud, 0.05, 0.4) >= 3.8);

  auto dd = ergo::make_diff_drive();
  Eigen::VectorXd sdd(5);
  sdd << 0.2, 0.3, 0.4, 0.5, -0.3;
  Eigen::VectorXd udd(2);
  udd << 0.8, 1.5;
  CHECK(observed_order(dd, sdd, udd, 0.05, 0.4) >= 3.8);

  auto quad = ergo::make_quadcopter();
  Eigen::VectorXd sq = Eigen::VectorXd::Zero(12);
  sq[2] = 1.0;
  sq[6] = 0.1;
  Eigen::VectorXd uq(4);
  uq << quad.quad.mass * quad.quad.gravity + 0.4, 0.003, -0.002, 0.001;
  CHECK(observed_order(quad, sq, uq, 0.02, 0.2) >= 3.8);
}

TEST_CASE("analytic double-integrator linearization matches finite differences") {
  auto di = ergo::make_double_integrator();
  Eigen::VectorXd s(6), u(3);
  s << 0.3, -0.2, 0.7, 0.1, 0.4, -0.5;
  u << 0.2, -0.1, 0.3;
  auto [A, B] = ergo::linearize(di, s, u, 0.1);
  auto [Aa, Ba] = ergo::di_analytic_linearization(di, 0.1);
  CHECK((A - Aa).cwiseAbs().maxCoeff() < 1e-8);
  CHECK((B - Ba).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("finite-difference linearization is step-size stable") {
  auto dd = ergo::make_diff_drive();
  Eigen::VectorXd s(5), u(2);
  s << 0.4, 0.1, -0.9, 0.6, 0.8;
  u << 0.3, -0.7;
  auto [A, B] = ergo::linearize(dd, s, u, 0.1);

  // Re-difference by hand at half the step.
  const double h = 5e-7;
  Eigen::MatrixXd A2(5, 5);
  for (int i = 0; i < 5; ++i) {
    Eigen::VectorXd sp = s, sm = s;
    sp[i] += h;
    sm[i] -= h;
    // step without wrapping: stay away from the branch cut so the public
    // step is smooth here
    A2.col(i) = (ergo::step_rk4(dd, sp, u, 0.1) - ergo::step_rk4(dd, sm, u, 0.1)) / (2 * h);
  }
  CHECK(((A - A2).cwiseAbs().array() / (A2.cwiseAbs().array() + 1.0)).maxCoeff() < 1e-4);

  auto quad = ergo::make_quadcopter();
  Eigen::VectorXd sq = Eigen::VectorXd::Zero(12);
  sq[2] = 1.5;
  Eigen::VectorXd uq(4);
  uq << quad.quad.mass * quad.quad.gravity, 0.0, 0.0, 0.0;
  auto [Aq, Bq] = ergo::linearize(quad, sq, uq, quad.dt);
  auto [Aq2, Bq2] = ergo::linearize(quad, sq, uq, quad.dt);
  CHECK((Aq - Aq2).cwiseAbs().maxCoeff() == 0.0);  // deterministic
  CHECK(Aq.allFinite());
  CHECK(Bq.allFinite());
}

TEST_CASE("control clamping applies at the dynamics boundary") {
  auto dd = ergo::make_diff_drive();
  Eigen::VectorXd s(5), wild(2), clamped(2);
  s << 0.1, 0.2, 0.3, 0.4, 0.5;
  wild << 100.0, -100.0;
  clamped << dd.u_max[0], dd.u_min[1];
  CHECK(ergo::step_rk4(dd, s, wild, 0.1) == ergo::step_rk4(dd, s, clamped, 0.1));
}

TEST_CASE("heading wraps into (-pi, pi] after the step") {
  auto dd = ergo::make_diff_drive();
  Eigen::VectorXd s(5), u = Eigen::VectorXd::Zero(2);
  s << 0.0, 0.0, 3.1, 0.0, 1.9;  // spinning fast near the branch cut
  Eigen::VectorXd next = ergo::step_rk4(dd, s, u, 0.1);
  CHECK(next[2] <= M_PI);
  CHECK(next[2] > -M_PI);
  CHECK(next[2] == doctest::Approx(3.29 - 2 * M_PI).epsilon(1e-12));

  CHECK(ergo::wrap_angle(M_PI) == doctest::Approx(M_PI));
  CHECK(ergo::wrap_angle(-M_PI) == doctest::Approx(M_PI));
  CHECK(ergo::wrap_angle(2.5 * M_PI) == doctest::Approx(0.5 * M_PI));
}

TEST_CASE("pose extraction returns raw state entries") {
  auto quad = ergo::make_quadcopter();
  Eigen::VectorXd s = Eigen::VectorXd::Zero(12);
  s[0] = 0.7;
  s[1] = -0.3;
  s[2] = 2.0;
  s[5] = 1.1;
  CHECK(quad.planar_position(s) == Eigen::Vector2d(0.7, -0.3));
  CHECK(quad.heading(s) == 1.1);
  CHECK(quad.iz == 2);
}

TEST_CASE("layout mismatches and blow-ups are rejected") {
  auto dd = ergo::make_diff_drive();
  CHECK_THROWS_AS(ergo::derivative(dd, Eigen::VectorXd::Zero(4), Eigen::VectorXd::Zero(2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(ergo::step_rk4(dd, Eigen::VectorXd::Zero(5), Eigen::VectorXd::Zero(2), -0.1),
                  std::invalid_argument);

  auto quad = ergo::make_quadcopter();
  Eigen::VectorXd s = Eigen::VectorXd::Zero(12);
  s[2] = 1.0;
  Eigen::VectorXd u(4);
  u << quad.quad.mass * quad.quad.gravity, 0.0, 0.1, 0.0;  // max pitch torque
  CHECK_THROWS_AS(
      [&] {
        for (int t = 0; t < 400; ++t) s = ergo::step_rk4(quad, s, u, quad.dt);
      }(),
      std::runtime_error);
}
