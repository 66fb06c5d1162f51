// Timing comparison between the OpenMP mode-sum kernels and the serial
// reference implementation, on workloads shaped like the controller's inner
// loop (footprint sample sets pushed through values and gradients).

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <CLI11.hpp>

#include "ergo/kernels.hpp"
#include "ergo/rng.hpp"
#include "ergo/serial_ref.hpp"

namespace {

double time_ms(int reps, const std::function<void()>& fn) {
  fn();  // warm up
  auto t0 = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) fn();
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kernel timing: OpenMP vs serial reference"};
  bool quick = false;
  int reps = 20;
  app.add_flag("--quick", quick, "small sizes, fewer reps (smoke test)");
  app.add_option("--reps", reps, "repetitions per measurement");
  CLI11_PARSE(app, argc, argv);

  const int K = quick ? 6 : 10;
  const std::vector<int> point_counts = quick ? std::vector<int>{10, 100} : std::vector<int>{10, 100, 1000, 4000};
  if (quick) reps = std::min(reps, 3);

  ergo::SearchSpace space(Eigen::Vector2d(1.0, 1.0));
  ergo::BasisSet basis = ergo::build_basis(space, K);
  ergo::Rng rng(20240817);

  std::printf("%-22s %8s %10s %10s %8s %10s\n", "kernel", "points", "omp ms", "serial ms", "speedup", "max diff");
  for (int P : point_counts) {
    Eigen::MatrixXd pts(P, 2);
    for (int p = 0; p < P; ++p)
      for (int i = 0; i < 2; ++i) pts(p, i) = rng.uniform01();

    const int state_dim = 6;
    ergo::kernels::PackedJacobians jac;
    jac.dep_dims = {0, 1, 2};
    jac.blocks.resize(2 * P, 3);
    for (Eigen::Index r = 0; r < jac.blocks.rows(); ++r)
      for (int c = 0; c < 3; ++c) jac.blocks(r, c) = rng.uniform(-1.0, 1.0);
    std::vector<Eigen::MatrixXd> full_jacs(P);
    for (int p = 0; p < P; ++p) {
      full_jacs[p] = Eigen::MatrixXd::Zero(2, state_dim);
      full_jacs[p].leftCols(3) = jac.blocks.middleRows(2 * p, 2);
    }

    const double scale = 1.0 / P;
    auto tables = ergo::kernels::build_tables(basis, pts, true);

    Eigen::VectorXd v_omp, v_ref;
    double t_vals_omp = time_ms(reps, [&] {
      auto t = ergo::kernels::build_tables(basis, pts, false);
      v_omp = ergo::kernels::mode_values(basis, t, scale);
    });
    double t_vals_ref = time_ms(reps, [&] { v_ref = ergo::ref::mode_values(basis, pts, scale); });
    double dv = (v_omp - v_ref).cwiseAbs().maxCoeff();
    std::printf("%-22s %8d %10.4f %10.4f %8.2f %10.2e\n", "mode_values", P, t_vals_omp, t_vals_ref,
                t_vals_ref / t_vals_omp, dv);

    Eigen::MatrixXd g_omp, g_ref;
    double t_grad_omp = time_ms(reps, [&] {
      auto t = ergo::kernels::build_tables(basis, pts, true);
      g_omp = ergo::kernels::mode_gradients(basis, t, jac, state_dim, scale);
    });
    double t_grad_ref =
        time_ms(reps, [&] { g_ref = ergo::ref::mode_gradients(basis, pts, full_jacs, state_dim, scale); });
    double dg = (g_omp - g_ref).cwiseAbs().maxCoeff();
    std::printf("%-22s %8d %10.4f %10.4f %8.2f %10.2e\n", "mode_gradients", P, t_grad_omp, t_grad_ref,
                t_grad_ref / t_grad_omp, dg);

    if (dv > 1e-9 || dg > 1e-9) {
      std::fprintf(stderr, "kernel/reference mismatch exceeds 1e-9\n");
      return 1;
    }
    (void)tables;
  }
  return 0;
}
