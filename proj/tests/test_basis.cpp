#include <cmath>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include "ergo/basis.hpp"
#include "ergo/rng.hpp"
#include "ergo/serial_ref.hpp"

using ergo::BasisSet;
using ergo::SearchSpace;

TEST_CASE("mode ordering is lexicographic with the last dimension fastest") {
  SearchSpace space(Eigen::Vector2d(1.0, 1.0));
  BasisSet b = ergo::build_basis(space, 3);
  REQUIRE(b.n_modes() == 9);
  CHECK(b.indices.row(0) == Eigen::RowVector2i(0, 0));
  CHECK(b.indices.row(1) == Eigen::RowVector2i(0, 1));
  CHECK(b.indices.row(3) == Eigen::RowVector2i(1, 0));
  CHECK(b.indices.row(8) == Eigen::RowVector2i(2, 2));
  for (int m = 0; m < b.n_modes(); ++m) {
    Eigen::VectorXi k = b.indices.row(m).transpose();
    CHECK(ergo::mode_flat_index(b, k) == m);
  }
}

TEST_CASE("normalizers follow the per-axis zero/nonzero rule") {
  SearchSpace space(Eigen::Vector2d(2.0, 0.5));
  BasisSet b = ergo::build_basis(space, 3);
  auto h = [&](int k1, int k2) {
    Eigen::VectorXi k(2);
    k << k1, k2;
    return b.normalizers[ergo::mode_flat_index(b, k)];
  };
  CHECK(h(0, 0) == doctest::Approx(std::sqrt(2.0 * 0.5)).epsilon(1e-15));
  CHECK(h(1, 0) == doctest::Approx(std::sqrt(1.0 * 0.5)).epsilon(1e-15));
  CHECK(h(0, 2) == doctest::Approx(std::sqrt(2.0 * 0.25)).epsilon(1e-15));
  CHECK(h(2, 1) == doctest::Approx(std::sqrt(1.0 * 0.25)).epsilon(1e-15));
}

TEST_CASE("sobolev weights match frozen values on the unit square") {
  SearchSpace space(Eigen::Vector2d(1.0, 1.0));
  BasisSet b = ergo::build_basis(space, 3);
  auto w = [&](int k1, int k2) {
    Eigen::VectorXi k(2);
    k << k1, k2;
    return b.weights[ergo::mode_flat_index(b, k)];
  };
  CHECK(w(0, 0) == 1.0);
  CHECK(w(1, 0) == doctest::Approx(0.353553390593).epsilon(1e-11));
  CHECK(w(1, 1) == doctest::Approx(0.192450089730).epsilon(1e-11));
  CHECK(w(2, 1) == doctest::Approx(0.068041381744).epsilon(1e-11));
}

TEST_CASE("basis values at exact trig points") {
  SearchSpace space(Eigen::Vector2d(1.0, 1.0));
  BasisSet b = ergo::build_basis(space, 3);
  Eigen::VectorXi k10(2), k11(2);
  k10 << 1, 0;
  k11 << 1, 1;
  Eigen::VectorXd origin = Eigen::VectorXd::Zero(2);
  // f_k(0) = 1 / h_k.
  CHECK(ergo::eval_basis(b, ergo::mode_flat_index(b, k10), origin) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(ergo::eval_basis(b, ergo::mode_flat_index(b, k11), origin) == doctest::Approx(2.0).epsilon(1e-14));
  // d/dx of sqrt(2) cos(pi x) at x = 1/4 is -pi.
  Eigen::VectorXd x(2);
  x << 0.25, 0.7;
  Eigen::VectorXd g = ergo::eval_basis_grad(b, ergo::mode_flat_index(b, k10), x);
  CHECK(g[0] == doctest::Approx(-M_PI).epsilon(1e-13));
  CHECK(g[1] == 0.0);
}

TEST_CASE("quadrature norms and orthogonality on a rectangle") {
  SearchSpace space(Eigen::Vector2d(1.3, 0.9));
  BasisSet b = ergo::build_basis(space, 4);
  for (int m : {0, 1, 5, 10, 15}) {
    CHECK(ergo::ref::quadrature_inner_product(b, m, m, 256) == doctest::Approx(1.0).epsilon(2e-3));
  }
  CHECK(std::abs(ergo::ref::quadrature_inner_product(b, 0, 3, 256)) < 2e-3);
  CHECK(std::abs(ergo::ref::quadrature_inner_product(b, 5, 10, 256)) < 2e-3);
  CHECK(std::abs(ergo::ref::quadrature_inner_product(b, 7, 14, 256)) < 2e-3);
}

TEST_CASE("analytic gradient matches central differences at interior points") {
  SearchSpace space(Eigen::Vector2d(1.5, 1.0));
  BasisSet b = ergo::build_basis(space, 8);
  ergo::Rng rng(42);
  const double h = 1e-6;
  for (int trial = 0; trial < 30; ++trial) {
    int m = static_cast<int>(rng.uniform_int(b.n_modes()));
    Eigen::VectorXd x(2);
    x << rng.uniform(0.05, 1.45), rng.uniform(0.05, 0.95);
    Eigen::VectorXd g = ergo::eval_basis_grad(b, m, x);
    for (int i = 0; i < 2; ++i) {
      Eigen::VectorXd xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      double fd = (ergo::eval_basis(b, m, xp) - ergo::eval_basis(b, m, xm)) / (2 * h);
      CHECK(g[i] == doctest::Approx(fd).epsilon(1e-6).scale(std::max(1.0, std::abs(g[i]))));
    }
  }
}

TEST_CASE("evaluation clamps out-of-box points to the boundary") {
  SearchSpace space(Eigen::Vector2d(1.0, 1.0));
  BasisSet b = ergo::build_basis(space, 5);
  Eigen::VectorXd outside(2), edge(2);
  outside << 1.4, -0.2;
  edge << 1.0, 0.0;
  for (int m = 0; m < b.n_modes(); ++m) {
    CHECK(ergo::eval_basis(b, m, outside) == ergo::eval_basis(b, m, edge));
    Eigen::VectorXd g = ergo::eval_basis_grad(b, m, outside);
    // sin(k pi) = sin(0) = 0: the clamped gradient vanishes at the faces.
    CHECK(std::abs(g[0]) < 1e-12);
    CHECK(std::abs(g[1]) < 1e-12);
  }
}

TEST_CASE("three-dimensional basis evaluates as a product of axis factors") {
  Eigen::Vector3d lengths(1.0, 2.0, 0.5);
  SearchSpace space(lengths);
  BasisSet b = ergo::build_basis(space, 3);
  REQUIRE(b.n_modes() == 27);
  Eigen::VectorXi k(3);
  k << 2, 1, 1;
  int m = ergo::mode_flat_index(b, k);
  Eigen::VectorXd x(3);
  x << 0.3, 1.1, 0.2;
  double expect = std::cos(2 * M_PI * 0.3) * std::cos(M_PI * 1.1 / 2.0) * std::cos(M_PI * 0.2 / 0.5);
  expect /= b.normalizers[m];
  CHECK(ergo::eval_basis(b, m, x) == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("basis csv export writes one row per mode with indices and weights") {
  SearchSpace space(Eigen::Vector2d(1.0, 1.0));
  BasisSet b = ergo::build_basis(space, 2);
  Eigen::VectorXd values(4);
  values << 1.0, -0.25, 0.5, 0.125;
  const std::string path = "basis_export_test.csv";
  ergo::export_basis_csv(b, values, path);
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string header;
  std::getline(in, header);
  CHECK(header == "k1,k2,h,lambda,value");
  int rows = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++rows;
    if (rows == 1) {
      std::stringstream ss(line);
      std::string tok;
      std::getline(ss, tok, ',');
      CHECK(tok == "0");
      std::getline(ss, tok, ',');
      CHECK(tok == "0");
      std::getline(ss, tok, ',');
      CHECK(std::stod(tok) == doctest::Approx(1.0));
      std::getline(ss, tok, ',');
      CHECK(std::stod(tok) == 1.0);
      std::getline(ss, tok, ',');
      CHECK(std::stod(tok) == 1.0);
    }
  }
  CHECK(rows == 4);
  std::remove(path.c_str());
}

TEST_CASE("constructor rejects bad spaces and mode counts") {
  CHECK_THROWS_AS(SearchSpace(Eigen::VectorXd::Ones(1)), std::invalid_argument);
  CHECK_THROWS_AS(SearchSpace(Eigen::VectorXd::Ones(4)), std::invalid_argument);
  Eigen::Vector2d neg(1.0, -1.0);
  CHECK_THROWS_AS(SearchSpace{neg}, std::invalid_argument);
  SearchSpace ok(Eigen::Vector2d(1.0, 1.0));
  CHECK_THROWS_AS(ergo::build_basis(ok, 0), std::invalid_argument);
}
