#include "ergo/serial_ref.hpp"

#include <cmath>
#include <stdexcept>

namespace ergo::ref {

Eigen::VectorXd mode_values(const BasisSet& basis, const Eigen::MatrixXd& pts, double scale) {
  const int M = basis.n_modes();
  const int P = static_cast<int>(pts.rows());
  Eigen::VectorXd out(M);
  for (int m = 0; m < M; ++m) {
    double acc = 0.0;
    for (int p = 0; p < P; ++p) acc += eval_basis(basis, m, pts.row(p).transpose());
    out[m] = scale * acc;
  }
  return out;
}

Eigen::VectorXd mode_values_weighted(const BasisSet& basis, const Eigen::MatrixXd& pts,
                                     const Eigen::VectorXd& weights) {
  const int M = basis.n_modes();
  const int P = static_cast<int>(pts.rows());
  if (weights.size() != P) throw std::invalid_argument("ref::mode_values_weighted: weight count mismatch");
  Eigen::VectorXd out(M);
  for (int m = 0; m < M; ++m) {
    long double acc = 0.0L;
    for (int p = 0; p < P; ++p)
      acc += static_cast<long double>(weights[p]) * eval_basis(basis, m, pts.row(p).transpose());
    out[m] = static_cast<double>(acc);
  }
  return out;
}

Eigen::MatrixXd mode_gradients(const BasisSet& basis, const Eigen::MatrixXd& pts,
                               const std::vector<Eigen::MatrixXd>& jacobians, int state_dim,
                               double scale) {
  const int d = basis.space.dims();
  const int M = basis.n_modes();
  const int P = static_cast<int>(pts.rows());
  if (static_cast<int>(jacobians.size()) != P)
    throw std::invalid_argument("ref::mode_gradients: jacobian count mismatch");
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(M, state_dim);
  for (int m = 0; m < M; ++m) {
    Eigen::VectorXd row = Eigen::VectorXd::Zero(state_dim);
    for (int p = 0; p < P; ++p) {
      const Eigen::MatrixXd& J = jacobians[p];
      if (J.rows() != d || J.cols() != state_dim)
        throw std::invalid_argument("ref::mode_gradients: jacobian shape mismatch");
      row += J.transpose() * eval_basis_grad(basis, m, pts.row(p).transpose());
    }
    A.row(m) = scale * row.transpose();
  }
  return A;
}

Eigen::VectorXd quadrature_coefficients(const BasisSet& basis,
                                        const std::function<double(const Eigen::VectorXd&)>& density,
                                        int cells_per_dim, double* mass_out) {
  const int d = basis.space.dims();
  if (d != 2) throw std::invalid_argument("ref::quadrature_coefficients: 2-D only");
  const int n = cells_per_dim;
  const double dx = basis.space.lengths[0] / n;
  const double dy = basis.space.lengths[1] / n;
  const double dA = dx * dy;
  const int M = basis.n_modes();

  std::vector<long double> acc(M, 0.0L);
  long double mass = 0.0L;
  Eigen::VectorXd x(2);
  for (int i = 0; i < n; ++i) {
    x[0] = (i + 0.5) * dx;
    for (int j = 0; j < n; ++j) {
      x[1] = (j + 0.5) * dy;
      const double q = density(x) * dA;
      mass += q;
      for (int m = 0; m < M; ++m) acc[m] += static_cast<long double>(q) * eval_basis(basis, m, x);
    }
  }
  if (mass <= 0.0L) throw std::runtime_error("ref::quadrature_coefficients: non-positive mass");
  if (mass_out) *mass_out = static_cast<double>(mass);
  Eigen::VectorXd out(M);
  for (int m = 0; m < M; ++m) out[m] = static_cast<double>(acc[m] / mass);
  return out;
}

double quadrature_inner_product(const BasisSet& basis, int mode_a, int mode_b, int cells_per_dim) {
  const int d = basis.space.dims();
  if (d != 2) throw std::invalid_argument("ref::quadrature_inner_product: 2-D only");
  const int n = cells_per_dim;
  const double dx = basis.space.lengths[0] / n;
  const double dy = basis.space.lengths[1] / n;
  long double acc = 0.0L;
  Eigen::VectorXd x(2);
  for (int i = 0; i < n; ++i) {
    x[0] = (i + 0.5) * dx;
    for (int j = 0; j < n; ++j) {
      x[1] = (j + 0.5) * dy;
      acc += static_cast<long double>(eval_basis(basis, mode_a, x)) * eval_basis(basis, mode_b, x);
    }
  }
  return static_cast<double>(acc * dx * dy);
}

double ergodic_metric(const Eigen::VectorXd& weights, const Eigen::VectorXd& c,
                      const Eigen::VectorXd& phi) {
  long double acc = 0.0L;
  for (Eigen::Index m = 0; m < weights.size(); ++m) {
    const long double e = static_cast<long double>(c[m]) - phi[m];
    acc += static_cast<long double>(weights[m]) * e * e;
  }
  return static_cast<double>(acc);
}

}  // namespace ergo::ref
