#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "ergo/basis.hpp"

/// Serial reference implementations of the parallel kernels. These evaluate
/// the defining formulas directly (std::cos per mode, no recurrence tables,
/// no OpenMP) and are kept as independent oracles for the tests and as the
/// baseline side of the kernel benchmark.
namespace ergo::ref {

/// out[m] = scale * sum_p f_m(x_p), plain left-to-right accumulation.
Eigen::VectorXd mode_values(const BasisSet& basis, const Eigen::MatrixXd& pts, double scale);

/// out[m] = sum_p w_p f_m(x_p) in long double.
Eigen::VectorXd mode_values_weighted(const BasisSet& basis, const Eigen::MatrixXd& pts,
                                     const Eigen::VectorXd& weights);

/// A(m, :) = scale * sum_p J_p^T grad f_m(x_p) with full (d x state_dim)
/// Jacobians, one per point.
Eigen::MatrixXd mode_gradients(const BasisSet& basis, const Eigen::MatrixXd& pts,
                               const std::vector<Eigen::MatrixXd>& jacobians, int state_dim,
                               double scale);

/// Normalized target coefficients phi_m = (1/mass) sum_c f_m(x_c) q(x_c) dA
/// over a midpoint grid with cells_per_dim cells along every axis, long
/// double accumulation. Also writes the raw quadrature mass if requested.
Eigen::VectorXd quadrature_coefficients(const BasisSet& basis,
                                        const std::function<double(const Eigen::VectorXd&)>& density,
                                        int cells_per_dim, double* mass_out = nullptr);

/// Midpoint-quadrature inner product <f_a, f_b> over the box (2-D only).
double quadrature_inner_product(const BasisSet& basis, int mode_a, int mode_b, int cells_per_dim);

/// sum_m w_m (c_m - phi_m)^2 in long double.
double ergodic_metric(const Eigen::VectorXd& weights, const Eigen::VectorXd& c,
                      const Eigen::VectorXd& phi);

}  // namespace ergo::ref
