#pragma once

#include <vector>

#include <Eigen/Dense>

#include "ergo/basis.hpp"

namespace ergo::kernels {

/// Per-point cosine/sine tables, cosT[i](p, k) = cos(k pi x_i / L_i).
/// Built once per point set and shared by the value and gradient kernels.
struct PointTables {
  int n_points = 0;
  int modes_per_dim = 0;
  bool has_sin = false;
  std::vector<Eigen::MatrixXd> cosT;  // [dim], each n_points x modes_per_dim
  std::vector<Eigen::MatrixXd> sinT;
};

/// Sample-to-state Jacobians packed densely over the state dimensions that
/// actually move the samples; all other columns are identically zero.
/// Row block [p*d, p*d + d) holds the d x ndep Jacobian of point p.
struct PackedJacobians {
  std::vector<int> dep_dims;
  Eigen::MatrixXd blocks;  // (n_points * d) x dep_dims.size()

  int n_dep() const { return static_cast<int>(dep_dims.size()); }
};

/// Build tables for a set of points (rows of `pts`). Coordinates are clamped
/// into the box before evaluation. OpenMP-parallel over points.
PointTables build_tables(const BasisSet& basis, const Eigen::MatrixXd& pts, bool with_sin);

/// out[m] = scale * sum_p f_m(x_p). OpenMP-parallel over modes with a fixed
/// per-mode summation order, so results do not depend on the thread count.
Eigen::VectorXd mode_values(const BasisSet& basis, const PointTables& tables, double scale);

/// out[m] = sum_p w_p f_m(x_p), compensated (Neumaier) accumulation.
Eigen::VectorXd mode_values_weighted(const BasisSet& basis, const PointTables& tables,
                                     const Eigen::VectorXd& weights);

/// A(m, :) = scale * sum_p (d x_p / d s)^T grad_x f_m(x_p), an n_modes x
/// state_dim matrix. Columns outside jac.dep_dims are zero. OpenMP-parallel
/// over modes.
Eigen::MatrixXd mode_gradients(const BasisSet& basis, const PointTables& tables,
                               const PackedJacobians& jac, int state_dim, double scale);

}  // namespace ergo::kernels
