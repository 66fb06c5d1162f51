#pragma once

#include <string>

#include <Eigen/Dense>

#include "ergo/space.hpp"

namespace ergo {

/// Truncated normalized cosine basis on a rectangular search space.
///
/// Mode m has index vector k = indices.row(m), normalizer h = normalizers[m]
/// such that the basis function f_k(x) = (1/h) prod_i cos(k_i pi x_i / L_i)
/// has unit L2 norm over the box, and Sobolev weight
/// lambda_k = (1 + |k|^2)^(-(d+1)/2).
struct BasisSet {
  SearchSpace space;
  int modes_per_dim = 0;
  Eigen::MatrixXi indices;      // n_modes x d, lexicographic, (0,...,0) first
  Eigen::VectorXd normalizers;  // h_k
  Eigen::VectorXd weights;      // lambda_k

  int n_modes() const { return static_cast<int>(indices.rows()); }
};

BasisSet build_basis(const SearchSpace& space, int modes_per_dim);

/// Flat position of an index vector in the lexicographic ordering.
/// Throws if any component is outside [0, modes_per_dim).
int mode_flat_index(const BasisSet& basis, const Eigen::VectorXi& k);

/// f_k(x). Points marginally outside the box are clamped component-wise.
double eval_basis(const BasisSet& basis, int mode, const Eigen::VectorXd& x);
double eval_basis(const BasisSet& basis, const Eigen::VectorXi& k, const Eigen::VectorXd& x);

/// Analytic gradient d f_k / d x.
Eigen::VectorXd eval_basis_grad(const BasisSet& basis, int mode, const Eigen::VectorXd& x);
Eigen::VectorXd eval_basis_grad(const BasisSet& basis, const Eigen::VectorXi& k,
                                const Eigen::VectorXd& x);

/// CSV dump with columns k_1,...,k_d,h,lambda,value.
void export_basis_csv(const BasisSet& basis, const Eigen::VectorXd& values,
                      const std::string& path);

}  // namespace ergo
