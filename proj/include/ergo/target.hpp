#pragma once

#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "ergo/basis.hpp"
#include "ergo/rng.hpp"
#include "ergo/space.hpp"

namespace ergo {

/// Mixture of Gaussians over the search space. The density is the plain
/// mixture pdf; truncation to the box is handled by the quadrature that
/// computes target coefficients (it renormalizes by the in-box mass).
struct GaussianMixture {
  std::vector<double> weights;
  std::vector<Eigen::VectorXd> means;
  std::vector<Eigen::MatrixXd> covs;

  GaussianMixture(std::vector<double> w, std::vector<Eigen::VectorXd> mu,
                  std::vector<Eigen::MatrixXd> sigma);

  int dims() const { return static_cast<int>(means[0].size()); }
  double pdf(const Eigen::VectorXd& x) const;

 private:
  // Cached per component: LLT factor of the covariance and the pdf prefactor.
  std::vector<Eigen::MatrixXd> chol_;
  std::vector<double> norm_;
};

/// Piecewise-constant density on a regular grid over the box. Stored row-major
/// with the (0,0) corner first: values(r, c) covers the cell at
/// x in [c, c+1)*Lx/nx, y in [r, r+1)*Ly/ny. Renormalized at construction so
/// the cell sums integrate to one.
struct GridDensity {
  SearchSpace space;
  Eigen::MatrixXd values;  // ny rows, nx cols

  GridDensity(SearchSpace box, Eigen::MatrixXd cell_values);

  double value_at(const Eigen::VectorXd& x) const;
};

using TargetDistribution = std::variant<GaussianMixture, GridDensity>;

double target_density(const TargetDistribution& q, const Eigen::VectorXd& x);

/// Uniform density over the box as a trivial grid.
GridDensity uniform_density(const SearchSpace& space);

/// Fourier coefficients of q by midpoint quadrature on a regular grid,
/// renormalized by the quadrature mass over the box, which pins phi[0] to
/// 1 / h_(0,...,0) up to rounding. 2-D only.
Eigen::VectorXd target_coefficients(const BasisSet& basis, const TargetDistribution& q,
                                    int quad_cells_per_dim);

/// n draws from the mixture, rejection-resampled into the box (at most 1000
/// rejections per point). Rows are points.
Eigen::MatrixXd sample_gmm(const GaussianMixture& q, const SearchSpace& space, int n, Rng& rng);

}  // namespace ergo
