#pragma once

#include <vector>

#include <Eigen/Dense>

#include "ergo/basis.hpp"
#include "ergo/dynamics.hpp"
#include "ergo/volumetric.hpp"

namespace ergo {

/// Mean of the volumetric basis over the trajectory states (the discrete
/// time average of f^v; dt cancels out of the normalized average).
Eigen::VectorXd trajectory_coefficients(const BasisSet& basis, const VolumetricModel& model,
                                        const DynamicsModel& dyn,
                                        const std::vector<Eigen::VectorXd>& states, double dt);

/// sum_k lambda_k (c_k - phi_k)^2, compensated accumulation.
double ergodic_metric(const Eigen::VectorXd& weights, const Eigen::VectorXd& c,
                      const Eigen::VectorXd& phi);

/// d(ergodic_metric of the whole trajectory)/d(s_t) for t >= horizon_start.
/// Earlier states still shape the coefficients but are treated as fixed.
std::vector<Eigen::VectorXd> metric_state_gradient(const BasisSet& basis,
                                                   const VolumetricModel& model,
                                                   const DynamicsModel& dyn,
                                                   const std::vector<Eigen::VectorXd>& states,
                                                   double dt, const Eigen::VectorXd& phi,
                                                   int horizon_start);

}  // namespace ergo
