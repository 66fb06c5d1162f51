#include "ergo/metric.hpp"

#include <stdexcept>

#include "ergo/compensated.hpp"

namespace ergo {

Eigen::VectorXd trajectory_coefficients(const BasisSet& basis, const VolumetricModel& model,
                                        const DynamicsModel& dyn,
                                        const std::vector<Eigen::VectorXd>& states, double dt) {
  if (states.empty()) throw std::invalid_argument("trajectory_coefficients: no states");
  if (!(dt > 0.0)) throw std::invalid_argument("trajectory_coefficients: dt must be positive");
  const int M = basis.n_modes();
  std::vector<CompensatedSum> acc(M);
  for (const auto& s : states) {
    const Eigen::VectorXd fv = vol_basis_all(basis, model, dyn, s);
    for (int m = 0; m < M; ++m) acc[m].add(fv[m]);
  }
  Eigen::VectorXd c(M);
  const double inv = 1.0 / static_cast<double>(states.size());
  for (int m = 0; m < M; ++m) c[m] = acc[m].value() * inv;
  return c;
}

double ergodic_metric(const Eigen::VectorXd& weights, const Eigen::VectorXd& c,
                      const Eigen::VectorXd& phi) {
  if (c.size() != phi.size() || c.size() != weights.size())
    throw std::invalid_argument("ergodic_metric: coefficient length mismatch");
  CompensatedSum acc;
  for (Eigen::Index m = 0; m < c.size(); ++m) {
    const double e = c[m] - phi[m];
    acc.add(weights[m] * e * e);
  }
  return acc.value();
}

std::vector<Eigen::VectorXd> metric_state_gradient(const BasisSet& basis,
                                                   const VolumetricModel& model,
                                                   const DynamicsModel& dyn,
                                                   const std::vector<Eigen::VectorXd>& states,
                                                   double dt, const Eigen::VectorXd& phi,
                                                   int horizon_start) {
  const int T = static_cast<int>(states.size());
  if (horizon_start < 0 || horizon_start >= T)
    throw std::invalid_argument("metric_state_gradient: horizon_start out of range");
  const Eigen::VectorXd c = trajectory_coefficients(basis, model, dyn, states, dt);
  // dE/ds_t = (2/T) * A_t^T (lambda o (c - phi)); the dt in the average and
  // in the duration cancel.
  const Eigen::VectorXd r = 2.0 / T * basis.weights.cwiseProduct(c - phi);
  std::vector<Eigen::VectorXd> grads;
  grads.reserve(T - horizon_start);
  for (int t = horizon_start; t < T; ++t) {
    const Eigen::MatrixXd A = vol_basis_grad_all(basis, model, dyn, states[t]);
    grads.push_back(A.transpose() * r);
  }
  return grads;
}

}  // namespace ergo
