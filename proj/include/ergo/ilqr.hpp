#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace ergo::ilqr {

/// Discrete-time optimal control problem over a fixed horizon, described by
/// callbacks so the solver stays independent of the ergodic machinery.
/// States run s_0..s_H (s_0 fixed), controls u_0..u_{H-1}.
struct Problem {
  int state_dim = 0;
  int control_dim = 0;
  int horizon = 0;

  std::function<Eigen::VectorXd(int t, const Eigen::VectorXd& s, const Eigen::VectorXd& u)> step;
  std::function<std::pair<Eigen::MatrixXd, Eigen::MatrixXd>(int t, const Eigen::VectorXd& s,
                                                            const Eigen::VectorXd& u)>
      linearize;
  /// Total cost of a rollout (states.size() == horizon + 1).
  std::function<double(const std::vector<Eigen::VectorXd>& states,
                       const std::vector<Eigen::VectorXd>& controls)>
      cost;
  /// Quadratic expansion around the nominal rollout. Sizes: l_x, l_xx over
  /// t = 0..H (entry 0 may be zero; it never influences the controls);
  /// l_u, l_uu over t = 0..H-1. Cross terms l_ux are assumed zero.
  std::function<void(const std::vector<Eigen::VectorXd>& states,
                     const std::vector<Eigen::VectorXd>& controls,
                     std::vector<Eigen::VectorXd>& l_x, std::vector<Eigen::MatrixXd>& l_xx,
                     std::vector<Eigen::VectorXd>& l_u, std::vector<Eigen::MatrixXd>& l_uu)>
      expand;
  /// Optional control projection applied before every dynamics step.
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> clamp;
};

struct Options {
  int max_iters = 5;
  double mu_init = 1e-6;
  double mu_factor = 10.0;
  double mu_max = 1e8;
  double ls_beta = 0.5;
  int ls_max_trials = 10;
  double armijo = 1e-4;
  double tol = 1e-10;
};

struct Result {
  std::vector<Eigen::VectorXd> states;
  std::vector<Eigen::VectorXd> controls;
  double cost = 0.0;
  int iterations = 0;
  bool degraded = false;
  std::vector<double> cost_trace;  // initial rollout cost, then each accepted iterate
};

/// Levenberg-regularized iLQR with backtracking line search on the
/// feedforward. Only improving (or equal-cost) rollouts are accepted, so the
/// cost trace is non-increasing by construction. Rollouts that throw are
/// treated as infinitely expensive line-search trials.
Result solve(const Problem& prob, const Options& opt, const Eigen::VectorXd& s0,
             const std::vector<Eigen::VectorXd>& u_init);

}  // namespace ergo::ilqr
