#pragma once

#include <vector>

#include <Eigen/Dense>

#include "ergo/basis.hpp"
#include "ergo/compensated.hpp"
#include "ergo/dynamics.hpp"
#include "ergo/evaluator.hpp"
#include "ergo/ilqr.hpp"

namespace ergo {

struct ControllerConfig {
  int horizon = 20;
  double dt = 0.1;
  Eigen::MatrixXd R;  // control cost weight, SPD
  int max_ilqr_iters = 5;
  ilqr::Options ilqr_opts;

  // Optional diagonal state anchoring: adds sum_t (s_t - state_ref)' diag(state_weight)
  // (s_t - state_ref) dt to the planning cost. Empty = off. The coverage metric
  // leaves some quadcopter states (altitude, attitude, rates) with no gradient at
  // all under a point footprint, and the optimizer drifts in those directions
  // until the model leaves its valid envelope; a small restoring term keeps the
  // receding-horizon problem well posed. Benchmarks use the same weights for
  // every method so comparisons stay fair.
  Eigen::VectorXd state_weight;
  Eigen::VectorXd state_ref;

  // Optional domain containment: a one-sided quadratic on the planar position
  // outside [bound_lo, bound_hi], weighted by boundary_weight (0 = off). The
  // cosine basis is periodic, so without this the optimizer is indifferent
  // between covering the workspace and covering one of its mirror images.
  // ground_z >= 0 adds a floor at that altitude with the same stiffness
  // (descending below it is where the ray-cast model stops being defined);
  // ascent stays unpenalized.
  double boundary_weight = 0.0;
  Eigen::Vector2d bound_lo{0.0, 0.0};
  Eigen::Vector2d bound_hi{0.0, 0.0};
  double ground_z = -1.0;

  void validate(int control_dim) const;
};

/// Default R for a platform: 1e-2 I. Effort is measured against the neutral
/// control, so hover thrust costs nothing and no per-channel scaling is needed.
Eigen::MatrixXd default_control_weight(const DynamicsModel& dyn);

/// Zero-effort reference control: zeros, or hover thrust for the quadcopter.
Eigen::VectorXd neutral_control(const DynamicsModel& dyn);

/// What the receding-horizon controller remembers between steps: how many
/// states it has executed and the running mean of their basis values
/// (compensated), plus the previous plan for warm starting.
class ControllerMemory {
 public:
  explicit ControllerMemory(int n_modes) : acc_(n_modes) {}

  long elapsed_steps() const { return elapsed_; }
  int n_modes() const { return static_cast<int>(acc_.size()); }

  void fold(const Eigen::VectorXd& basis_values) {
    for (size_t m = 0; m < acc_.size(); ++m) acc_[m].add(basis_values[static_cast<int>(m)]);
    ++elapsed_;
  }

  /// Mean of f over executed states; valid once elapsed_steps >= 1.
  Eigen::VectorXd running_basis_mean() const {
    Eigen::VectorXd mean(acc_.size());
    const double inv = elapsed_ > 0 ? 1.0 / static_cast<double>(elapsed_) : 0.0;
    for (size_t m = 0; m < acc_.size(); ++m) mean[static_cast<int>(m)] = acc_[m].value() * inv;
    return mean;
  }

  std::vector<Eigen::VectorXd> last_plan;

 private:
  long elapsed_ = 0;
  std::vector<CompensatedSum> acc_;
};

struct PlanResult {
  std::vector<Eigen::VectorXd> controls;  // H entries
  std::vector<Eigen::VectorXd> states;    // H+1 entries, [0] = s_now
  double cost = 0.0;
  int iterations = 0;
  bool degraded = false;
  std::vector<double> cost_trace;
};

struct StepResult {
  Eigen::VectorXd u;
  Eigen::VectorXd s_next;
  double executed_metric = 0.0;  // E over executed states incl. the current one
  double plan_cost = 0.0;
  int ilqr_iters = 0;
  bool degraded = false;
  double wall_ms = 0.0;  // 0 unless timing was requested
};

/// One iLQR solve from s_now. The memory must already include s_now (see
/// execute_step); the optimized cost composes the remembered past with the
/// horizon through the duration-weighted coefficient average, plus a
/// quadratic penalty on deviation from the neutral control and, when
/// state_weight is set, the state anchoring term.
PlanResult plan(const ControllerConfig& cfg, const ControllerMemory& memory, const BasisSet& basis,
                const CoverageEvaluator& eval, const DynamicsModel& dyn, const Eigen::VectorXd& phi,
                const Eigen::VectorXd& s_now);

/// Folds s_now into the memory, re-plans, applies the first control, and
/// steps the dynamics. `record_time` controls the wall_ms diagnostic so runs
/// that require bitwise-identical outputs can leave timing out.
StepResult execute_step(const ControllerConfig& cfg, ControllerMemory& memory,
                        const BasisSet& basis, const CoverageEvaluator& eval,
                        const DynamicsModel& dyn, const Eigen::VectorXd& phi,
                        const Eigen::VectorXd& s_now, bool record_time = true);

}  // namespace ergo
