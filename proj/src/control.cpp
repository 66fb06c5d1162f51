#include "ergo/control.hpp"

#include <chrono>
#include <limits>
#include <stdexcept>

#include "ergo/metric.hpp"

namespace ergo {

void ControllerConfig::validate(int control_dim) const {
  if (horizon < 2) throw std::invalid_argument("controller: horizon must be >= 2");
  if (!(dt > 0.0)) throw std::invalid_argument("controller: dt must be positive");
  if (R.rows() != control_dim || R.cols() != control_dim)
    throw std::invalid_argument("controller: R shape mismatch");
  Eigen::LLT<Eigen::MatrixXd> llt(R);
  if (llt.info() != Eigen::Success) throw std::invalid_argument("controller: R must be SPD");
  if (max_ilqr_iters < 1) throw std::invalid_argument("controller: max_ilqr_iters must be >= 1");
  if (!(ilqr_opts.ls_beta > 0.0 && ilqr_opts.ls_beta < 1.0))
    throw std::invalid_argument("controller: line-search beta must be in (0,1)");
  if (!(ilqr_opts.tol > 0.0) || !(ilqr_opts.armijo > 0.0) || !(ilqr_opts.mu_init > 0.0))
    throw std::invalid_argument("controller: tolerances must be positive");
}

Eigen::MatrixXd default_control_weight(const DynamicsModel& dyn) {
  return 1e-2 * Eigen::MatrixXd::Identity(dyn.control_dim, dyn.control_dim);
}

Eigen::VectorXd neutral_control(const DynamicsModel& dyn) {
  Eigen::VectorXd u = Eigen::VectorXd::Zero(dyn.control_dim);
  if (dyn.platform == Platform::Quadcopter12) u[0] = dyn.quad.mass * dyn.quad.gravity;
  return u;
}

PlanResult plan(const ControllerConfig& cfg, const ControllerMemory& memory, const BasisSet& basis,
                const CoverageEvaluator& eval, const DynamicsModel& dyn, const Eigen::VectorXd& phi,
                const Eigen::VectorXd& s_now) {
  cfg.validate(dyn.control_dim);
  if (memory.n_modes() != basis.n_modes() || phi.size() != basis.n_modes())
    throw std::invalid_argument("plan: coefficient length mismatch");
  const bool anchored = cfg.state_weight.size() > 0;
  if (anchored && cfg.state_weight.size() != dyn.state_dim)
    throw std::invalid_argument("plan: state_weight length must match the state dimension");
  if (cfg.state_ref.size() > 0 && cfg.state_ref.size() != dyn.state_dim)
    throw std::invalid_argument("plan: state_ref length must match the state dimension");
  const Eigen::VectorXd s_ref = cfg.state_ref.size() > 0
                                    ? cfg.state_ref
                                    : Eigen::VectorXd::Zero(dyn.state_dim);
  const bool bounded = cfg.boundary_weight > 0.0;
  if (bounded && !(cfg.bound_hi[0] > cfg.bound_lo[0] && cfg.bound_hi[1] > cfg.bound_lo[1]))
    throw std::invalid_argument("plan: containment box must have positive extent");
  // Containment axes: (state index, lower, upper). C1, piecewise quadratic.
  struct Wall {
    int idx;
    double lo, hi;
  };
  std::vector<Wall> walls;
  if (bounded) {
    walls.push_back({dyn.ix, cfg.bound_lo[0], cfg.bound_hi[0]});
    walls.push_back({dyn.iy, cfg.bound_lo[1], cfg.bound_hi[1]});
    if (dyn.iz >= 0 && cfg.ground_z >= 0.0)
      walls.push_back({dyn.iz, cfg.ground_z, std::numeric_limits<double>::infinity()});
  }
  const auto overshoot = [](const Eigen::VectorXd& s, const Wall& wl) {
    const double v = s[wl.idx];
    if (v < wl.lo) return v - wl.lo;
    if (v > wl.hi) return v - wl.hi;
    return 0.0;
  };

  const int H = cfg.horizon;
  const double w = 1.0 / static_cast<double>(memory.elapsed_steps() + H);
  const Eigen::VectorXd past_sum =
      static_cast<double>(memory.elapsed_steps()) * memory.running_basis_mean();
  const Eigen::VectorXd lambda = basis.weights;
  // Effort is penalized relative to the neutral control so that holding
  // altitude is free for the quadcopter; for the planar platforms the
  // neutral control is zero and this is the plain quadratic penalty.
  const Eigen::VectorXd u_ref = neutral_control(dyn);

  ilqr::Problem prob;
  prob.state_dim = dyn.state_dim;
  prob.control_dim = dyn.control_dim;
  prob.horizon = H;
  prob.clamp = [&dyn](const Eigen::VectorXd& u) { return clamp_control(dyn, u); };
  prob.step = [&](int, const Eigen::VectorXd& s, const Eigen::VectorXd& u) {
    return step_rk4(dyn, s, u, cfg.dt);
  };
  prob.linearize = [&](int, const Eigen::VectorXd& s, const Eigen::VectorXd& u) {
    return linearize(dyn, s, u, cfg.dt);
  };
  prob.cost = [&, w](const std::vector<Eigen::VectorXd>& states,
                     const std::vector<Eigen::VectorXd>& controls) {
    Eigen::VectorXd csum = past_sum;
    for (int t = 1; t <= H; ++t) csum += eval.values(states[t]);
    double j = ergodic_metric(lambda, (w * csum).eval(), phi);
    for (const auto& u : controls) {
      const Eigen::VectorXd du = u - u_ref;
      j += du.dot(cfg.R * du) * cfg.dt;
    }
    if (anchored) {
      for (int t = 1; t <= H; ++t) {
        const Eigen::VectorXd ds = states[t] - s_ref;
        j += ds.dot(cfg.state_weight.cwiseProduct(ds)) * cfg.dt;
      }
    }
    for (const auto& wl : walls)
      for (int t = 1; t <= H; ++t) {
        const double d = overshoot(states[t], wl);
        j += cfg.boundary_weight * d * d * cfg.dt;
      }
    return j;
  };
  prob.expand = [&, w](const std::vector<Eigen::VectorXd>& states,
                       const std::vector<Eigen::VectorXd>& controls,
                       std::vector<Eigen::VectorXd>& l_x, std::vector<Eigen::MatrixXd>& l_xx,
                       std::vector<Eigen::VectorXd>& l_u, std::vector<Eigen::MatrixXd>& l_uu) {
    std::vector<Eigen::MatrixXd> A(H + 1);
    Eigen::VectorXd csum = past_sum;
    for (int t = 1; t <= H; ++t) {
      auto [v, G] = eval.values_and_gradients(states[t]);
      csum += v;
      A[t] = std::move(G);
    }
    const Eigen::VectorXd c = w * csum;
    const Eigen::VectorXd r = 2.0 * w * lambda.cwiseProduct(c - phi);
    l_x[0] = Eigen::VectorXd::Zero(dyn.state_dim);
    l_xx[0] = Eigen::MatrixXd::Zero(dyn.state_dim, dyn.state_dim);
    for (int t = 1; t <= H; ++t) {
      l_x[t] = A[t].transpose() * r;
      // Gauss-Newton curvature of sum_k lambda_k (c_k - phi_k)^2 in s_t.
      l_xx[t] = 2.0 * w * w * (A[t].transpose() * lambda.asDiagonal() * A[t]);
      if (anchored) {
        l_x[t] += 2.0 * cfg.dt * cfg.state_weight.cwiseProduct(states[t] - s_ref);
        l_xx[t] += (2.0 * cfg.dt) * cfg.state_weight.asDiagonal();
      }
      for (const auto& wl : walls) {
        const double d = overshoot(states[t], wl);
        if (d != 0.0) {
          l_x[t][wl.idx] += 2.0 * cfg.boundary_weight * d * cfg.dt;
          l_xx[t](wl.idx, wl.idx) += 2.0 * cfg.boundary_weight * cfg.dt;
        }
      }
    }
    const Eigen::MatrixXd Ruu = 2.0 * cfg.dt * cfg.R;
    for (int t = 0; t < H; ++t) {
      l_u[t] = Ruu * (controls[t] - u_ref);
      l_uu[t] = Ruu;
    }
  };

  ilqr::Options opts = cfg.ilqr_opts;
  opts.max_iters = cfg.max_ilqr_iters;

  std::vector<Eigen::VectorXd> u_init;
  const bool warm = static_cast<int>(memory.last_plan.size()) == H;
  if (warm) {
    u_init.assign(memory.last_plan.begin() + 1, memory.last_plan.end());
    u_init.push_back(memory.last_plan.back());
  } else {
    u_init.assign(H, u_ref);
  }

  ilqr::Result r;
  try {
    r = ilqr::solve(prob, opts, s_now, u_init);
  } catch (const std::exception&) {
    // The shifted warm start can roll into states the footprint model rejects
    // (a camera dipping under the ground plane, say). Retry from the neutral
    // tape; if that is rejected too the failure is real and propagates.
    if (!warm) throw;
    u_init.assign(H, u_ref);
    r = ilqr::solve(prob, opts, s_now, u_init);
  }
  PlanResult out;
  out.controls = std::move(r.controls);
  out.states = std::move(r.states);
  out.cost = r.cost;
  out.iterations = r.iterations;
  out.degraded = r.degraded;
  out.cost_trace = std::move(r.cost_trace);
  return out;
}

StepResult execute_step(const ControllerConfig& cfg, ControllerMemory& memory,
                        const BasisSet& basis, const CoverageEvaluator& eval,
                        const DynamicsModel& dyn, const Eigen::VectorXd& phi,
                        const Eigen::VectorXd& s_now, bool record_time) {
  const auto t0 = std::chrono::steady_clock::now();

  memory.fold(eval.values(s_now));
  StepResult res;
  res.executed_metric = ergodic_metric(basis.weights, memory.running_basis_mean(), phi);

  PlanResult p = plan(cfg, memory, basis, eval, dyn, phi, s_now);
  res.u = p.controls.front();
  res.s_next = step_rk4(dyn, s_now, res.u, cfg.dt);
  res.plan_cost = p.cost;
  res.ilqr_iters = p.iterations;
  res.degraded = p.degraded;
  memory.last_plan = std::move(p.controls);

  if (record_time) {
    const auto t1 = std::chrono::steady_clock::now();
    res.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  }
  return res;
}

}  // namespace ergo
