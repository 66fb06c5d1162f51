#include "ergo/ilqr.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ergo::ilqr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Rollout {
  std::vector<Eigen::VectorXd> states;
  std::vector<Eigen::VectorXd> controls;
  double cost = kInf;
};

Eigen::VectorXd project(const Problem& prob, const Eigen::VectorXd& u) {
  return prob.clamp ? prob.clamp(u) : u;
}

// Roll the tape out open-loop; throws from step/cost propagate to the caller.
Rollout rollout_open_loop(const Problem& prob, const Eigen::VectorXd& s0,
                          const std::vector<Eigen::VectorXd>& tape) {
  Rollout r;
  r.states.reserve(prob.horizon + 1);
  r.controls.reserve(prob.horizon);
  r.states.push_back(s0);
  for (int t = 0; t < prob.horizon; ++t) {
    r.controls.push_back(project(prob, tape[t]));
    r.states.push_back(prob.step(t, r.states.back(), r.controls.back()));
  }
  r.cost = prob.cost(r.states, r.controls);
  return r;
}

}  // namespace

Result solve(const Problem& prob, const Options& opt, const Eigen::VectorXd& s0,
             const std::vector<Eigen::VectorXd>& u_init) {
  if (static_cast<int>(u_init.size()) != prob.horizon)
    throw std::invalid_argument("ilqr: warm-start tape length != horizon");
  if (prob.horizon < 1) throw std::invalid_argument("ilqr: horizon must be >= 1");

  Rollout nominal = rollout_open_loop(prob, s0, u_init);
  if (!std::isfinite(nominal.cost)) throw std::runtime_error("ilqr: non-finite initial cost");

  Result res;
  res.cost_trace.push_back(nominal.cost);

  const int H = prob.horizon;
  const int n = prob.state_dim, m = prob.control_dim;
  double mu = opt.mu_init;
  bool degraded = false;

  std::vector<Eigen::VectorXd> l_x(H + 1), l_u(H);
  std::vector<Eigen::MatrixXd> l_xx(H + 1), l_uu(H);
  std::vector<Eigen::MatrixXd> A(H), B(H);
  std::vector<Eigen::VectorXd> k(H);
  std::vector<Eigen::MatrixXd> K(H);

  int iter = 0;
  for (; iter < opt.max_iters; ++iter) {
    prob.expand(nominal.states, nominal.controls, l_x, l_xx, l_u, l_uu);
    for (int t = 0; t < H; ++t)
      std::tie(A[t], B[t]) = prob.linearize(t, nominal.states[t], nominal.controls[t]);

    // Backward pass; retried with a larger mu when Q_uu loses definiteness.
    double d1 = 0.0, d2 = 0.0;
    bool pass_ok = false;
    while (!pass_ok) {
      d1 = d2 = 0.0;
      pass_ok = true;
      Eigen::VectorXd Vx = l_x[H];
      Eigen::MatrixXd Vxx = l_xx[H];
      for (int t = H - 1; t >= 0; --t) {
        const Eigen::VectorXd Qx = l_x[t] + A[t].transpose() * Vx;
        const Eigen::VectorXd Qu = l_u[t] + B[t].transpose() * Vx;
        const Eigen::MatrixXd Qxx = l_xx[t] + A[t].transpose() * Vxx * A[t];
        const Eigen::MatrixXd Qux = B[t].transpose() * Vxx * A[t];
        Eigen::MatrixXd Quu = l_uu[t] + B[t].transpose() * Vxx * B[t];
        Quu.diagonal().array() += mu;

        Eigen::LLT<Eigen::MatrixXd> llt(Quu);
        if (llt.info() != Eigen::Success) {
          pass_ok = false;
          break;
        }
        k[t] = -llt.solve(Qu);
        K[t] = -llt.solve(Qux);

        d1 += k[t].dot(Qu);
        d2 += 0.5 * k[t].dot(Quu * k[t]);

        Vx = Qx + K[t].transpose() * Quu * k[t] + K[t].transpose() * Qu + Qux.transpose() * k[t];
        Vxx = Qxx + K[t].transpose() * Quu * K[t] + K[t].transpose() * Qux +
              Qux.transpose() * K[t];
        Vxx = 0.5 * (Vxx + Vxx.transpose()).eval();
      }
      if (!pass_ok) {
        mu *= opt.mu_factor;
        if (mu > opt.mu_max) {
          degraded = true;
          break;
        }
      }
    }
    if (degraded) break;

    // Line search on the feedforward scale.
    bool accepted = false;
    double alpha = 1.0;
    for (int trial = 0; trial < opt.ls_max_trials; ++trial, alpha *= opt.ls_beta) {
      Rollout cand;
      cand.states.reserve(H + 1);
      cand.controls.reserve(H);
      cand.states.push_back(s0);
      bool blew_up = false;
      for (int t = 0; t < H; ++t) {
        Eigen::VectorXd u =
            nominal.controls[t] + alpha * k[t] + K[t] * (cand.states.back() - nominal.states[t]);
        u = project(prob, u);
        cand.controls.push_back(u);
        try {
          cand.states.push_back(prob.step(t, cand.states.back(), u));
        } catch (const std::exception&) {
          blew_up = true;
          break;
        }
      }
      if (blew_up) continue;
      double c;
      try {
        c = prob.cost(cand.states, cand.controls);
      } catch (const std::exception&) {
        continue;
      }
      if (!std::isfinite(c)) continue;
      cand.cost = c;

      const double expected = -(alpha * d1 + alpha * alpha * d2);
      const double decrease = nominal.cost - c;
      const bool armijo_ok = expected > 0.0 ? decrease >= opt.armijo * expected : decrease >= 0.0;
      if (armijo_ok) {
        nominal = std::move(cand);
        accepted = true;
        break;
      }
    }

    if (accepted) {
      res.cost_trace.push_back(nominal.cost);
      mu = std::max(opt.mu_init, mu / opt.mu_factor);
      const double gain = res.cost_trace[res.cost_trace.size() - 2] - nominal.cost;
      if (gain < opt.tol) {
        ++iter;
        break;
      }
    } else {
      mu *= opt.mu_factor;
      if (mu > opt.mu_max) {
        degraded = true;
        break;
      }
    }
  }

  res.states = std::move(nominal.states);
  res.controls = std::move(nominal.controls);
  res.cost = nominal.cost;
  res.iterations = iter;
  res.degraded = degraded;
  return res;
}

}  // namespace ergo::ilqr
