#include "inputsafe/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>

#include "inputsafe/config.hpp"
#include "inputsafe/error.hpp"

namespace inputsafe {

namespace {

double wrap(double t, double period) { return t > period ? std::fmod(t, period) : t; }

void check_finite(const Eigen::MatrixXd& m, const char* name, double t) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    if (!std::isfinite(m.data()[i])) {
      throw Error(ErrorCode::NumericalBlowup, std::string(name) + "[" + std::to_string(i) +
                                                  "] = " + format_double(m.data()[i]) +
                                                  " at t = " + format_double(t));
    }
  }
}

EstimatorState axpy(const EstimatorState& a, double h, const EstimatorState& d) {
  return {a.w_x + h * d.w_x, a.w_u + h * d.w_u, a.w_h + h * d.w_h};
}

double initial_h(const Scenario& s) {
  return eval_barrier(s.barrier, s.x0, s.u0, 0.0).h;
}

}  // namespace

double disturbance(const DisturbanceSpec& spec, double t) {
  const double d = spec.d_max;
  const double T = spec.period;
  double r = 0.0;
  switch (spec.kind) {
    case DisturbanceKind::Zero:
      return 0.0;
    case DisturbanceKind::PiecewisePaper: {
      const double tt = wrap(t, T);
      if (tt < T / 6.0) r = 0.5 * d * tt;
      else if (tt < T / 3.0) r = d * tt;
      else if (tt < 2.0 * T / 3.0) r = 0.5 * d * (T / 2.0 - tt);
      else if (tt < 5.0 * T / 6.0) r = -d;
      else r = 0.5 * d * (tt - T);
      break;
    }
    case DisturbanceKind::PiecewiseNormalized: {
      // Same shape with t measured in units of T/6, clipped to the amplitude.
      const double tau = 6.0 * wrap(t, T) / T;
      if (tau < 1.0) r = 0.5 * d * tau;
      else if (tau < 2.0) r = d * tau;
      else if (tau < 4.0) r = 0.5 * d * (3.0 - tau);
      else if (tau < 5.0) r = -d;
      else r = 0.5 * d * (tau - 6.0);
      r = std::clamp(r, -std::abs(d), std::abs(d));
      break;
    }
    case DisturbanceKind::Expression:
      r = spec.expr.eval({{}, {}, t, 0.0});
      break;
  }
  return spec.scale * r;
}

double Sample::w_h_norm_max() const {
  return w_norms.size() > 2 ? w_norms.tail(w_norms.size() - 2).maxCoeff() : 0.0;
}

Simulator::Simulator(Scenario scenario) : s_(std::move(scenario)) {
  const int m = s_.estimator.basis.count;
  q_ = select_q(initial_h(s_), m, s_.estimator.w_bar, Eigen::VectorXd::Zero(m));
}

SimState Simulator::initial_state() const {
  return {0.0, s_.x0, s_.u0,
          EstimatorState::zeros(s_.estimator.basis.count, s_.model.dim_x, s_.model.dim_u)};
}

ControlStep Simulator::control(const SimState& state) const {
  return evaluate_controller(s_, q_, state.t, state.x, state.u, state.est);
}

Simulator::Deriv Simulator::deriv(const SimState& st, const Eigen::VectorXd* held_v,
                                  const ControlStep* known) const {
  ControlStep local;
  const ControlStep* c = known;
  if (!c) {
    local = control(st);
    c = &local;
  }
  const double d = disturbance(s_.disturbance, st.t);
  Deriv out;
  out.x = s_.model.eval_f(st.x, st.t) + s_.model.eval_g(st.x, st.t) * st.u;
  if (s_.disturbance.on_x) out.x.array() += d;
  out.u = held_v ? *held_v : c->out.v;
  if (s_.disturbance.on_u) out.u.array() += d;
  out.est = c->rates;
  check_finite(out.x, "dx/dt", st.t);
  check_finite(out.u, "du/dt", st.t);
  check_finite(out.est.w_x, "dw_x/dt", st.t);
  check_finite(out.est.w_u, "dw_u/dt", st.t);
  check_finite(out.est.w_h, "dw_h/dt", st.t);
  return out;
}

SimState Simulator::step(const SimState& st, double dt, const ControlStep* first) const {
  ControlStep c0;
  if (!first) {
    c0 = control(st);
    first = &c0;
  }
  const Eigen::VectorXd* held = s_.run.zoh ? &first->out.v : nullptr;

  auto stage = [&](const SimState& base, double h, const Deriv& k) {
    return SimState{st.t + h, base.x + h * k.x, base.u + h * k.u, axpy(base.est, h, k.est)};
  };
  const Deriv k1 = deriv(st, held, first);
  const Deriv k2 = deriv(stage(st, 0.5 * dt, k1), held, nullptr);
  const Deriv k3 = deriv(stage(st, 0.5 * dt, k2), held, nullptr);
  const Deriv k4 = deriv(stage(st, dt, k3), held, nullptr);

  const double w = dt / 6.0;
  SimState next;
  next.t = st.t + dt;
  next.x = st.x + w * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
  next.u = st.u + w * (k1.u + 2.0 * k2.u + 2.0 * k3.u + k4.u);
  next.est.w_x = st.est.w_x + w * (k1.est.w_x + 2.0 * k2.est.w_x + 2.0 * k3.est.w_x + k4.est.w_x);
  next.est.w_u = st.est.w_u + w * (k1.est.w_u + 2.0 * k2.est.w_u + 2.0 * k3.est.w_u + k4.est.w_u);
  next.est.w_h = st.est.w_h + w * (k1.est.w_h + 2.0 * k2.est.w_h + 2.0 * k3.est.w_h + k4.est.w_h);
  // The continuous projection keeps w_h inside the inflated ball; a finite
  // step can overshoot it slightly.
  clamp_rows_to_ball(next.est.w_h, s_.estimator.w_bar + s_.estimator.nu);

  check_finite(next.x, "x", next.t);
  check_finite(next.u, "u", next.t);
  check_finite(next.est.w_x, "w_x", next.t);
  check_finite(next.est.w_u, "w_u", next.t);
  check_finite(next.est.w_h, "w_h", next.t);
  return next;
}

Sample make_sample(const SimState& st, const ControlStep& c) {
  Sample s;
  s.t = st.t;
  s.x = st.x;
  s.u = st.u;
  s.v = c.out.v;
  s.mu = c.out.qp.mu;
  s.phi = c.ctx.phi;
  s.h = c.ctx.barrier.h;
  s.kappa = c.ctx.barrier.kappa;
  s.s_x = c.ctx.surfaces.s_x;
  s.s_u = c.ctx.surfaces.s_u;
  const auto m = st.est.w_h.rows();
  s.w_norms.resize(2 + m);
  s.w_norms(0) = st.est.w_x.norm();
  s.w_norms(1) = st.est.w_u.norm();
  for (Eigen::Index j = 0; j < m; ++j) s.w_norms(2 + j) = st.est.w_h.row(j).norm();
  s.qp_status = c.out.qp.status;
  s.clf_slack = c.out.qp.clf_slack;
  s.cbf_margin = -c.ctx.cbf.b;
  return s;
}

RunResult run(const Scenario& scenario) {
  const auto start = std::chrono::steady_clock::now();
  RunResult result;
  const Simulator sim(scenario);
  const double dt = scenario.run.dt;
  const auto n = static_cast<long long>(std::llround(scenario.run.horizon / dt));
  const int every = scenario.effective_log_every();
  const double h0 = initial_h(scenario);
  const double violation_tol = 1e-6 * std::max(1.0, h0);

  auto& stats = result.stats;
  stats.min_h = h0;
  SimState state = sim.initial_state();
  double prev_kappa = 0.0;
  try {
    for (long long i = 0; i <= n; ++i) {
      state.t = static_cast<double>(i) * dt;
      const ControlStep c = sim.control(state);
      const auto& b = c.ctx.barrier;
      ++stats.n_steps;
      stats.min_h = std::min(stats.min_h, b.h);
      if (!stats.first_violation && b.h < -violation_tol) stats.first_violation = state.t;
      if (c.out.qp.status == QPStatus::SlackActive) ++stats.n_slack;
      if (c.out.qp.status == QPStatus::Infeasible) ++stats.n_infeasible;
      if (i > 0) {
        const double rate = std::abs(b.kappa - prev_kappa) / dt;
        stats.max_kappa_rate = std::max(stats.max_kappa_rate, rate);
        if (rate > scenario.barrier.pi_kappa) ++stats.n_kappa_rate_warnings;
      }
      prev_kappa = b.kappa;
      if (i % every == 0 || i == n) result.trace.push_back(make_sample(state, c));
      if (i == n) break;
      state = sim.step(state, dt, &c);
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NumericalBlowup) throw;
    result.blowup = e.what();
  }
  stats.final_x_norm = state.x.norm();
  result.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

std::vector<RunResult> run_many(std::span<const Scenario> scenarios) {
  std::vector<RunResult> out(scenarios.size());
  std::vector<std::exception_ptr> errors(scenarios.size());
  const auto n = static_cast<std::ptrdiff_t>(scenarios.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      out[k] = run(scenarios[k]);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

std::vector<RunResult> run_many_serial(std::span<const Scenario> scenarios) {
  std::vector<RunResult> out;
  out.reserve(scenarios.size());
  for (const auto& s : scenarios) out.push_back(run(s));
  return out;
}

}  // namespace inputsafe
