#pragma once

#include <Eigen/Core>

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "inputsafe/adapt.hpp"
#include "inputsafe/controller.hpp"
#include "inputsafe/qp.hpp"
#include "inputsafe/scenario.hpp"

namespace inputsafe {

// Scalar disturbance d(t), applied to every component of the enabled channels.
double disturbance(const DisturbanceSpec& spec, double t);

struct SimState {
  double t = 0.0;
  Eigen::VectorXd x;
  Eigen::VectorXd u;
  EstimatorState est;
};

struct Sample {
  double t = 0.0;
  Eigen::VectorXd x, u, v, mu, phi;
  double h = 0.0;
  double kappa = 0.0;
  Eigen::VectorXd s_x, s_u;
  // [|w_x|_F, |w_u|_F, |w_h,1|, ..., |w_h,M|]
  Eigen::VectorXd w_norms;
  QPStatus qp_status = QPStatus::Ok;
  double clf_slack = 0.0;
  double cbf_margin = 0.0;  // CBF row residual at mu = 0; >= 0 means already satisfied

  double w_h_norm_max() const;
};

using Trace = std::vector<Sample>;

struct RunStats {
  int n_steps = 0;  // controller evaluations on the time grid, including t = T
  double min_h = 0.0;
  std::optional<double> first_violation;  // first grid time with h < -1e-6 max(1, h0)
  int n_slack = 0;
  int n_infeasible = 0;
  int n_kappa_rate_warnings = 0;  // steps with |dkappa/dt| > pi_kappa
  double max_kappa_rate = 0.0;
  double final_x_norm = 0.0;
};

struct RunResult {
  Trace trace;
  RunStats stats;
  std::optional<std::string> blowup;  // set when the run aborted on non-finite values
  double wall_time = 0.0;
};

class Simulator {
 public:
  // Throws InitialUnsafe when h(x0, u0, 0) <= 0.
  explicit Simulator(Scenario scenario);

  const Scenario& scenario() const { return s_; }
  const Eigen::VectorXd& q() const { return q_; }
  SimState initial_state() const;

  ControlStep control(const SimState& state) const;

  // One RK4 step of (x, u, w_x, w_u, w_h). The control is re-evaluated at every
  // stage unless the scenario sets zoh. `first` may carry the control already
  // computed at `state`. Throws NumericalBlowup naming the offending component.
  SimState step(const SimState& state, double dt, const ControlStep* first = nullptr) const;

 private:
  struct Deriv {
    Eigen::VectorXd x, u;
    EstimatorState est;
  };
  Deriv deriv(const SimState& state, const Eigen::VectorXd* held_v,
              const ControlStep* known) const;

  Scenario s_;
  Eigen::VectorXd q_;
};

Sample make_sample(const SimState& state, const ControlStep& c);

// Never throws on blow-up: returns the partial trace with `blowup` set.
RunResult run(const Scenario& scenario);

std::vector<RunResult> run_many(std::span<const Scenario> scenarios);
std::vector<RunResult> run_many_serial(std::span<const Scenario> scenarios);

}  // namespace inputsafe
