#pragma once

#include <Eigen/Core>

#include "inputsafe/adapt.hpp"
#include "inputsafe/barrier.hpp"
#include "inputsafe/qp.hpp"
#include "inputsafe/scenario.hpp"

namespace inputsafe {

struct SlidingSurfaces {
  Eigen::VectorXd s_x;
  Eigen::VectorXd s_u;  // f + g u - u_d
  Eigen::VectorXd u_d;
};

// x_d = 0, so s_x = x and u_d = -w_x^T psi - (c_x / theta_x) x.
SlidingSurfaces sliding_surfaces(const ModelEval& m, const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& u, const Eigen::MatrixXd& w_x,
                                 const Eigen::VectorXd& psi, const Gains& gains);
SlidingSurfaces sliding_surfaces(const SystemModel& model, const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& u, double t, const Eigen::MatrixXd& w_x,
                                 const Eigen::VectorXd& psi, const Gains& gains);

// Adaptive nominal law. w_x_rate is the current update-law rate of w_x.
// Throws Error{SingularInput} when g loses column rank.
Eigen::VectorXd nominal_phi(const ModelEval& m, const Eigen::VectorXd& x,
                            const Eigen::VectorXd& u, const EstimatorState& est,
                            const Eigen::MatrixXd& w_x_rate, const Eigen::VectorXd& psi,
                            const Eigen::VectorXd& psi_dot, const Gains& gains);

// g^T s_u mu <= (c_u / theta_u) |s_u|^2, soft.
QPRow clf_row(const Eigen::MatrixXd& g, const Eigen::VectorXd& s_u, const Gains& gains);

// dh_du^T (phi + mu + w_h^T psi_h) - zeta + (rho/2)(h - sum_j Q_j w_bar^2) >= 0, hard.
QPRow cbf_row(const BarrierEval& barrier, const Eigen::VectorXd& phi, const Eigen::MatrixXd& w_h,
              const Eigen::VectorXd& psi_h, const Eigen::VectorXd& q, double rho, double w_bar);

struct ControllerContext {
  SlidingSurfaces surfaces;
  Eigen::VectorXd phi;
  QPRow clf;
  QPRow cbf;
  BarrierEval barrier;
};

struct SafeInput {
  Eigen::VectorXd v;
  QPSolution qp;
};

// Proposed / NominalClfCbf: v = phi + mu from the QP; an infeasible QP falls
// back to v = phi. ClfOnly: v = phi.
SafeInput safe_input(const ControllerContext& ctx, Variant variant, double slack_penalty);

struct ControlStep {
  ControllerContext ctx;
  SafeInput out;
  EstimatorState rates;
};

// Full controller evaluation at (t, x, u) with the current estimates.
// NominalClfCbf ignores the estimates and returns zero rates.
ControlStep evaluate_controller(const Scenario& s, const Eigen::VectorXd& q, double t,
                                const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                                const EstimatorState& est);

}  // namespace inputsafe
