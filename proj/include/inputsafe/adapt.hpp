#pragma once

#include <Eigen/Core>

namespace inputsafe {

/// Weight estimates; row i of each matrix multiplies basis term i.
/// w_u is N x dim_x because the surface s_u it tracks lives in state space.
struct EstimatorState {
  Eigen::MatrixXd w_x;  // N x dim_x
  Eigen::MatrixXd w_u;  // N x dim_x
  Eigen::MatrixXd w_h;  // M x dim_u

  static EstimatorState zeros(int n_basis, int dim_x, int dim_u);
};

// Projection of the rate y at estimate w_hat onto the inflated ball of
// radius w_bar + nu.
Eigen::VectorXd proj(const Eigen::VectorXd& w_hat, const Eigen::VectorXd& y, double w_bar,
                     double nu);

Eigen::MatrixXd update_w_x(const Eigen::VectorXd& psi, const Eigen::VectorXd& x, double lambda_x);
Eigen::MatrixXd update_w_u(const Eigen::VectorXd& psi, const Eigen::VectorXd& s_u,
                           double lambda_u);
Eigen::MatrixXd update_w_h(const Eigen::MatrixXd& w_h, const Eigen::VectorXd& dh_du,
                           const Eigen::VectorXd& psi_h, const Eigen::VectorXd& q, double rho,
                           double w_bar, double nu);

// Largest admissible adaptation gains Q_j = h0 / (2 M (|w_h,j(0)| + w_bar)^2).
// Throws Error{InitialUnsafe} when h0 <= 0.
Eigen::VectorXd select_q(double h0, int m, double w_bar, const Eigen::VectorXd& w_h0_norms);

// Pulls each row of w back onto the ball of radius `radius` if it left it.
void clamp_rows_to_ball(Eigen::MatrixXd& w, double radius);

}  // namespace inputsafe
