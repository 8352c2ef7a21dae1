#include "inputsafe/adapt.hpp"

#include <limits>

#include "inputsafe/config.hpp"
#include "inputsafe/error.hpp"

namespace inputsafe {

EstimatorState EstimatorState::zeros(int n_basis, int dim_x, int dim_u) {
  return {Eigen::MatrixXd::Zero(n_basis, dim_x), Eigen::MatrixXd::Zero(n_basis, dim_x),
          Eigen::MatrixXd::Zero(n_basis, dim_u)};
}

Eigen::VectorXd proj(const Eigen::VectorXd& w_hat, const Eigen::VectorXd& y, double w_bar,
                     double nu) {
  const double den = 2.0 * nu * w_bar + nu * nu;
  const double l = (w_hat.squaredNorm() - w_bar * w_bar) / den;
  if (l <= 0.0) return y;
  const Eigen::VectorXd grad = 2.0 * w_hat / den;
  const double gy = grad.dot(y);
  if (gy <= 0.0) return y;
  return y - l * grad * (gy / grad.squaredNorm());
}

Eigen::MatrixXd update_w_x(const Eigen::VectorXd& psi, const Eigen::VectorXd& x, double lambda_x) {
  return psi * x.transpose() / lambda_x;
}

Eigen::MatrixXd update_w_u(const Eigen::VectorXd& psi, const Eigen::VectorXd& s_u,
                           double lambda_u) {
  return psi * s_u.transpose() / lambda_u;
}

Eigen::MatrixXd update_w_h(const Eigen::MatrixXd& w_h, const Eigen::VectorXd& dh_du,
                           const Eigen::VectorXd& psi_h, const Eigen::VectorXd& q, double rho,
                           double w_bar, double nu) {
  Eigen::MatrixXd rate(w_h.rows(), w_h.cols());
  for (Eigen::Index j = 0; j < w_h.rows(); ++j) {
    const Eigen::VectorXd w = w_h.row(j).transpose();
    const Eigen::VectorXd raw = -(psi_h(j) / (2.0 * q(j))) * dh_du - 0.5 * rho * w;
    rate.row(j) = proj(w, raw, w_bar, nu).transpose();
  }
  return rate;
}

Eigen::VectorXd select_q(double h0, int m, double w_bar, const Eigen::VectorXd& w_h0_norms) {
  if (!(h0 > 0.0)) {
    throw Error(ErrorCode::InitialUnsafe,
                "h(0) = " + format_double(h0) + " <= 0: start is outside the safe input set");
  }
  Eigen::VectorXd q(m);
  for (int j = 0; j < m; ++j) {
    const double r = w_h0_norms(j) + w_bar;
    q(j) = h0 / (2.0 * m * r * r);
  }
  return q;
}

void clamp_rows_to_ball(Eigen::MatrixXd& w, double radius) {
  for (Eigen::Index j = 0; j < w.rows(); ++j) {
    const double n = w.row(j).norm();
    if (n > radius) {
      w.row(j) *= radius / n;
      // radius / n can round up by an ulp
      while (w.row(j).norm() > radius) w.row(j) *= 1.0 - std::numeric_limits<double>::epsilon();
    }
  }
}

}  // namespace inputsafe
