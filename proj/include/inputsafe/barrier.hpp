#pragma once

#include <Eigen/Core>

#include "inputsafe/scenario.hpp"

namespace inputsafe {

struct BarrierEval {
  double h = 0.0;
  Eigen::VectorXd dh_du;
  Eigen::VectorXd dh_dx;
  double dh_dkappa = 0.0;
  double kappa = 0.0;
  double dkappa_dt = 0.0;
  double zeta = 0.0;  // |dh/dkappa| * pi_kappa
};

// NormBall: h = kappa^2 - |u|^2. AffineUpper: h = kappa - u.
// Throws Error{EvalError} if kappa is not finite.
BarrierEval eval_barrier(const BarrierSpec& spec, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& u, double t);

// log((k_h / k_l) * (k_l - u) / (k_h - u)). Demonstration only.
// Throws DegenerateBound when |k_l| or |k_h| < 1e-12, DomainError when
// k_l >= k_h or the log argument is not positive.
double blf_log(double u, double k_l, double k_h);

}  // namespace inputsafe
