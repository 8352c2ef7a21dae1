#include "inputsafe/barrier.hpp"

#include <cmath>
#include <span>

#include "inputsafe/config.hpp"
#include "inputsafe/error.hpp"

namespace inputsafe {

BarrierEval eval_barrier(const BarrierSpec& spec, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& u, double t) {
  const ExprVars vars{{x.data(), static_cast<std::size_t>(x.size())}, {}, t, spec.sgn_eps};
  const ExprGrad k = spec.kappa.eval_grad(vars);
  if (!std::isfinite(k.value)) {
    throw Error(ErrorCode::EvalError, "kappa = " + format_double(k.value) + " at t = " +
                                          format_double(t) + " ('" + spec.kappa.source() + "')");
  }
  BarrierEval b;
  b.kappa = k.value;
  b.dkappa_dt = k.d_dt;
  if (spec.form == BarrierForm::NormBall) {
    b.h = k.value * k.value - u.squaredNorm();
    b.dh_du = -2.0 * u;
    b.dh_dkappa = 2.0 * k.value;
  } else {
    b.h = k.value - u(0);
    b.dh_du = Eigen::VectorXd::Constant(1, -1.0);
    b.dh_dkappa = 1.0;
  }
  b.dh_dx = b.dh_dkappa * k.d_dx;
  b.zeta = std::abs(b.dh_dkappa) * spec.pi_kappa;
  return b;
}

double blf_log(double u, double k_l, double k_h) {
  if (std::abs(k_l) < 1e-12 || std::abs(k_h) < 1e-12) {
    throw Error(ErrorCode::DegenerateBound, "bound k_l = " + format_double(k_l) +
                                                ", k_h = " + format_double(k_h) + " vanishes");
  }
  if (!(k_l < k_h)) throw Error(ErrorCode::DomainError, "k_l < k_h required");
  const double arg = (k_h / k_l) * (k_l - u) / (k_h - u);
  if (!(arg > 0.0)) {
    throw Error(ErrorCode::DomainError, "log argument " + format_double(arg) + " <= 0");
  }
  return std::log(arg);
}

}  // namespace inputsafe
