#include "inputsafe/controller.hpp"

#include <Eigen/SVD>

#include "inputsafe/config.hpp"
#include "inputsafe/error.hpp"

namespace inputsafe {

namespace {

Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& g) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(g, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  if (sv.size() == 0 || sv(sv.size() - 1) < 1e-10) {
    throw Error(ErrorCode::SingularInput,
                "g is rank deficient (sigma_min = " +
                    format_double(sv.size() ? sv(sv.size() - 1) : 0.0) + ")");
  }
  return svd.matrixV() * sv.cwiseInverse().asDiagonal() * svd.matrixU().transpose();
}

}  // namespace

SlidingSurfaces sliding_surfaces(const ModelEval& m, const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& u, const Eigen::MatrixXd& w_x,
                                 const Eigen::VectorXd& psi, const Gains& gains) {
  SlidingSurfaces s;
  s.s_x = x;
  s.u_d = -w_x.transpose() * psi - (gains.c_x / gains.theta_x) * x;
  s.s_u = m.f + m.g * u - s.u_d;
  return s;
}

SlidingSurfaces sliding_surfaces(const SystemModel& model, const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& u, double t, const Eigen::MatrixXd& w_x,
                                 const Eigen::VectorXd& psi, const Gains& gains) {
  ModelEval m;
  m.f = model.eval_f(x, t);
  m.g = model.eval_g(x, t);
  return sliding_surfaces(m, x, u, w_x, psi, gains);
}

Eigen::VectorXd nominal_phi(const ModelEval& m, const Eigen::VectorXd& x,
                            const Eigen::VectorXd& u, const EstimatorState& est,
                            const Eigen::MatrixXd& w_x_rate, const Eigen::VectorXd& psi,
                            const Eigen::VectorXd& psi_dot, const Gains& gains) {
  const Eigen::VectorXd wx_psi = est.w_x.transpose() * psi;
  const Eigen::VectorXd fgu = m.f + m.g * u;
  // Disturbance-free state derivative estimate.
  const Eigen::VectorXd xdot_hat = fgu + wx_psi;

  const Eigen::VectorXd f_dot = m.df_dt + m.jac_f * xdot_hat;
  Eigen::VectorXd g_dot_u = m.dg_dt * u;
  for (std::size_t k = 0; k < m.jac_g.size(); ++k) {
    g_dot_u += xdot_hat(static_cast<Eigen::Index>(k)) * (m.jac_g[k] * u);
  }

  const Eigen::VectorXd s_u = fgu + wx_psi + (gains.c_x / gains.theta_x) * x;
  const Eigen::VectorXd adapt_terms =
      est.w_u.transpose() * psi + w_x_rate.transpose() * psi + est.w_x.transpose() * psi_dot;

  const Eigen::VectorXd rhs = -f_dot - adapt_terms - (gains.c_u / gains.theta_u) * s_u -
                              g_dot_u - (gains.c_x / gains.theta_x) * fgu;
  return pseudo_inverse(m.g) * rhs;
}

QPRow clf_row(const Eigen::MatrixXd& g, const Eigen::VectorXd& s_u, const Gains& gains) {
  return {g.transpose() * s_u, (gains.c_u / gains.theta_u) * s_u.squaredNorm(), Sense::LE,
          RowKind::CLF};
}

QPRow cbf_row(const BarrierEval& barrier, const Eigen::VectorXd& phi, const Eigen::MatrixXd& w_h,
              const Eigen::VectorXd& psi_h, const Eigen::VectorXd& q, double rho, double w_bar) {
  const double q_term = q.sum() * w_bar * w_bar;
  const Eigen::VectorXd est = w_h.transpose() * psi_h;
  const double b = barrier.zeta - 0.5 * rho * (barrier.h - q_term) - barrier.dh_du.dot(phi + est);
  return {barrier.dh_du, b, Sense::GE, RowKind::CBF};
}

SafeInput safe_input(const ControllerContext& ctx, Variant variant, double slack_penalty) {
  SafeInput out;
  if (variant == Variant::ClfOnly) {
    out.v = ctx.phi;
    out.qp.mu = Eigen::VectorXd::Zero(ctx.phi.size());
    return out;
  }
  QPProblem p;
  p.dim = static_cast<int>(ctx.phi.size());
  p.rows = {ctx.clf, ctx.cbf};
  out.qp = solve_min_norm(p, slack_penalty);
  out.v = ctx.phi + out.qp.mu;  // mu = 0 when infeasible
  return out;
}

ControlStep evaluate_controller(const Scenario& s, const Eigen::VectorXd& q, double t,
                                const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                                const EstimatorState& est_in) {
  const bool use_estimates = s.variant != Variant::NominalClfCbf;
  const EstimatorState zero = EstimatorState::zeros(static_cast<int>(est_in.w_x.rows()),
                                                    s.model.dim_x, s.model.dim_u);
  const EstimatorState& est = use_estimates ? est_in : zero;

  const ModelEval m = s.model.evaluate(x, t);
  const Eigen::VectorXd psi = eval_basis(s.estimator.basis, t);
  const Eigen::VectorXd psi_dot = eval_basis_dot(s.estimator.basis, t);

  ControlStep step;
  auto& ctx = step.ctx;
  ctx.surfaces = sliding_surfaces(m, x, u, est.w_x, psi, s.gains);
  ctx.barrier = eval_barrier(s.barrier, x, u, t);

  const Eigen::MatrixXd w_x_rate = update_w_x(psi, x, s.estimator.lambda_x);
  if (s.nominal.adaptive) {
    ctx.phi = nominal_phi(m, x, u, est, w_x_rate, psi, psi_dot, s.gains);
  } else {
    const ExprVars vars{{x.data(), static_cast<std::size_t>(x.size())},
                        {u.data(), static_cast<std::size_t>(u.size())},
                        t,
                        s.run.sgn_smoothing};
    ctx.phi.resize(s.model.dim_u);
    for (int i = 0; i < s.model.dim_u; ++i) {
      ctx.phi(i) = s.nominal.exprs[static_cast<std::size_t>(i)].eval(vars);
    }
  }

  ctx.clf = clf_row(m.g, ctx.surfaces.s_u, s.gains);
  ctx.cbf = cbf_row(ctx.barrier, ctx.phi, est.w_h, psi, q, s.gains.rho, s.estimator.w_bar);
  step.out = safe_input(ctx, s.variant, s.run.slack_penalty);

  if (use_estimates) {
    step.rates.w_x = w_x_rate;
    step.rates.w_u = update_w_u(psi, ctx.surfaces.s_u, s.estimator.lambda_u);
    step.rates.w_h = update_w_h(est.w_h, ctx.barrier.dh_du, psi, q, s.gains.rho,
                                s.estimator.w_bar, s.estimator.nu);
  } else {
    step.rates = zero;
  }
  return step;
}

}  // namespace inputsafe
