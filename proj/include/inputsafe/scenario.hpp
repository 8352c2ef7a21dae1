#pragma once

#include <Eigen/Core>

#include <string>
#include <string_view>
#include <vector>

#include "inputsafe/basis.hpp"
#include "inputsafe/expression.hpp"

namespace inputsafe {

enum class PlantKind { Custom, SingleIntegrator, DoubleIntegrator };
enum class BarrierForm { NormBall, AffineUpper };
enum class Variant { Proposed, NominalClfCbf, ClfOnly };
enum class DisturbanceKind { Zero, PiecewisePaper, PiecewiseNormalized, Expression };

const char* to_string(Variant v);    // proposed | nominal | clf-only
Variant parse_variant(std::string_view name);  // throws ParseError

/// Model quantities at one (x, t). jac_g[k] holds dg/dx_k.
struct ModelEval {
  Eigen::VectorXd f;
  Eigen::MatrixXd g;
  Eigen::MatrixXd jac_f;
  std::vector<Eigen::MatrixXd> jac_g;
  Eigen::VectorXd df_dt;
  Eigen::MatrixXd dg_dt;
};

/// Plant xdot = f(x, t) + g(x, t) u + d_x.
struct SystemModel {
  PlantKind plant = PlantKind::Custom;
  int dim_x = 1;
  int dim_u = 1;
  std::vector<Expression> f;  // dim_x entries
  std::vector<Expression> g;  // dim_x * dim_u entries, row-major
  double sgn_eps = 0.0;

  Eigen::VectorXd eval_f(const Eigen::VectorXd& x, double t) const;
  Eigen::MatrixXd eval_g(const Eigen::VectorXd& x, double t) const;
  ModelEval evaluate(const Eigen::VectorXd& x, double t) const;
};

struct BarrierSpec {
  BarrierForm form = BarrierForm::NormBall;
  Expression kappa;
  double pi_kappa = 1.0;
  double sgn_eps = 0.0;

  double eval_kappa(const Eigen::VectorXd& x, double t) const;
};

struct DisturbanceSpec {
  DisturbanceKind kind = DisturbanceKind::Zero;
  double d_max = 1.0;
  double period = 1.0;
  double scale = 1.0;
  Expression expr;  // kind == Expression; a function of t only
  bool on_x = true;
  bool on_u = true;
};

struct EstimatorConfig {
  BasisSpec basis;
  double w_bar = 1.0;
  double nu = 0.1;
  double lambda_x = 1.0;
  double lambda_u = 1.0;
};

struct Gains {
  double c_x = 0.21;
  double c_u = 0.21;
  double theta_x = 0.1;
  double theta_u = 0.1;
  double rho = 0.95;
};

/// Nominal control phi: the adaptive sliding-mode law, or a fixed
/// expression per input channel (functions of x, u and t).
struct NominalLaw {
  bool adaptive = true;
  std::vector<Expression> exprs;
};

struct RunOptions {
  double horizon = 1.0;
  double dt = 1e-3;
  int log_every = 0;  // 0: every step when horizon <= 10, else every 10 steps
  bool zoh = false;
  double slack_penalty = 1e3;
  double sgn_smoothing = 0.0;  // > 0 replaces sgn(z) by tanh(z / eps)
};

struct Scenario {
  std::string name;
  SystemModel model;
  BarrierSpec barrier;
  DisturbanceSpec disturbance;
  EstimatorConfig estimator;
  Gains gains;
  NominalLaw nominal;
  Variant variant = Variant::Proposed;
  Eigen::VectorXd x0;
  Eigen::VectorXd u0;
  RunOptions run;

  int effective_log_every() const;
};

std::vector<std::string> builtin_scenario_names();
// Throws Error{NotFound}.
Scenario builtin_scenario(std::string_view name);
// Embedded config text of a builtin; throws Error{NotFound}.
std::string builtin_scenario_text(std::string_view name);

// `base = <builtin>` seeds defaults; the document's keys override them.
// Throws ParseError (with line number) or InvalidScenario.
Scenario load_scenario(std::string_view text);

// Re-validates invariants; throws InvalidScenario naming the first failure.
void validate(const Scenario& s);

std::string to_config_text(const Scenario& s);

}  // namespace inputsafe
