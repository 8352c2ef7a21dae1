#include "inputsafe/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <span>
#include <sstream>

#include "inputsafe/config.hpp"
#include "inputsafe/error.hpp"

namespace inputsafe {

namespace {

constexpr std::string_view kCase1 = R"(name = case1

[model]
plant = single_integrator
x0 = 3
u0 = 0

[barrier]
form = affine_upper
kappa = (x1 - 1)^2 - 0.8
pi_kappa = 15

[disturbance]
kind = zero

[estimator]
basis_count = 1
basis_period = 10
w_bar = 1
nu = 0.1
lambda_x = 1
lambda_u = 1

[gains]
c_x = 0.21
c_u = 0.21
theta_x = 0.1
theta_u = 0.1
rho = 0.95
nominal = -x1 - x1^2*sgn(u1) - u1

[run]
horizon = 10
dt = 0.001
)";

constexpr std::string_view kCase2 = R"(name = case2

[model]
plant = single_integrator
x0 = 5
u0 = 0

[barrier]
form = norm_ball
kappa = sqrt(-0.1*sin(x1) - 1/(t + 10) + 0.25)
pi_kappa = 15

[disturbance]
kind = piecewise
d_max = 1
period = 120

[estimator]
basis_count = 5
basis_period = 120
w_bar = 20
nu = 0.1
lambda_x = 1
lambda_u = 1

[gains]
c_x = 0.21
c_u = 0.21
theta_x = 0.1
theta_u = 0.1
rho = 0.95
nominal = adaptive

[run]
horizon = 120
dt = 0.001
)";

// Time-varying bound k(t) = sin t + 1 that touches zero at t = 3pi/2.
constexpr std::string_view kExample1 = R"(name = example1_blf

[model]
plant = double_integrator
x0 = 1, 0
u0 = 0

[barrier]
form = norm_ball
kappa = sin(t) + 1
pi_kappa = 1

[disturbance]
kind = zero

[estimator]
basis_count = 1
w_bar = 1
nu = 0.1
lambda_x = 1
lambda_u = 1

[gains]
c_x = 0.21
c_u = 0.21
theta_x = 0.1
theta_u = 0.1
rho = 0.95
nominal = adaptive

[run]
horizon = 6
dt = 0.001
)";

// Defaults when no `base` is given.
constexpr std::string_view kGeneric = R"(
[barrier]
form = norm_ball

[disturbance]
kind = zero

[estimator]
basis_count = 1
w_bar = 1
nu = 0.1
lambda_x = 1
lambda_u = 1

[gains]
c_x = 0.21
c_u = 0.21
theta_x = 0.1
theta_u = 0.1
rho = 0.95
nominal = adaptive

[run]
dt = 0.001
)";

const std::map<std::string, std::set<std::string>, std::less<>>& known_keys() {
  static const std::map<std::string, std::set<std::string>, std::less<>> keys = {
      {"", {"base", "name"}},
      {"model", {"plant", "dim_x", "dim_u", "f", "g", "x0", "u0"}},
      {"barrier", {"form", "kappa", "pi_kappa"}},
      {"disturbance", {"kind", "d_max", "period", "scale", "expr", "on_x", "on_u"}},
      {"estimator", {"basis_count", "basis_period", "w_bar", "nu", "lambda_x", "lambda_u"}},
      {"gains", {"c_x", "c_u", "theta_x", "theta_u", "rho", "nominal"}},
      {"run", {"variant", "horizon", "dt", "log_every", "zoh", "slack_penalty", "sgn_smoothing"}},
  };
  return keys;
}

[[noreturn]] void parse_fail(const ConfigEntry& e, const std::string& what) {
  const std::string where = e.line > 0 ? "line " + std::to_string(e.line) + ": " : "";
  throw Error(ErrorCode::ParseError, where + e.key + ": " + what);
}

[[noreturn]] void invalid(const std::string& what) {
  throw Error(ErrorCode::InvalidScenario, what);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto p = s.find(sep, start);
    out.push_back(trim(s.substr(start, p == std::string_view::npos ? s.npos : p - start)));
    if (p == std::string_view::npos) return out;
    start = p + 1;
  }
}

// Numbers accept constant arithmetic such as `2*pi`.
double parse_number(const ConfigEntry& e, std::string_view text) {
  Expression expr;
  try {
    expr = Expression::parse(text, 1, 1);
  } catch (const Error& err) {
    parse_fail(e, err.message());
  }
  if (expr.uses_state() || expr.uses_input() || expr.uses_time()) {
    parse_fail(e, "expected a constant, got '" + std::string(text) + "'");
  }
  const double v = expr.eval({});
  if (!std::isfinite(v)) parse_fail(e, "non-finite value '" + std::string(text) + "'");
  return v;
}

class Reader {
 public:
  explicit Reader(const ConfigDocument& doc) : doc_(doc) {}

  const ConfigEntry* get(std::string_view section, std::string_view key) const {
    return doc_.find(section, key);
  }

  const ConfigEntry& require(std::string_view section, std::string_view key) const {
    const auto* e = doc_.find(section, key);
    if (!e) {
      throw Error(ErrorCode::ParseError,
                  "missing key '" + std::string(key) + "' in [" + std::string(section) + "]");
    }
    return *e;
  }

  double number(std::string_view section, std::string_view key) const {
    const auto& e = require(section, key);
    return parse_number(e, e.value);
  }

  double number_or(std::string_view section, std::string_view key, double fallback) const {
    const auto* e = get(section, key);
    return e ? parse_number(*e, e->value) : fallback;
  }

  int integer_or(std::string_view section, std::string_view key, int fallback) const {
    const auto* e = get(section, key);
    if (!e) return fallback;
    const double v = parse_number(*e, e->value);
    if (v != std::floor(v) || std::abs(v) > 1e9) parse_fail(*e, "expected an integer");
    return static_cast<int>(v);
  }

  bool flag_or(std::string_view section, std::string_view key, bool fallback) const {
    const auto* e = get(section, key);
    if (!e) return fallback;
    if (e->value == "true" || e->value == "yes" || e->value == "1") return true;
    if (e->value == "false" || e->value == "no" || e->value == "0") return false;
    parse_fail(*e, "expected true or false");
  }

  Eigen::VectorXd vector(std::string_view section, std::string_view key) const {
    const auto& e = require(section, key);
    const auto parts = split(e.value, ',');
    Eigen::VectorXd v(static_cast<Eigen::Index>(parts.size()));
    for (std::size_t i = 0; i < parts.size(); ++i) {
      v(static_cast<Eigen::Index>(i)) = parse_number(e, parts[i]);
    }
    return v;
  }

  std::vector<Expression> expressions(const ConfigEntry& e, int dim_x, int dim_u) const {
    try {
      return parse_expression_list(e.value, dim_x, dim_u);
    } catch (const Error& err) {
      if (err.code() != ErrorCode::ParseError) throw;
      parse_fail(e, err.message());
    }
  }

 private:
  const ConfigDocument& doc_;
};

void check_known_keys(const ConfigDocument& doc) {
  const auto& keys = known_keys();
  for (const auto& e : doc.entries) {
    const auto it = keys.find(e.section);
    if (it == keys.end() || !it->second.contains(e.key)) {
      const std::string where = e.line > 0 ? "line " + std::to_string(e.line) + ": " : "";
      const std::string sec = e.section.empty() ? "top level" : "[" + e.section + "]";
      throw Error(ErrorCode::ParseError, where + "unknown key '" + e.key + "' in " + sec);
    }
  }
}

std::string_view builtin_text(std::string_view name) {
  if (name == "case1") return kCase1;
  if (name == "case2") return kCase2;
  if (name == "example1_blf") return kExample1;
  throw Error(ErrorCode::NotFound, "unknown scenario '" + std::string(name) + "'");
}

ConfigDocument merge(const ConfigDocument& user) {
  ConfigDocument merged;
  if (const auto* base = user.find("", "base")) {
    try {
      merged = parse_config(builtin_text(base->value));
    } catch (const Error& err) {
      if (err.code() != ErrorCode::NotFound) throw;
      parse_fail(*base, "unknown base scenario '" + base->value + "'");
    }
    for (auto& e : merged.entries) e.line = 0;
  } else {
    merged = parse_config(kGeneric);
    for (auto& e : merged.entries) e.line = 0;
  }

  const bool replaces_plant =
      user.find("model", "plant") || user.find("model", "dim_x") || user.find("model", "dim_u");
  if (replaces_plant) {
    for (const char* k : {"plant", "dim_x", "dim_u", "f", "g"}) merged.erase("model", k);
  }
  for (const auto& e : user.entries) {
    if (e.section.empty() && e.key == "base") continue;
    merged.erase(e.section, e.key);
    merged.entries.push_back(e);
  }
  return merged;
}

SystemModel read_model(const Reader& r) {
  SystemModel m;
  std::string plant = "custom";
  if (const auto* e = r.get("model", "plant")) plant = e->value;
  const bool explicit_fg = r.get("model", "f") || r.get("model", "g");

  if (plant == "single_integrator" || plant == "double_integrator") {
    if (explicit_fg) {
      const auto* e = r.get("model", "f") ? r.get("model", "f") : r.get("model", "g");
      parse_fail(*e, "f and g may only be given with plant = custom");
    }
    if (plant == "single_integrator") {
      m.plant = PlantKind::SingleIntegrator;
      m.dim_x = 1;
      m.dim_u = 1;
      m.f = {Expression::parse("0", 1, 1)};
      m.g = {Expression::parse("1", 1, 1)};
    } else {
      m.plant = PlantKind::DoubleIntegrator;
      m.dim_x = 2;
      m.dim_u = 1;
      m.f = {Expression::parse("x2", 2, 1), Expression::parse("0", 2, 1)};
      m.g = {Expression::parse("0", 2, 1), Expression::parse("1", 2, 1)};
    }
    return m;
  }
  if (plant != "custom") {
    parse_fail(r.require("model", "plant"),
               "expected custom, single_integrator or double_integrator");
  }

  m.plant = PlantKind::Custom;
  m.dim_x = r.integer_or("model", "dim_x", 1);
  m.dim_u = r.integer_or("model", "dim_u", 1);
  if (m.dim_x < 1 || m.dim_x > kMaxStateDim) {
    parse_fail(r.require("model", "dim_x"), "must be in 1.." + std::to_string(kMaxStateDim));
  }
  if (m.dim_u < 1 || m.dim_u > kMaxInputDim) {
    parse_fail(r.require("model", "dim_u"), "must be in 1.." + std::to_string(kMaxInputDim));
  }

  const auto& fe = r.require("model", "f");
  m.f = r.expressions(fe, m.dim_x, m.dim_u);
  if (static_cast<int>(m.f.size()) != m.dim_x) {
    parse_fail(fe, "expected " + std::to_string(m.dim_x) + " entries");
  }

  const auto& ge = r.require("model", "g");
  const auto rows = split(ge.value, ';');
  if (static_cast<int>(rows.size()) != m.dim_x) {
    parse_fail(ge, "expected " + std::to_string(m.dim_x) + " rows separated by ';'");
  }
  for (const auto row : rows) {
    ConfigEntry row_entry = ge;
    row_entry.value = std::string(row);
    auto items = r.expressions(row_entry, m.dim_x, m.dim_u);
    if (static_cast<int>(items.size()) != m.dim_u) {
      parse_fail(ge, "expected " + std::to_string(m.dim_u) + " columns per row");
    }
    for (auto& item : items) m.g.push_back(std::move(item));
  }
  return m;
}

Scenario build(const ConfigDocument& doc) {
  check_known_keys(doc);
  const Reader r(doc);
  Scenario s;
  if (const auto* e = r.get("", "name")) s.name = e->value;
  else s.name = "custom";

  s.model = read_model(r);
  const int nx = s.model.dim_x;
  const int nu = s.model.dim_u;

  s.run.horizon = r.number("run", "horizon");
  s.run.dt = r.number("run", "dt");
  s.run.log_every = r.integer_or("run", "log_every", 0);
  s.run.zoh = r.flag_or("run", "zoh", false);
  s.run.slack_penalty = r.number_or("run", "slack_penalty", 1e3);
  s.run.sgn_smoothing = r.number_or("run", "sgn_smoothing", 0.0);
  if (const auto* e = r.get("run", "variant")) {
    try {
      s.variant = parse_variant(e->value);
    } catch (const Error& err) {
      parse_fail(*e, err.message());
    }
  }
  s.model.sgn_eps = s.run.sgn_smoothing;

  const auto& form = r.require("barrier", "form");
  if (form.value == "norm_ball") s.barrier.form = BarrierForm::NormBall;
  else if (form.value == "affine_upper") s.barrier.form = BarrierForm::AffineUpper;
  else parse_fail(form, "expected norm_ball or affine_upper");
  const auto& kappa = r.require("barrier", "kappa");
  {
    auto k = r.expressions(kappa, nx, nu);
    if (k.size() != 1) parse_fail(kappa, "expected a single expression");
    s.barrier.kappa = std::move(k.front());
  }
  s.barrier.pi_kappa = r.number("barrier", "pi_kappa");
  s.barrier.sgn_eps = s.run.sgn_smoothing;

  const auto& kind = r.require("disturbance", "kind");
  if (kind.value == "zero") s.disturbance.kind = DisturbanceKind::Zero;
  else if (kind.value == "piecewise") s.disturbance.kind = DisturbanceKind::PiecewisePaper;
  else if (kind.value == "piecewise_normalized") s.disturbance.kind = DisturbanceKind::PiecewiseNormalized;
  else if (kind.value == "expression") s.disturbance.kind = DisturbanceKind::Expression;
  else parse_fail(kind, "expected zero, piecewise, piecewise_normalized or expression");
  s.disturbance.d_max = r.number_or("disturbance", "d_max", 1.0);
  s.disturbance.period = r.number_or("disturbance", "period", s.run.horizon);
  s.disturbance.scale = r.number_or("disturbance", "scale", 1.0);
  s.disturbance.on_x = r.flag_or("disturbance", "on_x", true);
  s.disturbance.on_u = r.flag_or("disturbance", "on_u", true);
  if (s.disturbance.kind == DisturbanceKind::Expression) {
    const auto& e = r.require("disturbance", "expr");
    auto d = r.expressions(e, nx, nu);
    if (d.size() != 1) parse_fail(e, "expected a single expression");
    s.disturbance.expr = std::move(d.front());
  }

  s.estimator.basis.count = r.integer_or("estimator", "basis_count", 1);
  s.estimator.basis.period = r.number_or("estimator", "basis_period", s.run.horizon);
  s.estimator.w_bar = r.number("estimator", "w_bar");
  s.estimator.nu = r.number("estimator", "nu");
  s.estimator.lambda_x = r.number("estimator", "lambda_x");
  s.estimator.lambda_u = r.number("estimator", "lambda_u");

  s.gains.c_x = r.number("gains", "c_x");
  s.gains.c_u = r.number("gains", "c_u");
  s.gains.theta_x = r.number("gains", "theta_x");
  s.gains.theta_u = r.number("gains", "theta_u");
  s.gains.rho = r.number("gains", "rho");
  const auto& nominal = r.require("gains", "nominal");
  if (nominal.value == "adaptive") {
    s.nominal.adaptive = true;
  } else {
    s.nominal.adaptive = false;
    s.nominal.exprs = r.expressions(nominal, nx, nu);
    if (static_cast<int>(s.nominal.exprs.size()) != nu) {
      parse_fail(nominal, "expected " + std::to_string(nu) + " expressions");
    }
  }

  s.x0 = r.vector("model", "x0");
  if (r.get("model", "u0")) s.u0 = r.vector("model", "u0");
  else s.u0 = Eigen::VectorXd::Zero(nu);

  validate(s);
  return s;
}

std::string join_sources(const std::vector<Expression>& exprs, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < exprs.size(); ++i) {
    if (i) out += sep;
    out += exprs[i].source();
  }
  return out;
}

std::string join_vector(const Eigen::VectorXd& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_double(v(i));
  }
  return out;
}

std::span<const double> as_span(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

}  // namespace

const char* to_string(Variant v) {
  switch (v) {
    case Variant::Proposed: return "proposed";
    case Variant::NominalClfCbf: return "nominal";
    case Variant::ClfOnly: return "clf-only";
  }
  return "?";
}

Variant parse_variant(std::string_view name) {
  if (name == "proposed") return Variant::Proposed;
  if (name == "nominal") return Variant::NominalClfCbf;
  if (name == "clf-only" || name == "clf_only") return Variant::ClfOnly;
  throw Error(ErrorCode::ParseError,
              "unknown variant '" + std::string(name) + "' (expected proposed, nominal or clf-only)");
}

Eigen::VectorXd SystemModel::eval_f(const Eigen::VectorXd& x, double t) const {
  const ExprVars vars{as_span(x), {}, t, sgn_eps};
  Eigen::VectorXd out(dim_x);
  for (int i = 0; i < dim_x; ++i) out(i) = f[static_cast<std::size_t>(i)].eval(vars);
  return out;
}

Eigen::MatrixXd SystemModel::eval_g(const Eigen::VectorXd& x, double t) const {
  const ExprVars vars{as_span(x), {}, t, sgn_eps};
  Eigen::MatrixXd out(dim_x, dim_u);
  for (int i = 0; i < dim_x; ++i) {
    for (int j = 0; j < dim_u; ++j) {
      out(i, j) = g[static_cast<std::size_t>(i * dim_u + j)].eval(vars);
    }
  }
  return out;
}

ModelEval SystemModel::evaluate(const Eigen::VectorXd& x, double t) const {
  const ExprVars vars{as_span(x), {}, t, sgn_eps};
  ModelEval m;
  m.f.resize(dim_x);
  m.df_dt.resize(dim_x);
  m.jac_f.resize(dim_x, dim_x);
  for (int i = 0; i < dim_x; ++i) {
    const auto gr = f[static_cast<std::size_t>(i)].eval_grad(vars);
    m.f(i) = gr.value;
    m.df_dt(i) = gr.d_dt;
    m.jac_f.row(i) = gr.d_dx.transpose();
  }
  m.g.resize(dim_x, dim_u);
  m.dg_dt.resize(dim_x, dim_u);
  m.jac_g.assign(static_cast<std::size_t>(dim_x), Eigen::MatrixXd(dim_x, dim_u));
  for (int i = 0; i < dim_x; ++i) {
    for (int j = 0; j < dim_u; ++j) {
      const auto gr = g[static_cast<std::size_t>(i * dim_u + j)].eval_grad(vars);
      m.g(i, j) = gr.value;
      m.dg_dt(i, j) = gr.d_dt;
      for (int k = 0; k < dim_x; ++k) m.jac_g[static_cast<std::size_t>(k)](i, j) = gr.d_dx(k);
    }
  }
  return m;
}

double BarrierSpec::eval_kappa(const Eigen::VectorXd& x, double t) const {
  return kappa.eval({as_span(x), {}, t, sgn_eps});
}

int Scenario::effective_log_every() const {
  if (run.log_every > 0) return run.log_every;
  return run.horizon <= 10.0 ? 1 : 10;
}

std::vector<std::string> builtin_scenario_names() { return {"case1", "case2", "example1_blf"}; }

std::string builtin_scenario_text(std::string_view name) { return std::string(builtin_text(name)); }

Scenario builtin_scenario(std::string_view name) {
  builtin_text(name);  // NotFound for unknown names
  return load_scenario("base = " + std::string(name));
}

Scenario load_scenario(std::string_view text) {
  return build(merge(parse_config(text)));
}

void validate(const Scenario& s) {
  const auto& m = s.model;
  if (m.dim_u > m.dim_x) invalid("dim_u <= dim_x required (g must have full column rank)");
  if (static_cast<int>(m.f.size()) != m.dim_x) invalid("f must have dim_x entries");
  if (static_cast<int>(m.g.size()) != m.dim_x * m.dim_u) invalid("g must be dim_x x dim_u");
  for (const auto& e : m.f) {
    if (e.uses_input()) invalid("f must not depend on u: '" + e.source() + "'");
  }
  for (const auto& e : m.g) {
    if (e.uses_input()) invalid("g must not depend on u: '" + e.source() + "'");
  }
  if (s.barrier.kappa.uses_input()) invalid("kappa must not depend on u");
  if (s.barrier.form == BarrierForm::AffineUpper && m.dim_u != 1) {
    invalid("affine_upper barrier requires dim_u = 1");
  }
  if (!(s.barrier.pi_kappa > 0)) invalid("pi_kappa > 0 required");
  if (s.disturbance.kind == DisturbanceKind::Expression &&
      (s.disturbance.expr.uses_state() || s.disturbance.expr.uses_input())) {
    invalid("disturbance expression may depend on t only");
  }
  if (!(s.disturbance.period > 0)) invalid("disturbance period > 0 required");
  if (s.estimator.basis.count < 1) invalid("basis_count >= 1 required");
  if (!(s.estimator.basis.period > 0)) invalid("basis_period > 0 required");
  if (!(s.estimator.w_bar > 0)) invalid("w_bar > 0 required");
  if (!(s.estimator.nu > 0)) invalid("nu > 0 required");
  if (!(s.estimator.lambda_x > 0) || !(s.estimator.lambda_u > 0)) invalid("lambda_x, lambda_u > 0 required");
  const auto& g = s.gains;
  if (!(g.c_x > 0) || !(g.c_u > 0) || !(g.theta_x > 0) || !(g.theta_u > 0) || !(g.rho > 0)) {
    invalid("gains c_x, c_u, theta_x, theta_u, rho must be positive");
  }
  if (!s.nominal.adaptive && static_cast<int>(s.nominal.exprs.size()) != m.dim_u) {
    invalid("nominal law must have dim_u expressions");
  }
  if (!(s.run.horizon > 0)) invalid("horizon > 0 required");
  if (!(s.run.dt > 0)) invalid("dt > 0 required");
  if (s.run.dt > s.run.horizon) invalid("dt <= horizon required");
  if (s.run.log_every < 0) invalid("log_every >= 0 required");
  if (!(s.run.slack_penalty > 0)) invalid("slack_penalty > 0 required");
  if (s.run.sgn_smoothing < 0) invalid("sgn_smoothing >= 0 required");
  if (s.x0.size() != m.dim_x) invalid("x0 must have dim_x = " + std::to_string(m.dim_x) + " entries");
  if (s.u0.size() != m.dim_u) invalid("u0 must have dim_u = " + std::to_string(m.dim_u) + " entries");
  if (!s.x0.allFinite() || !s.u0.allFinite()) invalid("x0 and u0 must be finite");

  const double k0 = s.barrier.eval_kappa(s.x0, 0.0);
  if (!std::isfinite(k0)) invalid("kappa(x0, 0) must be finite");
  const double h0 = s.barrier.form == BarrierForm::NormBall ? k0 * k0 - s.u0.squaredNorm()
                                                            : k0 - s.u0(0);
  if (h0 < 0) {
    invalid("initial input safety h(x0, u0, 0) >= 0 violated (h = " + format_double(h0) + ")");
  }
}

std::string to_config_text(const Scenario& s) {
  std::ostringstream o;
  o << "name = " << s.name << "\n\n[model]\nplant = custom\n";
  o << "dim_x = " << s.model.dim_x << "\ndim_u = " << s.model.dim_u << "\n";
  o << "f = " << join_sources(s.model.f, ", ") << "\n";
  o << "g = ";
  for (int i = 0; i < s.model.dim_x; ++i) {
    if (i) o << "; ";
    for (int j = 0; j < s.model.dim_u; ++j) {
      if (j) o << ", ";
      o << s.model.g[static_cast<std::size_t>(i * s.model.dim_u + j)].source();
    }
  }
  o << "\nx0 = " << join_vector(s.x0) << "\nu0 = " << join_vector(s.u0) << "\n";

  o << "\n[barrier]\nform = "
    << (s.barrier.form == BarrierForm::NormBall ? "norm_ball" : "affine_upper") << "\n";
  o << "kappa = " << s.barrier.kappa.source() << "\n";
  o << "pi_kappa = " << format_double(s.barrier.pi_kappa) << "\n";

  const auto& d = s.disturbance;
  static constexpr const char* kKinds[] = {"zero", "piecewise", "piecewise_normalized", "expression"};
  o << "\n[disturbance]\nkind = " << kKinds[static_cast<int>(d.kind)] << "\n";
  o << "d_max = " << format_double(d.d_max) << "\nperiod = " << format_double(d.period)
    << "\nscale = " << format_double(d.scale) << "\n";
  if (d.kind == DisturbanceKind::Expression) o << "expr = " << d.expr.source() << "\n";
  o << "on_x = " << (d.on_x ? "true" : "false") << "\non_u = " << (d.on_u ? "true" : "false") << "\n";

  const auto& e = s.estimator;
  o << "\n[estimator]\nbasis_count = " << e.basis.count
    << "\nbasis_period = " << format_double(e.basis.period)
    << "\nw_bar = " << format_double(e.w_bar) << "\nnu = " << format_double(e.nu)
    << "\nlambda_x = " << format_double(e.lambda_x)
    << "\nlambda_u = " << format_double(e.lambda_u) << "\n";

  const auto& g = s.gains;
  o << "\n[gains]\nc_x = " << format_double(g.c_x) << "\nc_u = " << format_double(g.c_u)
    << "\ntheta_x = " << format_double(g.theta_x) << "\ntheta_u = " << format_double(g.theta_u)
    << "\nrho = " << format_double(g.rho) << "\nnominal = "
    << (s.nominal.adaptive ? std::string("adaptive") : join_sources(s.nominal.exprs, ", ")) << "\n";

  const auto& r = s.run;
  o << "\n[run]\nvariant = " << to_string(s.variant) << "\nhorizon = " << format_double(r.horizon)
    << "\ndt = " << format_double(r.dt) << "\nlog_every = " << r.log_every
    << "\nzoh = " << (r.zoh ? "true" : "false")
    << "\nslack_penalty = " << format_double(r.slack_penalty)
    << "\nsgn_smoothing = " << format_double(r.sgn_smoothing) << "\n";
  return o.str();
}

}  // namespace inputsafe
