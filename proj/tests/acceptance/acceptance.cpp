// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>

#include "inputsafe/adapt.hpp"
#include "inputsafe/barrier.hpp"
#include "inputsafe/basis.hpp"
#include "inputsafe/config.hpp"
#include "inputsafe/error.hpp"
#include "inputsafe/qp.hpp"
#include "inputsafe/scenario.hpp"
#include "inputsafe/sim.hpp"

using namespace inputsafe;

namespace {

int failures = 0;

void report(bool ok, const char* name, const std::string& detail) {
  std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", name, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(double v) { return format_double(v); }

std::string describe(const RunResult& r) {
  std::string s = "min_h=" + fmt(r.stats.min_h) + " final_x_norm=" + fmt(r.stats.final_x_norm) +
                  " n_slack=" + std::to_string(r.stats.n_slack) +
                  " n_infeasible=" + std::to_string(r.stats.n_infeasible) +
                  " wall=" + fmt(r.wall_time) + "s";
  if (r.stats.first_violation) s += " first_violation=" + fmt(*r.stats.first_violation);
  if (r.blowup) s += " blowup=\"" + *r.blowup + "\"";
  return s;
}

RunResult run_variant(const char* name, Variant v, int log_every = 0) {
  auto s = builtin_scenario(name);
  s.variant = v;
  s.run.log_every = log_every;
  return run(s);
}

void case1_safety() {
  const auto p = run_variant("case1", Variant::Proposed);
  const auto n = run_variant("case1", Variant::NominalClfCbf);
  const bool proposed_ok = !p.blowup && p.stats.min_h >= -1e-6;
  const bool nominal_ok = n.stats.min_h < 0.0 && n.stats.first_violation &&
                          *n.stats.first_violation >= 1.0 && *n.stats.first_violation <= 8.0;
  const bool fast = p.wall_time < 5.0 && n.wall_time < 5.0;
  report(proposed_ok && nominal_ok && fast, "case1_safety",
         "proposed{" + describe(p) + "} nominal{" + describe(n) + "}");
}

void case2_checks() {
  // Logged at every step so the per-sample checks below are exhaustive.
  const auto p = run_variant("case2", Variant::Proposed, 1);
  const auto n = run_variant("case2", Variant::NominalClfCbf);
  const bool proposed_ok = !p.blowup && p.stats.min_h >= -1e-6 && p.stats.final_x_norm <= 0.1;
  const bool nominal_ok = n.stats.min_h < 0.0;
  const bool fast = p.wall_time < 60.0 && n.wall_time < 60.0;
  report(proposed_ok && nominal_ok && fast, "case2_safety_convergence",
         "proposed{" + describe(p) + "} nominal{" + describe(n) + "}");

  // Projection operator: random properties plus the bound along the case-2 trace.
  std::mt19937_64 rng(101);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> radius(0.0, 1.5);
  int identity_bad = 0, contraction_bad = 0, modified = 0;
  for (int k = 0; k < 10000; ++k) {
    const int dim = 1 + k % 4;
    Eigen::VectorXd w(dim), y(dim);
    for (int i = 0; i < dim; ++i) {
      w(i) = g(rng);
      y(i) = g(rng);
    }
    const double w_bar = 0.5 + std::abs(g(rng));
    const double nu = 0.05 + 0.2 * std::abs(g(rng));
    w *= radius(rng) * (w_bar + nu) / std::max(w.norm(), 1e-12);
    const Eigen::VectorXd p_y = proj(w, y, w_bar, nu);
    const double l = (w.squaredNorm() - w_bar * w_bar) / (2 * nu * w_bar + nu * nu);
    if (l <= 0.0) {
      if (p_y != y) ++identity_bad;
    } else if (w.dot(y) > 0.0) {
      ++modified;
      if (w.dot(p_y - y) > 0.0) ++contraction_bad;
    }
  }
  const auto s2 = builtin_scenario("case2");
  const double bound = s2.estimator.w_bar + s2.estimator.nu;
  double w_max = 0.0;
  for (const auto& smp : p.trace) w_max = std::max(w_max, smp.w_h_norm_max());
  report(identity_bad == 0 && contraction_bad == 0 && w_max <= bound, "projection_properties",
         "identity_violations=" + std::to_string(identity_bad) +
             " contraction_violations=" + std::to_string(contraction_bad) + "/" +
             std::to_string(modified) + " max|w_h|=" + fmt(w_max) + " bound=" + fmt(bound) +
             " samples=" + std::to_string(p.trace.size()));

  // Minimum-norm filter: mu = 0 whenever the CBF row already holds at mu = 0.
  int inactive = 0, moved = 0;
  for (const auto& smp : p.trace) {
    if (smp.cbf_margin >= 0.0) {
      ++inactive;
      if (!smp.mu.isZero(0.0)) ++moved;
    }
  }
  report(moved == 0 && inactive > 0, "min_norm_inactivity",
         std::to_string(inactive) + " steps with CBF row satisfied at mu=0, " +
             std::to_string(moved) + " with mu != 0");
}

void qp_oracle() {
  std::mt19937_64 rng(20240607);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_int_distribution<int> dim_d(1, 3), rows_d(0, 4), coin(0, 3);
  int status_mismatch = 0, mu_mismatch = 0, infeasible = 0;
  double worst = 0.0;
  for (int k = 0; k < 10000; ++k) {
    QPProblem p;
    p.dim = dim_d(rng);
    const int rows = rows_d(rng);
    for (int r = 0; r < rows; ++r) {
      QPRow row;
      row.a.resize(p.dim);
      for (int i = 0; i < p.dim; ++i) row.a(i) = g(rng);
      row.b = g(rng);
      const int c = coin(rng);
      row.sense = (c & 1) ? Sense::GE : Sense::LE;
      row.kind = (c & 2) ? RowKind::CLF : RowKind::CBF;
      p.rows.push_back(row);
    }
    const auto a = solve_min_norm(p);
    const auto b = kkt_enumerate(p);
    if (a.status != b.status) {
      ++status_mismatch;
      continue;
    }
    if (a.status == QPStatus::Infeasible) {
      ++infeasible;
      continue;
    }
    const double d = (a.mu - b.mu).cwiseAbs().maxCoeff();
    worst = std::max(worst, d);
    if (d > 1e-8) ++mu_mismatch;
  }
  report(status_mismatch == 0 && mu_mismatch == 0, "qp_oracle_equivalence",
         "10000 problems, status_mismatch=" + std::to_string(status_mismatch) +
             " mu_mismatch=" + std::to_string(mu_mismatch) + " max|dmu|=" + fmt(worst) +
             " infeasible=" + std::to_string(infeasible));
}

void gain_bound() {
  std::string detail;
  bool ok = true;
  for (const char* name : {"case1", "case2"}) {
    const auto s = builtin_scenario(name);
    const double h0 = eval_barrier(s.barrier, s.x0, s.u0, 0.0).h;
    const int m = s.estimator.basis.count;
    const Eigen::VectorXd w0 = Eigen::VectorXd::Zero(m);
    const Eigen::VectorXd q = select_q(h0, m, s.estimator.w_bar, w0);
    double sum = 0.0;
    for (int j = 0; j < m; ++j) sum += q(j) * std::pow(s.estimator.w_bar + w0(j), 2);
    const double margin = h0 - sum;
    ok = ok && margin >= -1e-12;
    detail += std::string(name) + ": h0=" + fmt(h0) + " Q=" + fmt(q(0)) + " margin=" + fmt(margin) + " ";
  }
  report(ok, "gain_bound", detail);
}

void gradient_checks() {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> dx(-4.0, 4.0), du(-3.0, 3.0), dt(0.0, 120.0);
  const double step = 1e-5;
  auto rel = [](double analytic, double fd) {
    return std::abs(analytic - fd) / std::max({std::abs(analytic), std::abs(fd), 1e-8});
  };
  double worst_u = 0.0, worst_x = 0.0, worst_psi = 0.0;
  const auto c1 = builtin_scenario("case1");
  const auto c2 = builtin_scenario("case2");
  for (int k = 0; k < 1000; ++k) {
    const auto& s = (k % 2) ? c1 : c2;
    const double x = dx(rng), u = du(rng), t = dt(rng);
    auto h = [&](double xx, double uu) {
      return eval_barrier(s.barrier, Eigen::VectorXd::Constant(1, xx),
                          Eigen::VectorXd::Constant(1, uu), t).h;
    };
    const auto b = eval_barrier(s.barrier, Eigen::VectorXd::Constant(1, x),
                                Eigen::VectorXd::Constant(1, u), t);
    worst_u = std::max(worst_u, rel(b.dh_du(0), (h(x, u + step) - h(x, u - step)) / (2 * step)));
    worst_x = std::max(worst_x, rel(b.dh_dx(0), (h(x + step, u) - h(x - step, u)) / (2 * step)));
  }
  const BasisSpec basis = c2.estimator.basis;
  for (int k = 0; k < 1000; ++k) {
    const double t = dt(rng);
    const Eigen::VectorXd d = eval_basis_dot(basis, t);
    const Eigen::VectorXd fd = (eval_basis(basis, t + step) - eval_basis(basis, t - step)) / (2 * step);
    for (int i = 1; i < basis.count; ++i) worst_psi = std::max(worst_psi, rel(d(i), fd(i)));
  }
  report(worst_u <= 1e-5 && worst_x <= 1e-5 && worst_psi <= 1e-5, "gradient_checks",
         "max rel err dh/du=" + fmt(worst_u) + " dh/dx=" + fmt(worst_x) + " dpsi/dt=" + fmt(worst_psi));
}

void example1_demo() {
  // Log-barrier divergence toward the upper bound.
  bool monotone = true;
  double prev = blf_log(0.0, -1.0, 1.0);
  for (int k = 1; k <= 6; ++k) {
    const double v = blf_log(1.0 - std::pow(10.0, -k), -1.0, 1.0);
    monotone = monotone && v > prev;
    prev = v;
  }

  // Symmetric bound k(t) = sin t + 1 collapses at t = 3 pi / 2.
  const double t_star = 1.5 * std::numbers::pi;
  bool degenerate = false;
  try {
    const double k = std::sin(t_star) + 1.0;
    blf_log(0.0, -k, k);
  } catch (const Error& e) {
    degenerate = e.code() == ErrorCode::DegenerateBound;
  }

  // The input barrier stays finite along the simulated trajectory through t*.
  const auto s = builtin_scenario("example1_blf");
  const auto r = run(s);
  bool finite = !r.blowup;
  double min_h = INFINITY;
  for (const auto& smp : r.trace) {
    finite = finite && std::isfinite(smp.h) && std::isfinite(smp.kappa);
    min_h = std::min(min_h, smp.h);
  }
  const auto at_star = eval_barrier(s.barrier, s.x0, s.u0, t_star);
  finite = finite && std::isfinite(at_star.h) && r.trace.back().t >= t_star;
  report(monotone && degenerate && finite, "example1_blf_contrast",
         "blf_monotone=" + std::string(monotone ? "yes" : "no") + " blf(u->k_h)=" + fmt(prev) +
             " degenerate_at_3pi/2=" + std::string(degenerate ? "yes" : "no") +
             " barrier_finite=" + std::string(finite ? "yes" : "no") + " min_h=" + fmt(min_h) +
             " h(3pi/2)=" + fmt(at_star.h));
}

void integrator_order() {
  auto s = builtin_scenario("case2");
  s.run.horizon = 1.0;
  s.run.dt = 1e-3;
  const auto a = run(s);
  s.run.dt = 5e-4;
  const auto b = run(s);
  const double diff = (a.trace.back().x - b.trace.back().x).norm();
  report(!a.blowup && !b.blowup && diff <= 1e-8, "integrator_order",
         "x(1.0) dt=1e-3: " + fmt(a.trace.back().x(0)) + ", dt=5e-4: " + fmt(b.trace.back().x(0)) +
             ", |diff|=" + fmt(diff));
}

}  // namespace

int main() {
  case1_safety();
  case2_checks();
  qp_oracle();
  gain_bound();
  gradient_checks();
  example1_demo();
  integrator_order();
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
