#include "inputsafe/qp.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace inputsafe {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSlackActiveTol = 1e-12;
constexpr double kZeroRowTol = 1e-14;

// Constraints G z >= h over z = (mu, delta'), delta' = sqrt(P) delta, so the
// objective becomes |z|^2. Rows are scaled to unit norm; origin -1 marks the
// slack bound delta' >= 0.
struct Standardized {
  Eigen::MatrixXd g;
  Eigen::VectorXd h;
  std::vector<int> origin;
  bool trivially_infeasible = false;
};

Standardized standardize(const QPProblem& p, double slack_penalty) {
  const int n = p.dim + 1;
  const double inv_s = 1.0 / std::sqrt(slack_penalty);
  std::vector<Eigen::VectorXd> rows;
  std::vector<double> rhs;
  Standardized out;
  for (std::size_t i = 0; i < p.rows.size(); ++i) {
    const auto& row = p.rows[i];
    const double sign = row.sense == Sense::GE ? 1.0 : -1.0;
    Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
    g.head(p.dim) = sign * row.a;
    double h = sign * row.b;
    if (row.kind == RowKind::CLF) g(p.dim) = inv_s;
    const double norm = g.norm();
    if (norm <= kZeroRowTol) {
      if (h > 1e-12) out.trivially_infeasible = true;
      continue;
    }
    rows.push_back(g / norm);
    rhs.push_back(h / norm);
    out.origin.push_back(static_cast<int>(i));
  }
  rows.push_back(Eigen::VectorXd::Unit(n, p.dim));
  rhs.push_back(0.0);
  out.origin.push_back(-1);

  out.g.resize(static_cast<Eigen::Index>(rows.size()), n);
  out.h.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.g.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
    out.h(static_cast<Eigen::Index>(i)) = rhs[i];
  }
  return out;
}

QPSolution infeasible(int dim) {
  QPSolution s;
  s.mu = Eigen::VectorXd::Zero(dim);
  s.status = QPStatus::Infeasible;
  return s;
}

QPSolution finish(const QPProblem& p, const Eigen::VectorXd& z, double slack_penalty,
                  std::vector<int> active) {
  QPSolution s;
  s.mu = z.head(p.dim);
  s.clf_slack = std::max(0.0, z(p.dim)) / std::sqrt(slack_penalty);
  s.status = s.clf_slack > kSlackActiveTol ? QPStatus::SlackActive : QPStatus::Ok;
  std::sort(active.begin(), active.end());
  s.active_set = std::move(active);
  return s;
}

}  // namespace

const char* to_string(QPStatus s) {
  switch (s) {
    case QPStatus::Ok: return "ok";
    case QPStatus::SlackActive: return "slack";
    case QPStatus::Infeasible: return "infeasible";
  }
  return "?";
}

QPSolution solve_min_norm(const QPProblem& p, double slack_penalty) {
  const Standardized c = standardize(p, slack_penalty);
  if (c.trivially_infeasible) return infeasible(p.dim);

  const auto n = c.g.cols();
  const auto m = c.g.rows();
  constexpr double tol = 1e-12;
  Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
  std::vector<Eigen::Index> active;
  std::vector<double> lambda;

  const int max_iter = 50 * static_cast<int>(m + 1);
  for (int iter = 0; iter < max_iter; ++iter) {
    Eigen::Index p_idx = -1;
    double worst = -tol;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (std::find(active.begin(), active.end(), i) != active.end()) continue;
      const double s = c.g.row(i).dot(z) - c.h(i);
      if (s < worst) {
        worst = s;
        p_idx = i;
      }
    }
    if (p_idx < 0) break;

    const Eigen::VectorXd np = c.g.row(p_idx).transpose();
    double lambda_p = 0.0;
    while (true) {
      const auto k_act = static_cast<Eigen::Index>(active.size());
      Eigen::VectorXd r(k_act);
      Eigen::VectorXd dir = np;
      if (k_act > 0) {
        Eigen::MatrixXd nm(n, k_act);
        for (Eigen::Index j = 0; j < k_act; ++j) nm.col(j) = c.g.row(active[static_cast<std::size_t>(j)]).transpose();
        r = (nm.transpose() * nm).ldlt().solve(nm.transpose() * np);
        dir = np - nm * r;
      }

      double t1 = kInf;
      Eigen::Index drop = -1;
      for (Eigen::Index j = 0; j < k_act; ++j) {
        if (r(j) > 1e-14) {
          const double ratio = lambda[static_cast<std::size_t>(j)] / r(j);
          if (ratio < t1) {
            t1 = ratio;
            drop = j;
          }
        }
      }
      double t2 = kInf;
      const double dd = dir.squaredNorm();
      // Rows have unit norm, so |dir| below ~1e-9 means p is dependent on the active set.
      if (dd > 1e-18) t2 = -(np.dot(z) - c.h(p_idx)) / dd;

      const double t = std::min(t1, t2);
      if (t == kInf) return infeasible(p.dim);

      if (t2 < kInf) z += t * dir;
      for (Eigen::Index j = 0; j < k_act; ++j) {
        auto& l = lambda[static_cast<std::size_t>(j)];
        l = std::max(0.0, l - t * r(j));
      }
      lambda_p += t;

      if (t2 <= t1) {
        active.push_back(p_idx);
        lambda.push_back(lambda_p);
        break;
      }
      active.erase(active.begin() + drop);
      lambda.erase(lambda.begin() + drop);
    }
  }

  // Polish: the dual steps accumulate rounding when the active rows are nearly
  // parallel; the least-norm point on the final active set is recomputed directly.
  if (!active.empty()) {
    const auto k_act = static_cast<Eigen::Index>(active.size());
    Eigen::MatrixXd na(k_act, n);
    Eigen::VectorXd ha(k_act);
    for (Eigen::Index j = 0; j < k_act; ++j) {
      na.row(j) = c.g.row(active[static_cast<std::size_t>(j)]);
      ha(j) = c.h(active[static_cast<std::size_t>(j)]);
    }
    const Eigen::VectorXd polished = na.completeOrthogonalDecomposition().solve(ha);
    bool ok = polished.allFinite();
    for (Eigen::Index i = 0; i < m && ok; ++i) {
      ok = c.g.row(i).dot(polished) - c.h(i) >= -1e-9 * (1.0 + polished.norm());
    }
    if (ok) z = polished;
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    if (c.g.row(i).dot(z) - c.h(i) < -1e-9 * (1.0 + z.norm())) return infeasible(p.dim);
  }

  std::vector<int> rows;
  for (const auto i : active) {
    const int o = c.origin[static_cast<std::size_t>(i)];
    if (o >= 0) rows.push_back(o);
  }
  return finish(p, z, slack_penalty, std::move(rows));
}

QPSolution kkt_enumerate(const QPProblem& p, double slack_penalty) {
  // Enumerates active sets over (mu, e) with e = sqrt(P) delta, so the objective
  // is |z|^2 and each candidate is the least-norm solution of N_S z = b_S.
  // Long double throughout; rows are left unnormalized.
  using Vec = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
  using Mat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  const int dim = p.dim;
  const int n = dim + 1;
  const long double root_p = std::sqrt(static_cast<long double>(slack_penalty));
  std::vector<Vec> normals;
  std::vector<long double> bounds;
  std::vector<int> origin;
  for (std::size_t i = 0; i < p.rows.size(); ++i) {
    const auto& row = p.rows[i];
    const long double sign = row.sense == Sense::GE ? 1.0L : -1.0L;
    Vec a = Vec::Zero(n);
    a.head(dim) = sign * row.a.cast<long double>();
    if (row.kind == RowKind::CLF) a(dim) = 1.0L / root_p;  // slack always loosens the row
    normals.push_back(a);
    bounds.push_back(sign * static_cast<long double>(row.b));
    origin.push_back(static_cast<int>(i));
  }
  normals.push_back(Vec::Unit(n, dim));
  bounds.push_back(0.0L);
  origin.push_back(-1);

  const int total = static_cast<int>(normals.size());
  bool found = false;
  long double best_cost = 0.0L;
  Vec best;
  std::vector<int> best_set;

  for (unsigned mask = 0; mask < (1u << total); ++mask) {
    std::vector<int> set;
    for (int i = 0; i < total; ++i) {
      if (mask & (1u << i)) set.push_back(i);
    }
    if (static_cast<int>(set.size()) > n) continue;

    const auto k = static_cast<Eigen::Index>(set.size());
    Mat nt(k, n);
    Vec bs(k);
    for (Eigen::Index j = 0; j < k; ++j) {
      nt.row(j) = normals[static_cast<std::size_t>(set[static_cast<std::size_t>(j)])].transpose();
      bs(j) = bounds[static_cast<std::size_t>(set[static_cast<std::size_t>(j)])];
    }
    Vec z = Vec::Zero(n);
    if (k > 0) {
      Eigen::CompleteOrthogonalDecomposition<Mat> cod(nt);
      cod.setThreshold(1e-12L);
      if (cod.rank() < k) continue;
      z = cod.solve(bs);
      // Stationarity: z = N_S^T lam / 2 with lam >= 0.
      const Vec lam = nt.transpose().completeOrthogonalDecomposition().solve(z);
      if ((lam.array() < -1e-12L * (1.0L + lam.cwiseAbs().maxCoeff())).any()) continue;
    }
    bool feasible = true;
    for (int i = 0; i < total && feasible; ++i) {
      const auto& a = normals[static_cast<std::size_t>(i)];
      const long double scale = 1.0L + std::abs(bounds[static_cast<std::size_t>(i)]) + a.norm() * z.norm();
      feasible = a.dot(z) - bounds[static_cast<std::size_t>(i)] >= -1e-13L * scale;
    }
    if (!feasible) continue;
    const long double cost = z.squaredNorm();
    if (!found || cost < best_cost) {
      found = true;
      best_cost = cost;
      best = z;
      best_set = set;
    }
  }
  if (!found) return infeasible(dim);

  QPSolution s;
  s.mu = best.head(dim).cast<double>();
  s.clf_slack = std::max(0.0, static_cast<double>(best(dim) / root_p));
  s.status = s.clf_slack > kSlackActiveTol ? QPStatus::SlackActive : QPStatus::Ok;
  for (const int i : best_set) {
    if (origin[static_cast<std::size_t>(i)] >= 0) s.active_set.push_back(origin[static_cast<std::size_t>(i)]);
  }
  return s;
}

std::vector<QPSolution> solve_batch(std::span<const QPProblem> problems, double slack_penalty) {
  std::vector<QPSolution> out(problems.size());
  const auto n = static_cast<std::ptrdiff_t>(problems.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = solve_min_norm(problems[static_cast<std::size_t>(i)], slack_penalty);
  }
  return out;
}

std::vector<QPSolution> solve_batch_serial(std::span<const QPProblem> problems,
                                           double slack_penalty) {
  std::vector<QPSolution> out;
  out.reserve(problems.size());
  for (const auto& p : problems) out.push_back(solve_min_norm(p, slack_penalty));
  return out;
}

}  // namespace inputsafe
