#pragma once

#include <Eigen/Core>

#include <span>
#include <vector>

namespace inputsafe {

enum class Sense { LE, GE };
enum class RowKind { CLF, CBF };  // CLF rows are softened by a slack, CBF rows are hard
enum class QPStatus { Ok, SlackActive, Infeasible };

const char* to_string(QPStatus s);  // ok | slack | infeasible

struct QPRow {
  Eigen::VectorXd a;
  double b = 0.0;
  Sense sense = Sense::GE;
  RowKind kind = RowKind::CBF;
};

struct QPProblem {
  int dim = 1;
  std::vector<QPRow> rows;
};

struct QPSolution {
  Eigen::VectorXd mu;
  double clf_slack = 0.0;
  QPStatus status = QPStatus::Ok;
  std::vector<int> active_set;  // indices into QPProblem::rows
};

inline constexpr double kDefaultSlackPenalty = 1e3;

// min |mu|^2 + slack_penalty * delta^2 subject to hard CBF rows and CLF rows
// relaxed by delta >= 0. Dual active-set method (Goldfarb-Idnani with an
// identity Hessian). On infeasibility mu = 0.
QPSolution solve_min_norm(const QPProblem& p, double slack_penalty = kDefaultSlackPenalty);

// Reference solver: enumerates active sets and checks KKT conditions.
// Intended for testing; at most 8 rows and dim <= 4.
QPSolution kkt_enumerate(const QPProblem& p, double slack_penalty = kDefaultSlackPenalty);

std::vector<QPSolution> solve_batch(std::span<const QPProblem> problems,
                                    double slack_penalty = kDefaultSlackPenalty);
std::vector<QPSolution> solve_batch_serial(std::span<const QPProblem> problems,
                                           double slack_penalty = kDefaultSlackPenalty);

}  // namespace inputsafe
