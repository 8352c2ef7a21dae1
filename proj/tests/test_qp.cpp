#include <gtest/gtest.h>

#include <random>

#include "inputsafe/qp.hpp"

using namespace inputsafe;

namespace {

QPRow row(std::initializer_list<double> a, double b, Sense s, RowKind k = RowKind::CBF) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(a.size()));
  Eigen::Index i = 0;
  for (double x : a) v(i++) = x;
  return {v, b, s, k};
}

bool satisfied(const QPRow& r, const Eigen::VectorXd& mu, double slack, double tol) {
  const double lhs = r.a.dot(mu);
  const double relax = r.kind == RowKind::CLF ? slack : 0.0;
  return r.sense == Sense::GE ? lhs >= r.b - relax - tol : lhs <= r.b + relax + tol;
}

QPProblem random_problem(std::mt19937_64& rng, int dim, int rows) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_int_distribution<int> coin(0, 3);
  QPProblem p;
  p.dim = dim;
  for (int r = 0; r < rows; ++r) {
    QPRow q;
    q.a.resize(dim);
    for (int i = 0; i < dim; ++i) q.a(i) = n(rng);
    q.b = n(rng);
    const int c = coin(rng);
    q.sense = (c & 1) ? Sense::GE : Sense::LE;
    q.kind = (c & 2) ? RowKind::CLF : RowKind::CBF;
    p.rows.push_back(q);
  }
  return p;
}

}  // namespace

TEST(QP, NoRows) {
  const auto s = solve_min_norm({2, {}});
  EXPECT_TRUE(s.mu.isZero());
  EXPECT_EQ(s.status, QPStatus::Ok);
}

TEST(QP, SingleHalfspace) {
  const QPProblem p{2, {row({1, 0}, 2, Sense::GE)}};
  for (const auto& s : {solve_min_norm(p), kkt_enumerate(p)}) {
    EXPECT_NEAR(s.mu(0), 2.0, 1e-12);
    EXPECT_NEAR(s.mu(1), 0.0, 1e-12);
    EXPECT_EQ(s.status, QPStatus::Ok);
    EXPECT_EQ(s.active_set, std::vector<int>{0});
  }
}

TEST(QP, TwoActiveRows) {
  const QPProblem p{2, {row({1, 0}, 1, Sense::GE), row({0, 1}, 1, Sense::GE)}};
  for (const auto& s : {solve_min_norm(p), kkt_enumerate(p)}) {
    EXPECT_NEAR(s.mu(0), 1.0, 1e-12);
    EXPECT_NEAR(s.mu(1), 1.0, 1e-12);
  }
}

TEST(QP, ContradictoryHardRows) {
  const QPProblem p{1, {row({1}, 1, Sense::GE), row({1}, -1, Sense::LE)}};
  EXPECT_EQ(solve_min_norm(p).status, QPStatus::Infeasible);
  EXPECT_EQ(kkt_enumerate(p).status, QPStatus::Infeasible);
  EXPECT_TRUE(solve_min_norm(p).mu.isZero());
}

TEST(QP, ZeroCoefficientRow) {
  const QPProblem bad{1, {row({0}, 0.5, Sense::GE)}};
  EXPECT_EQ(solve_min_norm(bad).status, QPStatus::Infeasible);
  EXPECT_EQ(kkt_enumerate(bad).status, QPStatus::Infeasible);
  const QPProblem vacuous{1, {row({0}, -0.5, Sense::GE)}};
  EXPECT_EQ(solve_min_norm(vacuous).status, QPStatus::Ok);
  EXPECT_EQ(kkt_enumerate(vacuous).status, QPStatus::Ok);
}

TEST(QP, ClfRowIsRelaxed) {
  // Hard row forces mu >= 2, soft row asks mu <= 1.
  const QPProblem p{1, {row({1}, 2, Sense::GE), row({1}, 1, Sense::LE, RowKind::CLF)}};
  const auto s = solve_min_norm(p, 1e3);
  EXPECT_EQ(s.status, QPStatus::SlackActive);
  EXPECT_NEAR(s.mu(0), 2.0, 1e-12);
  EXPECT_NEAR(s.clf_slack, 1.0, 1e-12);
  const auto o = kkt_enumerate(p, 1e3);
  EXPECT_NEAR(o.mu(0), 2.0, 1e-12);
  EXPECT_NEAR(o.clf_slack, 1.0, 1e-12);
}

TEST(QP, SoftOnlyTradesOffSlack) {
  // min mu^2 + P d^2, mu >= 1 - d  ->  mu = P/(1+P)
  const QPProblem p{1, {row({1}, 1, Sense::GE, RowKind::CLF)}};
  const auto s = solve_min_norm(p, 10.0);
  EXPECT_NEAR(s.mu(0), 10.0 / 11.0, 1e-12);
  EXPECT_NEAR(s.clf_slack, 1.0 / 11.0, 1e-12);
}

TEST(QP, RandomAgreementWithOracle) {
  std::mt19937_64 rng(2024);
  int compared = 0;
  for (int k = 0; k < 10000; ++k) {
    const int dim = 1 + k % 3;
    const int rows = 1 + (k / 3) % 4;
    const auto p = random_problem(rng, dim, rows);
    const auto a = solve_min_norm(p);
    const auto b = kkt_enumerate(p);
    ASSERT_EQ(a.status, b.status) << "problem " << k;
    if (a.status == QPStatus::Infeasible) continue;
    ++compared;
    EXPECT_LE((a.mu - b.mu).cwiseAbs().maxCoeff(), 1e-8) << "problem " << k;
    for (const auto& r : p.rows) EXPECT_TRUE(satisfied(r, a.mu, a.clf_slack, 1e-9));
  }
  EXPECT_GT(compared, 9000);
}

TEST(QP, MinimumNormAmongFeasiblePoints) {
  std::mt19937_64 rng(77);
  std::normal_distribution<double> n(0.0, 3.0);
  for (int k = 0; k < 1000; ++k) {
    const int dim = 1 + k % 3;
    auto p = random_problem(rng, dim, 1 + k % 4);
    for (auto& r : p.rows) r.kind = RowKind::CBF;
    const auto s = solve_min_norm(p);
    if (s.status == QPStatus::Infeasible) continue;
    for (const auto& r : p.rows) EXPECT_TRUE(satisfied(r, s.mu, 0.0, 1e-9));
    for (int j = 0; j < 100; ++j) {
      Eigen::VectorXd z(dim);
      for (int i = 0; i < dim; ++i) z(i) = n(rng);
      bool feasible = true;
      for (const auto& r : p.rows) feasible = feasible && satisfied(r, z, 0.0, 0.0);
      if (feasible) EXPECT_LE(s.mu.norm(), z.norm() + 1e-9);
    }
  }
}

TEST(QP, BatchMatchesSerial) {
  std::mt19937_64 rng(1);
  std::vector<QPProblem> ps;
  for (int k = 0; k < 500; ++k) ps.push_back(random_problem(rng, 1 + k % 3, 1 + k % 4));
  const auto a = solve_batch(ps);
  const auto b = solve_batch_serial(ps);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].status, b[i].status);
    EXPECT_EQ(a[i].mu, b[i].mu);
  }
}
