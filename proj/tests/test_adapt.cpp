#include <gtest/gtest.h>

#include <random>

#include "inputsafe/adapt.hpp"
#include "inputsafe/error.hpp"

using namespace inputsafe;

namespace {
Eigen::VectorXd v2(double a, double b) { return Eigen::Vector2d(a, b); }
}  // namespace

TEST(Proj, IdentityInsideBall) {
  EXPECT_EQ(proj(v2(0.1, 0), v2(5, 5), 1.0, 0.1), v2(5, 5));
}

TEST(Proj, ModifiedBranchHandValue) {
  // l = (1.1025 - 1) / 0.21
  const Eigen::VectorXd p = proj(v2(1.05, 0), v2(1, 0), 1.0, 0.1);
  EXPECT_NEAR(p(0), 1.0 - (1.1025 - 1.0) / 0.21, 1e-12);
  EXPECT_NEAR(p(0), 0.5119, 1e-4);
  EXPECT_EQ(p(1), 0.0);
}

TEST(Proj, InwardRateUnchanged) {
  EXPECT_EQ(proj(v2(1.05, 0), v2(-1, 0), 1.0, 0.1), v2(-1, 0));
}

TEST(Proj, RandomProperties) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> r(0.0, 1.3);
  for (int k = 0; k < 10000; ++k) {
    const int dim = 1 + k % 3;
    Eigen::VectorXd w(dim), y(dim);
    for (int i = 0; i < dim; ++i) {
      w(i) = n(rng);
      y(i) = n(rng);
    }
    w *= r(rng) / std::max(w.norm(), 1e-12);
    const Eigen::VectorXd p = proj(w, y, 1.0, 0.1);
    const double l = (w.squaredNorm() - 1.0) / 0.21;
    if (l <= 0 || w.dot(y) <= 0) {
      EXPECT_EQ(p, y);
    } else {
      EXPECT_LE(w.dot(p - y), 0.0);
    }
    EXPECT_TRUE(p.allFinite());
  }
}

TEST(UpdateLaws, WxRows) {
  const Eigen::VectorXd psi = (Eigen::VectorXd(5) << 1, 0, 1, 0, 1).finished();
  const Eigen::MatrixXd r = update_w_x(psi, Eigen::VectorXd::Constant(1, 2.0), 1.0);
  EXPECT_EQ(r, 2.0 * psi);
  EXPECT_TRUE(update_w_x(psi, Eigen::VectorXd::Zero(1), 1.0).isZero());
  EXPECT_DOUBLE_EQ(update_w_x(Eigen::VectorXd::Ones(1), Eigen::VectorXd::Constant(1, 3.0), 2.0)(0, 0), 1.5);
}

TEST(UpdateLaws, WuRows) {
  const Eigen::VectorXd psi = (Eigen::VectorXd(5) << 1, 0, 1, 0, 1).finished();
  EXPECT_TRUE(update_w_u(psi, Eigen::VectorXd::Constant(1, 2.6), 1.0).isApprox(2.6 * psi));
  EXPECT_TRUE(update_w_u(psi, Eigen::VectorXd::Zero(1), 1.0).isZero());
  EXPECT_DOUBLE_EQ(update_w_u(Eigen::VectorXd::Ones(1), Eigen::VectorXd::Ones(1), 0.5)(0, 0), 2.0);
}

TEST(UpdateLaws, WhZeroAndHandValue) {
  const Eigen::VectorXd psi = Eigen::VectorXd::Ones(5);
  const Eigen::VectorXd q = Eigen::VectorXd::Constant(5, 1e-4);
  EXPECT_TRUE(update_w_h(Eigen::MatrixXd::Zero(5, 1), Eigen::VectorXd::Zero(1), psi, q, 0.95, 20, 0.1)
                  .isZero());
  const Eigen::MatrixXd r =
      update_w_h(Eigen::MatrixXd::Zero(1, 1), Eigen::VectorXd::Constant(1, -2.0),
                 Eigen::VectorXd::Ones(1), Eigen::VectorXd::Constant(1, 1e-4), 0.95, 20, 0.1);
  EXPECT_NEAR(r(0, 0), 10000.0, 1e-9);
}

TEST(UpdateLaws, WhOnBoundaryDoesNotGrowOutward) {
  const double radius = 20.1;
  const Eigen::MatrixXd w = Eigen::MatrixXd::Constant(1, 1, radius);
  const Eigen::VectorXd dh = Eigen::VectorXd::Constant(1, -2.0);
  const Eigen::VectorXd q = Eigen::VectorXd::Constant(1, 1e-4);
  const Eigen::MatrixXd rate = update_w_h(w, dh, Eigen::VectorXd::Ones(1), q, 0.95, 20, 0.1);
  const double raw = 2.0 / (2 * 1e-4) - 0.5 * 0.95 * radius;
  EXPECT_LE(w(0, 0) * rate(0, 0), w(0, 0) * raw);
  EXPECT_NEAR(rate(0, 0), 0.0, 1e-9);  // l = 1 on the inflated boundary cancels the radial part
}

TEST(SelectQ, HandValues) {
  const double h0 = 0.4958751 * 0.4958751;
  const Eigen::VectorXd q = select_q(h0, 5, 20.0, Eigen::VectorXd::Zero(5));
  EXPECT_NEAR(q(0), h0 / 4000.0, 1e-15);
  EXPECT_NEAR(q(0), 6.148e-5, 1e-8);
  EXPECT_DOUBLE_EQ(select_q(3.2, 1, 1.0, Eigen::VectorXd::Zero(1))(0), 1.6);
}

TEST(SelectQ, BoundHolds) {
  const Eigen::VectorXd w0 = (Eigen::VectorXd(3) << 0.0, 0.5, 3.0).finished();
  const Eigen::VectorXd q = select_q(1.7, 3, 2.0, w0);
  double total = 0;
  for (int j = 0; j < 3; ++j) total += q(j) * (2.0 + w0(j)) * (2.0 + w0(j));
  EXPECT_GE(1.7 - total, -1e-12);
}

TEST(SelectQ, RejectsUnsafeStart) {
  try {
    select_q(-0.1, 1, 1.0, Eigen::VectorXd::Zero(1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InitialUnsafe);
  }
}

TEST(Clamp, PullsRowsBack) {
  Eigen::MatrixXd w(2, 2);
  w << 3, 4, 0.1, 0.1;
  clamp_rows_to_ball(w, 1.0);
  EXPECT_NEAR(w.row(0).norm(), 1.0, 1e-15);
  EXPECT_DOUBLE_EQ(w(1, 0), 0.1);
}
