#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "inputsafe/error.hpp"
#include "inputsafe/expression.hpp"

using namespace inputsafe;

namespace {

double eval(const std::string& text, std::vector<double> x, std::vector<double> u = {0.0},
            double t = 0.0) {
  const auto e = Expression::parse(text, static_cast<int>(x.size()), static_cast<int>(u.size()));
  return e.eval({x, u, t});
}

}  // namespace

TEST(Expression, Precedence) {
  EXPECT_DOUBLE_EQ(eval("1 + 2*3", {0}), 7.0);
  EXPECT_DOUBLE_EQ(eval("(1 + 2)*3", {0}), 9.0);
  EXPECT_DOUBLE_EQ(eval("2^3^2", {0}), 512.0);  // right associative
  EXPECT_DOUBLE_EQ(eval("-x1^2", {3}), -9.0);
  EXPECT_DOUBLE_EQ(eval("8/4/2", {0}), 1.0);
  EXPECT_DOUBLE_EQ(eval("2*-3", {0}), -6.0);
  EXPECT_DOUBLE_EQ(eval("1e-3*1000", {0}), 1.0);
}

TEST(Expression, FunctionsAndVariables) {
  EXPECT_DOUBLE_EQ(eval("sin(pi/2) + cos(0)", {0}), 2.0);
  EXPECT_DOUBLE_EQ(eval("sqrt(x1)", {16}), 4.0);
  EXPECT_DOUBLE_EQ(eval("sgn(u1)", {0}, {-2}), -1.0);
  EXPECT_DOUBLE_EQ(eval("sgn(u1)", {0}, {0}), 0.0);
  EXPECT_DOUBLE_EQ(eval("abs(x2) + t", {0, -2}, {0}, 1.5), 3.5);
  EXPECT_DOUBLE_EQ(eval("x_1 * u_1", {2}, {3}), 6.0);
  EXPECT_NEAR(eval("exp(1)", {0}), std::numbers::e, 1e-15);
}

TEST(Expression, SgnSmoothing) {
  const auto e = Expression::parse("sgn(u1)", 1, 1);
  const double x = 0.0;
  const double u = 1e-3;
  EXPECT_NEAR(e.eval({{&x, 1}, {&u, 1}, 0.0, 1e-3}), std::tanh(1.0), 1e-15);
  EXPECT_DOUBLE_EQ(e.eval({{&x, 1}, {&u, 1}, 0.0, 0.0}), 1.0);
}

TEST(Expression, Case2KappaValue) {
  EXPECT_NEAR(eval("sqrt(-0.1*sin(x1) - 1/(t + 10) + 0.25)", {5}), 0.4958751, 1e-6);
}

TEST(Expression, ParseErrorsCarryColumn) {
  try {
    Expression::parse("x1 + * 2", 1, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
    EXPECT_NE(std::string(e.what()).find("column 6"), std::string::npos) << e.what();
  }
  for (const char* bad : {"", "x2", "u0", "foo(1)", "sin 1", "(1", "1)", "1 2", "y"}) {
    EXPECT_THROW(Expression::parse(bad, 1, 1), Error) << bad;
  }
}

TEST(Expression, UsageFlags) {
  const auto e = Expression::parse("x1 + t", 1, 1);
  EXPECT_TRUE(e.uses_state());
  EXPECT_TRUE(e.uses_time());
  EXPECT_FALSE(e.uses_input());
  EXPECT_TRUE(Expression::parse("u1", 1, 1).uses_input());
  EXPECT_EQ(e.source(), "x1 + t");
}

TEST(Expression, GradientMatchesFiniteDifference) {
  const auto e = Expression::parse(
      "sin(x1)*x2^2 - sqrt(x1^2 + 1)/(t + 2) + exp(-x2)*cos(t*x1) + tanh(x1 - x2) + x1^x2", 2, 1);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(0.2, 2.0);
  for (int k = 0; k < 200; ++k) {
    std::vector<double> x{dist(rng), dist(rng)};
    const double t = dist(rng);
    const double u = 0.0;
    const auto g = e.eval_grad({x, {&u, 1}, t});
    EXPECT_NEAR(g.value, e.eval({x, {&u, 1}, t}), 1e-14);
    const double step = 1e-6;
    for (int i = 0; i < 2; ++i) {
      auto xp = x;
      auto xm = x;
      xp[static_cast<std::size_t>(i)] += step;
      xm[static_cast<std::size_t>(i)] -= step;
      const double fd = (e.eval({xp, {&u, 1}, t}) - e.eval({xm, {&u, 1}, t})) / (2 * step);
      EXPECT_NEAR(g.d_dx(i), fd, 1e-6 * (1 + std::abs(fd)));
    }
    const double fdt = (e.eval({x, {&u, 1}, t + step}) - e.eval({x, {&u, 1}, t - step})) / (2 * step);
    EXPECT_NEAR(g.d_dt, fdt, 1e-6 * (1 + std::abs(fdt)));
  }
}

TEST(Expression, ListParsing) {
  const auto list = parse_expression_list("x2, -x1 , 0", 2, 1);
  ASSERT_EQ(list.size(), 3u);
  EXPECT_EQ(list[1].source(), "-x1");
}
