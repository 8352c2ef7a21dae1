#pragma once

#include <Eigen/Core>

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace inputsafe {

inline constexpr int kMaxStateDim = 8;
inline constexpr int kMaxInputDim = 4;

struct ExprVars {
  std::span<const double> x;
  std::span<const double> u;
  double t = 0.0;
  // > 0 replaces sgn(z) by tanh(z / sgn_eps).
  double sgn_eps = 0.0;
};

struct ExprGrad {
  double value = 0.0;
  Eigen::VectorXd d_dx;
  double d_dt = 0.0;
};

/// Scalar arithmetic expression over x1..xn, u1..um and t.
///
/// Grammar: + - * / ^, unary minus, parentheses, numeric literals, the
/// constant `pi`, and the functions sin cos sqrt sgn abs exp tanh. Parsed
/// once; immutable afterwards and safe to share between threads.
/// eval_grad() returns exact first derivatives in x and t (forward mode).
class Expression {
 public:
  Expression();

  // Throws Error{ParseError} with the column of the offending token.
  static Expression parse(std::string_view text, int dim_x, int dim_u);
  static Expression constant(double value);

  double eval(const ExprVars& vars) const;
  ExprGrad eval_grad(const ExprVars& vars) const;

  const std::string& source() const { return source_; }
  bool uses_input() const { return uses_input_; }
  bool uses_state() const { return uses_state_; }
  bool uses_time() const { return uses_time_; }

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
  std::string source_;
  int dim_x_ = 0;
  bool uses_input_ = false;
  bool uses_state_ = false;
  bool uses_time_ = false;
};

// Comma separated list of expressions, e.g. "x2, -x1".
std::vector<Expression> parse_expression_list(std::string_view text, int dim_x, int dim_u);

}  // namespace inputsafe
