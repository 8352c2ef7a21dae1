#include "inputsafe/expression.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

#include "inputsafe/error.hpp"

namespace inputsafe {

namespace {

enum class Op {
  Const, StateVar, InputVar, Time,
  Neg, Add, Sub, Mul, Div, Pow,
  Sin, Cos, Sqrt, Sgn, Abs, Exp, Tanh,
};

// Value plus gradient w.r.t. (x_1..x_n, t); slot kMaxStateDim is t.
struct Dual {
  double v = 0.0;
  std::array<double, kMaxStateDim + 1> d{};
};

}  // namespace

struct Expression::Node {
  Op op = Op::Const;
  double value = 0.0;
  int index = 0;
  std::unique_ptr<Node> lhs;
  std::unique_ptr<Node> rhs;
  bool depends = false;  // on x or t
};

namespace {

using NodePtr = std::unique_ptr<Expression::Node>;

NodePtr make_leaf(Op op, double value = 0.0, int index = 0) {
  auto n = std::make_unique<Expression::Node>();
  n->op = op;
  n->value = value;
  n->index = index;
  n->depends = (op == Op::StateVar || op == Op::Time);
  return n;
}

NodePtr make_node(Op op, NodePtr lhs, NodePtr rhs = nullptr) {
  auto n = std::make_unique<Expression::Node>();
  n->op = op;
  n->depends = lhs->depends || (rhs && rhs->depends);
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

class Parser {
 public:
  Parser(std::string_view text, int dim_x, int dim_u)
      : text_(text), dim_x_(dim_x), dim_u_(dim_u) {}

  NodePtr parse() {
    skip_space();
    if (pos_ >= text_.size()) fail("empty expression");
    auto root = parse_sum();
    skip_space();
    if (pos_ < text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return root;
  }

  bool used_input = false;
  bool used_state = false;
  bool used_time = false;

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::ParseError, what + " at column " + std::to_string(pos_ + 1) +
                                           " in '" + std::string(text_) + "'");
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr parse_sum() {
    auto lhs = parse_product();
    while (true) {
      if (accept('+')) {
        lhs = make_node(Op::Add, std::move(lhs), parse_product());
      } else if (accept('-')) {
        lhs = make_node(Op::Sub, std::move(lhs), parse_product());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_product() {
    auto lhs = parse_unary();
    while (true) {
      if (accept('*')) {
        lhs = make_node(Op::Mul, std::move(lhs), parse_unary());
      } else if (accept('/')) {
        lhs = make_node(Op::Div, std::move(lhs), parse_unary());
      } else {
        return lhs;
      }
    }
  }

  // Unary minus binds looser than '^': -x^2 == -(x^2).
  NodePtr parse_unary() {
    if (accept('-')) return make_node(Op::Neg, parse_unary());
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  NodePtr parse_power() {
    auto base = parse_primary();
    if (accept('^')) return make_node(Op::Pow, std::move(base), parse_unary());
    return base;
  }

  NodePtr parse_primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      auto inner = parse_sum();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_identifier();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr parse_number() {
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{}) fail("malformed number");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return make_leaf(Op::Const, value);
  }

  NodePtr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string name(text_.substr(start, pos_ - start));

    static constexpr std::pair<const char*, Op> kFunctions[] = {
        {"sin", Op::Sin}, {"cos", Op::Cos},   {"sqrt", Op::Sqrt}, {"sgn", Op::Sgn},
        {"abs", Op::Abs}, {"exp", Op::Exp},   {"tanh", Op::Tanh},
    };
    for (const auto& [fname, op] : kFunctions) {
      if (name == fname) {
        if (!accept('(')) fail("expected '(' after " + name);
        auto arg = parse_sum();
        if (!accept(')')) fail("expected ')'");
        return make_node(op, std::move(arg));
      }
    }
    if (name == "pi") return make_leaf(Op::Const, std::numbers::pi);
    if (name == "t") {
      used_time = true;
      return make_leaf(Op::Time);
    }
    if (name.size() >= 2 && (name[0] == 'x' || name[0] == 'u')) {
      std::string_view digits(name);
      digits.remove_prefix(digits.size() > 2 && name[1] == '_' ? 2 : 1);
      int index = 0;
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), index);
      if (ec == std::errc{} && ptr == digits.data() + digits.size()) {
        const int limit = name[0] == 'x' ? dim_x_ : dim_u_;
        if (index < 1 || index > limit) {
          pos_ = start;
          fail("variable '" + name + "' out of range (dimension " + std::to_string(limit) + ")");
        }
        if (name[0] == 'x') {
          used_state = true;
          return make_leaf(Op::StateVar, 0.0, index - 1);
        }
        used_input = true;
        return make_leaf(Op::InputVar, 0.0, index - 1);
      }
    }
    pos_ = start;
    fail("unknown identifier '" + name + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int dim_x_;
  int dim_u_;
};

double sgn(double z) { return (z > 0.0) - (z < 0.0); }

double eval_node(const Expression::Node& n, const ExprVars& vars) {
  switch (n.op) {
    case Op::Const: return n.value;
    case Op::StateVar: return vars.x[static_cast<std::size_t>(n.index)];
    case Op::InputVar: return vars.u[static_cast<std::size_t>(n.index)];
    case Op::Time: return vars.t;
    case Op::Neg: return -eval_node(*n.lhs, vars);
    case Op::Add: return eval_node(*n.lhs, vars) + eval_node(*n.rhs, vars);
    case Op::Sub: return eval_node(*n.lhs, vars) - eval_node(*n.rhs, vars);
    case Op::Mul: return eval_node(*n.lhs, vars) * eval_node(*n.rhs, vars);
    case Op::Div: return eval_node(*n.lhs, vars) / eval_node(*n.rhs, vars);
    case Op::Pow: return std::pow(eval_node(*n.lhs, vars), eval_node(*n.rhs, vars));
    case Op::Sin: return std::sin(eval_node(*n.lhs, vars));
    case Op::Cos: return std::cos(eval_node(*n.lhs, vars));
    case Op::Sqrt: return std::sqrt(eval_node(*n.lhs, vars));
    case Op::Sgn: {
      const double z = eval_node(*n.lhs, vars);
      return vars.sgn_eps > 0.0 ? std::tanh(z / vars.sgn_eps) : sgn(z);
    }
    case Op::Abs: return std::abs(eval_node(*n.lhs, vars));
    case Op::Exp: return std::exp(eval_node(*n.lhs, vars));
    case Op::Tanh: return std::tanh(eval_node(*n.lhs, vars));
  }
  return 0.0;
}

Dual scaled(const Dual& a, double value, double factor) {
  Dual r;
  r.v = value;
  for (std::size_t i = 0; i < r.d.size(); ++i) r.d[i] = factor * a.d[i];
  return r;
}

Dual eval_dual(const Expression::Node& n, const ExprVars& vars) {
  Dual r;
  if (!n.depends) {
    r.v = eval_node(n, vars);
    return r;
  }
  switch (n.op) {
    case Op::Const:
    case Op::InputVar:
      r.v = eval_node(n, vars);
      return r;
    case Op::StateVar:
      r.v = vars.x[static_cast<std::size_t>(n.index)];
      r.d[static_cast<std::size_t>(n.index)] = 1.0;
      return r;
    case Op::Time:
      r.v = vars.t;
      r.d[kMaxStateDim] = 1.0;
      return r;
    case Op::Neg: {
      const Dual a = eval_dual(*n.lhs, vars);
      return scaled(a, -a.v, -1.0);
    }
    case Op::Add:
    case Op::Sub: {
      const Dual a = eval_dual(*n.lhs, vars);
      const Dual b = eval_dual(*n.rhs, vars);
      const double s = n.op == Op::Add ? 1.0 : -1.0;
      r.v = a.v + s * b.v;
      for (std::size_t i = 0; i < r.d.size(); ++i) r.d[i] = a.d[i] + s * b.d[i];
      return r;
    }
    case Op::Mul: {
      const Dual a = eval_dual(*n.lhs, vars);
      const Dual b = eval_dual(*n.rhs, vars);
      r.v = a.v * b.v;
      for (std::size_t i = 0; i < r.d.size(); ++i) r.d[i] = a.d[i] * b.v + a.v * b.d[i];
      return r;
    }
    case Op::Div: {
      const Dual a = eval_dual(*n.lhs, vars);
      const Dual b = eval_dual(*n.rhs, vars);
      r.v = a.v / b.v;
      for (std::size_t i = 0; i < r.d.size(); ++i) r.d[i] = (a.d[i] - r.v * b.d[i]) / b.v;
      return r;
    }
    case Op::Pow: {
      const Dual a = eval_dual(*n.lhs, vars);
      const Dual b = eval_dual(*n.rhs, vars);
      r.v = std::pow(a.v, b.v);
      if (!n.rhs->depends) {
        const double da = b.v == 0.0 ? 0.0 : b.v * std::pow(a.v, b.v - 1.0);
        for (std::size_t i = 0; i < r.d.size(); ++i) r.d[i] = da * a.d[i];
      } else {
        const double log_a = std::log(a.v);
        for (std::size_t i = 0; i < r.d.size(); ++i) {
          r.d[i] = r.v * (b.d[i] * log_a + b.v * a.d[i] / a.v);
        }
      }
      return r;
    }
    case Op::Sin: {
      const Dual a = eval_dual(*n.lhs, vars);
      return scaled(a, std::sin(a.v), std::cos(a.v));
    }
    case Op::Cos: {
      const Dual a = eval_dual(*n.lhs, vars);
      return scaled(a, std::cos(a.v), -std::sin(a.v));
    }
    case Op::Sqrt: {
      const Dual a = eval_dual(*n.lhs, vars);
      const double s = std::sqrt(a.v);
      return scaled(a, s, 0.5 / s);
    }
    case Op::Sgn: {
      const Dual a = eval_dual(*n.lhs, vars);
      if (vars.sgn_eps > 0.0) {
        const double th = std::tanh(a.v / vars.sgn_eps);
        return scaled(a, th, (1.0 - th * th) / vars.sgn_eps);
      }
      return scaled(a, sgn(a.v), 0.0);
    }
    case Op::Abs: {
      const Dual a = eval_dual(*n.lhs, vars);
      return scaled(a, std::abs(a.v), sgn(a.v));
    }
    case Op::Exp: {
      const Dual a = eval_dual(*n.lhs, vars);
      const double e = std::exp(a.v);
      return scaled(a, e, e);
    }
    case Op::Tanh: {
      const Dual a = eval_dual(*n.lhs, vars);
      const double th = std::tanh(a.v);
      return scaled(a, th, 1.0 - th * th);
    }
  }
  return r;
}

}  // namespace

Expression::Expression() : root_(make_leaf(Op::Const, 0.0)), source_("0") {}

Expression Expression::constant(double value) {
  Expression e;
  e.root_ = make_leaf(Op::Const, value);
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  e.source_.assign(buf, ptr);
  return e;
}

Expression Expression::parse(std::string_view text, int dim_x, int dim_u) {
  if (dim_x < 1 || dim_x > kMaxStateDim || dim_u < 1 || dim_u > kMaxInputDim) {
    throw Error(ErrorCode::ParseError, "unsupported dimensions for expression '" +
                                           std::string(text) + "'");
  }
  Parser parser(text, dim_x, dim_u);
  Expression e;
  e.root_ = parser.parse();
  e.source_ = std::string(text);
  e.dim_x_ = dim_x;
  e.uses_input_ = parser.used_input;
  e.uses_state_ = parser.used_state;
  e.uses_time_ = parser.used_time;
  return e;
}

double Expression::eval(const ExprVars& vars) const { return eval_node(*root_, vars); }

ExprGrad Expression::eval_grad(const ExprVars& vars) const {
  const Dual d = eval_dual(*root_, vars);
  const auto n = static_cast<Eigen::Index>(vars.x.size());
  ExprGrad g;
  g.value = d.v;
  g.d_dx.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) g.d_dx(i) = d.d[static_cast<std::size_t>(i)];
  g.d_dt = d.d[kMaxStateDim];
  return g;
}

std::vector<Expression> parse_expression_list(std::string_view text, int dim_x, int dim_u) {
  std::vector<Expression> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    std::string_view item = text.substr(start, comma == std::string_view::npos ? text.npos
                                                                                : comma - start);
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.front()))) {
      item.remove_prefix(1);
    }
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back()))) {
      item.remove_suffix(1);
    }
    out.push_back(Expression::parse(item, dim_x, dim_u));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace inputsafe
