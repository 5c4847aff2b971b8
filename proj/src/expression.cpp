#include "warplab/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <variant>

#include "warplab/errors.hpp"

namespace warplab {

namespace {

enum class Op { add, sub, mul, div, pow, neg };
enum class Fn { sin, cos, tan, sinh, cosh, tanh, exp, log, sqrt, abs };

struct Constant {
  double value;
};
struct Variable {
  std::size_t index;
};
struct Unary {
  Op op;
  std::shared_ptr<const Expression::Node> arg;
};
struct Binary {
  Op op;
  std::shared_ptr<const Expression::Node> lhs, rhs;
};
struct Call {
  Fn fn;
  std::shared_ptr<const Expression::Node> arg;
};

}  // namespace

struct Expression::Node {
  std::variant<Constant, Variable, Unary, Binary, Call> data;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

NodePtr make(auto payload) { return std::make_shared<const Expression::Node>(Expression::Node{payload}); }

class Parser {
 public:
  Parser(std::string_view text, const std::vector<std::string>& vars) : text_(text), vars_(vars) {}

  NodePtr run() {
    auto n = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError("expression '" + std::string(text_) + "' at column " + std::to_string(pos_ + 1), msg);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    auto lhs = term();
    for (;;) {
      if (accept('+')) lhs = make(Binary{Op::add, lhs, term()});
      else if (accept('-')) lhs = make(Binary{Op::sub, lhs, term()});
      else return lhs;
    }
  }

  NodePtr term() {
    auto lhs = unary();
    for (;;) {
      if (accept('*')) lhs = make(Binary{Op::mul, lhs, unary()});
      else if (accept('/')) lhs = make(Binary{Op::div, lhs, unary()});
      else return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Unary{Op::neg, unary()});
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    auto base = primary();
    if (accept('^')) return make(Binary{Op::pow, base, unary()});
    return base;
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      auto n = expr();
      if (!accept(')')) fail("expected ')'");
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return name();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    double value = 0.0;
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{}) fail("malformed number");
    pos_ += static_cast<std::size_t>(ptr - first);
    return make(Constant{value});
  }

  NodePtr name() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string id(text_.substr(start, pos_ - start));

    static const std::pair<const char*, Fn> functions[] = {
        {"sin", Fn::sin},   {"cos", Fn::cos},   {"tan", Fn::tan}, {"sinh", Fn::sinh},
        {"cosh", Fn::cosh}, {"tanh", Fn::tanh}, {"exp", Fn::exp}, {"log", Fn::log},
        {"sqrt", Fn::sqrt}, {"abs", Fn::abs}};
    for (const auto& [fname, fn] : functions) {
      if (id == fname) {
        if (!accept('(')) fail("expected '(' after " + id);
        auto arg = expr();
        if (!accept(')')) fail("expected ')'");
        return make(Call{fn, arg});
      }
    }
    for (std::size_t i = 0; i < vars_.size(); ++i)
      if (vars_[i] == id) return make(Variable{i});
    if (id == "pi") return make(Constant{std::numbers::pi});
    if (id == "e") return make(Constant{std::numbers::e});
    pos_ = start;
    fail("unknown name '" + id + "'");
  }

  std::string_view text_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

// Scalar policy for plain doubles.
struct Real {
  using T = double;
  static T constant(double c) { return c; }
  static T add(T a, T b) { return a + b; }
  static T sub(T a, T b) { return a - b; }
  static T mul(T a, T b) { return a * b; }
  static T div(T a, T b) { return a / b; }
  static T neg(T a) { return -a; }
  static T pow(T a, T b) { return std::pow(a, b); }
  static T apply(Fn fn, T a) {
    switch (fn) {
      case Fn::sin: return std::sin(a);
      case Fn::cos: return std::cos(a);
      case Fn::tan: return std::tan(a);
      case Fn::sinh: return std::sinh(a);
      case Fn::cosh: return std::cosh(a);
      case Fn::tanh: return std::tanh(a);
      case Fn::exp: return std::exp(a);
      case Fn::log: return std::log(a);
      case Fn::sqrt: return std::sqrt(a);
      case Fn::abs: return std::abs(a);
    }
    return a;
  }
};

// Scalar policy for second-order jets.
struct Jets {
  using T = Jet2;
  static T constant(double c) { return {c, 0.0, 0.0}; }
  static T add(T a, T b) { return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2}; }
  static T sub(T a, T b) { return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2}; }
  static T mul(T a, T b) { return {a.v * b.v, a.d1 * b.v + a.v * b.d1, a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2}; }
  static T div(T a, T b) {
    const double q = a.v / b.v;
    const double q1 = (a.d1 - q * b.d1) / b.v;
    const double q2 = (a.d2 - 2.0 * q1 * b.d1 - q * b.d2) / b.v;
    return {q, q1, q2};
  }
  static T neg(T a) { return {-a.v, -a.d1, -a.d2}; }
  // f(a) with f', f'' given.
  static T chain(T a, double f, double f1, double f2) { return {f, f1 * a.d1, f2 * a.d1 * a.d1 + f1 * a.d2}; }
  static T pow(T a, T b) {
    if (b.d1 == 0.0 && b.d2 == 0.0) {
      const double p = b.v;
      if (p == 0.0) return constant(1.0);
      const double f = std::pow(a.v, p);
      const double f1 = p * std::pow(a.v, p - 1.0);
      const double f2 = (p == 1.0) ? 0.0 : p * (p - 1.0) * std::pow(a.v, p - 2.0);
      return chain(a, f, f1, f2);
    }
    // a^b = exp(b log a), a > 0
    const double l = std::log(a.v);
    return apply(Fn::exp, mul(b, chain(a, l, 1.0 / a.v, -1.0 / (a.v * a.v))));
  }
  static T apply(Fn fn, T a) {
    const double x = a.v;
    switch (fn) {
      case Fn::sin: return chain(a, std::sin(x), std::cos(x), -std::sin(x));
      case Fn::cos: return chain(a, std::cos(x), -std::sin(x), -std::cos(x));
      case Fn::tan: {
        const double t = std::tan(x);
        const double s = 1.0 + t * t;
        return chain(a, t, s, 2.0 * t * s);
      }
      case Fn::sinh: return chain(a, std::sinh(x), std::cosh(x), std::sinh(x));
      case Fn::cosh: return chain(a, std::cosh(x), std::sinh(x), std::cosh(x));
      case Fn::tanh: {
        const double t = std::tanh(x);
        const double s = 1.0 - t * t;
        return chain(a, t, s, -2.0 * t * s);
      }
      case Fn::exp: {
        const double ex = std::exp(x);
        return chain(a, ex, ex, ex);
      }
      case Fn::log: return chain(a, std::log(x), 1.0 / x, -1.0 / (x * x));
      case Fn::sqrt: {
        const double s = std::sqrt(x);
        return chain(a, s, 0.5 / s, -0.25 / (s * x));
      }
      case Fn::abs: {
        const double sg = (x < 0.0) ? -1.0 : 1.0;
        return chain(a, std::abs(x), sg, 0.0);
      }
    }
    return a;
  }
};

template <class Policy, class Leaf>
typename Policy::T evaluate(const Expression::Node& node, const Leaf& leaf) {
  using T = typename Policy::T;
  return std::visit(
      [&](const auto& n) -> T {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, Constant>) {
          return Policy::constant(n.value);
        } else if constexpr (std::is_same_v<N, Variable>) {
          return leaf(n.index);
        } else if constexpr (std::is_same_v<N, Unary>) {
          return Policy::neg(evaluate<Policy>(*n.arg, leaf));
        } else if constexpr (std::is_same_v<N, Binary>) {
          const T a = evaluate<Policy>(*n.lhs, leaf);
          const T b = evaluate<Policy>(*n.rhs, leaf);
          switch (n.op) {
            case Op::add: return Policy::add(a, b);
            case Op::sub: return Policy::sub(a, b);
            case Op::mul: return Policy::mul(a, b);
            case Op::div: return Policy::div(a, b);
            case Op::pow: return Policy::pow(a, b);
            case Op::neg: break;
          }
          return a;
        } else {
          return Policy::apply(n.fn, evaluate<Policy>(*n.arg, leaf));
        }
      },
      node.data);
}

}  // namespace

Expression Expression::parse(std::string_view text, std::vector<std::string> variables) {
  Expression e;
  e.root_ = Parser(text, variables).run();
  e.source_ = std::string(text);
  e.variables_ = std::move(variables);
  return e;
}

double Expression::eval(std::span<const double> vars) const {
  if (vars.size() != variables_.size())
    throw std::invalid_argument("expression expects " + std::to_string(variables_.size()) + " variables");
  return evaluate<Real>(*root_, [&](std::size_t i) { return vars[i]; });
}

Jet2 Expression::eval_jet(double x) const {
  if (variables_.size() != 1) throw std::invalid_argument("eval_jet requires a single-variable expression");
  return evaluate<Jets>(*root_, [&](std::size_t) { return Jet2{x, 1.0, 0.0}; });
}

double parse_number_expression(std::string_view text) {
  return Expression::parse(text, {}).eval(std::span<const double>{});
}

}  // namespace warplab
