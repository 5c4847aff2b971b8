#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace warplab {

/// Value and first two derivatives of a scalar function of one variable.
struct Jet2 {
  double v = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

/// Small arithmetic expression language used for custom warping functions and charts.
///
/// Grammar (precedence low to high):
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := ('+' | '-') unary | power
///   power   := primary ('^' unary)?            right-associative
///   primary := number | name | func '(' expr ')' | '(' expr ')'
/// Functions: sin cos tan sinh cosh tanh exp log sqrt abs. Constants: pi, e.
/// Variable names are fixed at parse time; an unknown name is a parse error.
class Expression {
 public:
  struct Node;

  static Expression parse(std::string_view text, std::vector<std::string> variables);

  /// `vars` is indexed like the variable list given to parse().
  double eval(std::span<const double> vars) const;
  double eval(double x) const { return eval(std::span<const double>(&x, 1)); }

  /// Forward-mode evaluation with exact first/second derivatives. Single-variable only.
  Jet2 eval_jet(double x) const;

  const std::string& source() const noexcept { return source_; }
  const std::vector<std::string>& variables() const noexcept { return variables_; }

 private:
  std::shared_ptr<const Node> root_;
  std::string source_;
  std::vector<std::string> variables_;
};

/// Evaluates a constant expression such as "2*pi" or "-4".
double parse_number_expression(std::string_view text);

}  // namespace warplab
