#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

namespace warplab {

enum class WarpKind { space_form, custom };

/// Radial profile w of a rotationally symmetric model, with w(0) = 0, w'(0) = 1 and
/// w > 0 on (0, Lambda). Cheap to copy; evaluators are shared.
class WarpingFunction {
 public:
  /// order is 0, 1 or 2.
  using Evaluator = std::function<double(double r, int order)>;

  /// Closed form w_b: sin(sqrt(b) r)/sqrt(b), r, or sinh(sqrt(-b) r)/sqrt(-b).
  /// For b > 0 the domain is truncated at pi/sqrt(b) - 1e-9.
  static WarpingFunction space_form(double b);

  /// Order-aware evaluator supplied by the caller.
  static WarpingFunction custom(Evaluator eval, std::string label,
                                double domain_end = std::numeric_limits<double>::infinity());

  /// Only w itself is known; w' and w'' by central differences with h = max(1e-5, 1e-5 r).
  static WarpingFunction from_values(std::function<double(double)> w, std::string label,
                                     double domain_end = std::numeric_limits<double>::infinity());

  /// `custom:<expression in r>`, derivatives by forward-mode jets.
  static WarpingFunction from_expression(std::string_view expression);

  /// Accepts `space_form:<b>` or `custom:<expression>`.
  static WarpingFunction parse(std::string_view spec);

  double operator()(double r, int order = 0) const { return eval_(r, order); }
  double value(double r) const { return eval_(r, 0); }
  double d1(double r) const { return eval_(r, 1); }
  double d2(double r) const { return eval_(r, 2); }

  double domain_end() const noexcept { return domain_end_; }
  WarpKind kind() const noexcept { return kind_; }
  /// Constant curvature b for space forms.
  std::optional<double> curvature() const noexcept { return curvature_; }
  /// False when derivatives come from finite differences.
  bool analytic_derivatives() const noexcept { return analytic_; }
  /// Round-trippable spec string (`space_form:-1`, `custom:r + 0.1*r^3`, or a free label).
  const std::string& spec() const noexcept { return spec_; }

  /// Throws DomainError unless 0 < r < domain_end.
  void require_interior(double r, const char* what) const;

 private:
  WarpingFunction() = default;
  void check_normalization() const;

  Evaluator eval_;
  double domain_end_ = std::numeric_limits<double>::infinity();
  WarpKind kind_ = WarpKind::custom;
  std::optional<double> curvature_;
  bool analytic_ = true;
  std::string spec_;
};

}  // namespace warplab
