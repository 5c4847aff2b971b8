#include "warplab/warping.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "warplab/errors.hpp"
#include "warplab/expression.hpp"
#include "warplab/format.hpp"

namespace warplab {

WarpingFunction WarpingFunction::space_form(double b) {
  WarpingFunction w;
  w.kind_ = WarpKind::space_form;
  w.curvature_ = b;
  w.spec_ = "space_form:" + format_double(b);
  if (b == 0.0) {
    w.eval_ = [](double r, int order) { return order == 0 ? r : (order == 1 ? 1.0 : 0.0); };
  } else if (b < 0.0) {
    const double k = std::sqrt(-b);
    w.eval_ = [k](double r, int order) {
      switch (order) {
        case 0: return std::sinh(k * r) / k;
        case 1: return std::cosh(k * r);
        default: return k * std::sinh(k * r);
      }
    };
  } else {
    const double k = std::sqrt(b);
    w.domain_end_ = std::numbers::pi / k - 1e-9;
    w.eval_ = [k](double r, int order) {
      switch (order) {
        case 0: return std::sin(k * r) / k;
        case 1: return std::cos(k * r);
        default: return -k * std::sin(k * r);
      }
    };
  }
  return w;
}

WarpingFunction WarpingFunction::custom(Evaluator eval, std::string label, double domain_end) {
  WarpingFunction w;
  w.eval_ = std::move(eval);
  w.domain_end_ = domain_end;
  w.spec_ = std::move(label);
  w.check_normalization();
  return w;
}

WarpingFunction WarpingFunction::from_values(std::function<double(double)> f, std::string label,
                                             double domain_end) {
  WarpingFunction w;
  w.analytic_ = false;
  w.domain_end_ = domain_end;
  w.spec_ = std::move(label);
  w.eval_ = [f = std::move(f)](double r, int order) {
    if (order == 0) return f(r);
    const double h = std::max(1e-5, 1e-5 * std::abs(r));
    // one-sided at r = 0 would bias w'(0); the profile is odd-extendable, so central is fine
    if (order == 1) return (f(r + h) - f(r - h)) / (2.0 * h);
    return (f(r + h) - 2.0 * f(r) + f(r - h)) / (h * h);
  };
  w.check_normalization();
  return w;
}

WarpingFunction WarpingFunction::from_expression(std::string_view expression) {
  auto expr = Expression::parse(expression, {"r"});
  WarpingFunction w;
  w.spec_ = "custom:" + std::string(expression);
  w.eval_ = [expr](double r, int order) {
    if (order == 0) return expr.eval(r);
    const Jet2 j = expr.eval_jet(r);
    return order == 1 ? j.d1 : j.d2;
  };
  w.check_normalization();
  return w;
}

WarpingFunction WarpingFunction::parse(std::string_view spec) {
  constexpr std::string_view sf = "space_form:";
  constexpr std::string_view cu = "custom:";
  if (spec.starts_with(sf)) {
    const std::string_view arg = spec.substr(sf.size());
    double b = 0.0;
    try {
      b = parse_number_expression(arg);
    } catch (const ConfigError& e) {
      throw ConfigError("warping '" + std::string(spec) + "'", e.what());
    }
    if (!std::isfinite(b)) throw ConfigError("warping '" + std::string(spec) + "'", "curvature must be finite");
    auto w = space_form(b);
    w.spec_ = std::string(spec);
    return w;
  }
  if (spec.starts_with(cu)) return from_expression(spec.substr(cu.size()));
  throw ConfigError("warping '" + std::string(spec) + "'", "expected space_form:<b> or custom:<expression>");
}

void WarpingFunction::require_interior(double r, const char* what) const {
  if (!(r > 0.0) || !(r < domain_end_)) {
    std::ostringstream os;
    os << what << ": radius " << r << " outside (0, " << domain_end_ << ")";
    throw DomainError(os.str());
  }
}

void WarpingFunction::check_normalization() const {
  const double w0 = eval_(0.0, 0);
  const double w1 = eval_(0.0, 1);
  if (!(std::abs(w0) <= 1e-8) || !(std::abs(w1 - 1.0) <= 1e-6)) {
    std::ostringstream os;
    os << "warping '" << spec_ << "' must satisfy w(0)=0, w'(0)=1 (got " << w0 << ", " << w1 << ")";
    throw DomainError(os.str());
  }
}

}  // namespace warplab
