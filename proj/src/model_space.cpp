#include "warplab/model_space.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "warplab/errors.hpp"

namespace warplab {

double unit_sphere_volume(int m) {
  if (m < 1) throw std::invalid_argument("unit_sphere_volume: m must be >= 1");
  const double half = 0.5 * m;
  return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

ModelSpace ModelSpace::make(int dim, WarpingFunction w) {
  if (dim < 2) throw std::invalid_argument("model dimension must be >= 2");
  return ModelSpace{dim, std::move(w), warplab::unit_sphere_volume(dim)};
}

namespace {

double positive_w(const WarpingFunction& w, double r, const char* what) {
  w.require_interior(r, what);
  const double v = w.value(r);
  if (!(v > 0.0)) {
    std::ostringstream os;
    os << what << ": warping not positive at r=" << r << " (w=" << v << ")";
    throw DomainError(os.str());
  }
  return v;
}

}  // namespace

double mean_curvature_eta(const WarpingFunction& w, double r) {
  const double v = positive_w(w, r, "mean_curvature_eta");
  return w.d1(r) / v;
}

double radial_curvature(const WarpingFunction& w, double r) {
  const double v = positive_w(w, r, "radial_curvature");
  return -w.d2(r) / v;
}

double fiber_curvature(const WarpingFunction& w, double r) {
  const double v = positive_w(w, r, "fiber_curvature");
  const double d = w.d1(r);
  return (1.0 - d * d) / (v * v);
}

double vol_fiber(const ModelSpace& M, double r) {
  const double v = positive_w(M.warping, r, "vol_fiber");
  return M.unit_sphere_volume * std::pow(v, M.dim - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol, double abs_floor) {
  double error = 0.0;
  double l1 = 0.0;
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 20, rel_tol, &error, &l1);
  if (!std::isfinite(value) || error > std::max(abs_floor, 1e-10 * std::abs(value))) {
    std::ostringstream os;
    os << "quadrature did not converge on [" << a << ", " << b << "]: value " << value << ", error estimate "
       << error;
    throw NumericError(os.str());
  }
  return value;
}

double vol_ball(const ModelSpace& M, double r) {
  positive_w(M.warping, r, "vol_ball");
  const int p = M.dim - 1;
  const auto& w = M.warping;
  const double integral = integrate([&](double t) { return std::pow(w.value(t), p); }, 0.0, r);
  return M.unit_sphere_volume * integral;
}

double isoperimetric_quotient(const ModelSpace& M, double r) { return vol_ball(M, r) / vol_fiber(M, r); }

std::string to_string(BalanceCondition c) {
  switch (c) {
    case BalanceCondition::none: return "none";
    case BalanceCondition::K_le_0: return "K_le_0";
    case BalanceCondition::K_ge_minus_eta_sq: return "K_ge_minus_eta_sq";
  }
  return "none";
}

BalanceVerdict balance_report(const ModelSpace& M, std::span<const double> grid, double tolerance) {
  if (grid.empty()) throw std::invalid_argument("balance_report: empty grid");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw std::invalid_argument("balance_report: grid must be strictly increasing");

  BalanceVerdict v;
  v.grid.assign(grid.begin(), grid.end());
  v.tolerance = tolerance;
  const double below = 1.0 / M.dim;
  const double above = 1.0 / (M.dim - 1);
  v.min_margin_below = std::numeric_limits<double>::infinity();
  v.max_margin_above = -std::numeric_limits<double>::infinity();
  bool k_le_0 = true;
  bool k_ge = true;
  for (double r : grid) {
    const double eta = mean_curvature_eta(M.warping, r);
    const double qe = isoperimetric_quotient(M, r) * eta;
    v.q_eta.push_back(qe);
    v.min_margin_below = std::min(v.min_margin_below, qe - below);
    v.max_margin_above = std::max(v.max_margin_above, qe - above);
    const double K = radial_curvature(M.warping, r);
    k_le_0 = k_le_0 && K <= 0.0;
    k_ge = k_ge && K >= -eta * eta;
  }
  v.below_ok = v.min_margin_below >= -tolerance;
  v.above_ok = v.max_margin_above <= tolerance;
  v.totally_balanced = v.below_ok && v.above_ok;
  v.K_le_0_holds = k_le_0;
  v.K_ge_minus_eta_sq_holds = k_ge;
  if (k_le_0) v.sufficient_condition_used = BalanceCondition::K_le_0;
  else if (k_ge) v.sufficient_condition_used = BalanceCondition::K_ge_minus_eta_sq;
  return v;
}

double comparison_hessian_radial(const WarpingFunction& w, double r, double norm_x, double radial_comp) {
  if (norm_x < 0.0 || std::abs(radial_comp) > norm_x * (1.0 + 1e-12) + 1e-15)
    throw std::invalid_argument("comparison_hessian_radial: need |radial_comp| <= norm_x");
  const double tangential = std::max(0.0, norm_x * norm_x - radial_comp * radial_comp);
  return mean_curvature_eta(w, r) * tangential;
}

RadialFunction integral_of_warping(const WarpingFunction& w) {
  return {[w](double r, int order) {
            switch (order) {
              case 0: return r <= 0.0 ? 0.0 : integrate([&](double t) { return w.value(t); }, 0.0, r);
              case 1: return w.value(r);
              default: return w.d1(r);
            }
          },
          "integral_w"};
}

RadialFunction half_r_squared() {
  return {[](double r, int order) { return order == 0 ? 0.5 * r * r : (order == 1 ? r : 1.0); }, "half_r_squared"};
}

}  // namespace warplab
