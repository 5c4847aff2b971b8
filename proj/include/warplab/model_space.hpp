#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "warplab/warping.hpp"

namespace warplab {

/// Volume of the unit (m-1)-sphere, 2 pi^(m/2) / Gamma(m/2).
double unit_sphere_volume(int m);

/// Rotationally symmetric model M_w^m.
struct ModelSpace {
  int dim = 2;
  WarpingFunction warping = WarpingFunction::space_form(0.0);
  double unit_sphere_volume = 0.0;  // V0 for S^(m-1)

  static ModelSpace make(int dim, WarpingFunction w);
};

/// Mean curvature of the distance sphere of radius r: w'/w.
double mean_curvature_eta(const WarpingFunction& w, double r);
/// Sectional curvature of radial planes: -w''/w.
double radial_curvature(const WarpingFunction& w, double r);
/// Sectional curvature of planes tangent to the fiber: (1 - w'^2)/w^2.
double fiber_curvature(const WarpingFunction& w, double r);

double vol_fiber(const ModelSpace& M, double r);
/// V0 * integral_0^r w^(m-1); adaptive Gauss-Kronrod, relative error <= 1e-10.
double vol_ball(const ModelSpace& M, double r);
/// vol_ball / vol_fiber.
double isoperimetric_quotient(const ModelSpace& M, double r);

/// Adaptive Gauss-Kronrod integral of a smooth integrand on [a, b]. Throws NumericError
/// when the error estimate exceeds max(abs_floor, rel_tol * |I|).
double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-12,
                 double abs_floor = 1e-14);

enum class BalanceCondition { none, K_le_0, K_ge_minus_eta_sq };
std::string to_string(BalanceCondition c);

struct BalanceVerdict {
  std::vector<double> grid;
  std::vector<double> q_eta;  // q_w * eta_w on the grid
  bool below_ok = false;      // q*eta >= 1/m
  bool above_ok = false;      // q*eta <= 1/(m-1)
  bool totally_balanced = false;
  double min_margin_below = 0.0;  // min (q*eta - 1/m)
  double max_margin_above = 0.0;  // max (q*eta - 1/(m-1)); <= 0 when balanced from above
  double tolerance = 0.0;
  /// Analytic sufficient condition holding on the whole grid, K_le_0 preferred.
  BalanceCondition sufficient_condition_used = BalanceCondition::none;
  bool K_le_0_holds = false;
  bool K_ge_minus_eta_sq_holds = false;
};

/// Grid certification of balance from below/above. The grid must be nonempty, strictly
/// increasing and inside (0, Lambda).
BalanceVerdict balance_report(const ModelSpace& M, std::span<const double> grid, double tolerance = 1e-12);

/// Model Hessian of r applied to X: eta_w(r) (|X|^2 - <X, grad r>^2).
/// `norm_x` is |X|, `radial_comp` is <X, grad r>; requires |radial_comp| <= norm_x.
double comparison_hessian_radial(const WarpingFunction& w, double r, double norm_x, double radial_comp);

/// Radial function F(r) with its first two derivatives.
struct RadialFunction {
  std::function<double(double r, int order)> eval;
  std::string name;

  double operator()(double r, int order = 0) const { return eval(r, order); }
};

/// F(r) = integral_0^r w, F' = w, F'' = w'.
RadialFunction integral_of_warping(const WarpingFunction& w);
/// F(r) = r^2 / 2.
RadialFunction half_r_squared();

}  // namespace warplab
