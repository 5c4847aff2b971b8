#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "warplab/model_space.hpp"

namespace warplab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class ChristoffelMode { analytic_space_form, finite_difference };

/// Christoffel symbols of the second kind; gamma[k](i, j) = Gamma^k_ij.
struct Christoffel {
  std::vector<Mat> gamma;

  /// Gamma^k_ij a^i b^j.
  Vec contract(const Vec& a, const Vec& b) const;
};

/// The model M_w^n realized on the global polar-vector chart: a point is an n-tuple X with
/// r(X) = |X| and
///   g(X)(V, W) = <V,X^><W,X^> + (w(r)^2 / r^2) (<V,W> - <V,X^><W,X^>),   X^ = X/|X|.
/// Radial geodesics are coordinate rays, so |X| is the distance to the pole (the origin).
class AmbientChart {
 public:
  /// Below this radius, curvature and Hessian operations are rejected.
  static constexpr double pole_exclusion = 1e-8;

  /// Uses analytic metric derivatives when the warping has analytic derivatives
  /// (space forms, expression warps), finite differences otherwise.
  explicit AmbientChart(ModelSpace model);
  AmbientChart(ModelSpace model, ChristoffelMode mode);

  int dim() const noexcept { return model_.dim; }
  const ModelSpace& model() const noexcept { return model_; }
  const WarpingFunction& warping() const noexcept { return model_.warping; }
  ChristoffelMode christoffel_mode() const noexcept { return mode_; }

  static double r_of(const Vec& x) { return x.norm(); }

  Mat metric(const Vec& x) const;
  Mat inverse_metric(const Vec& x) const;
  double metric_at(const Vec& x, const Vec& v, const Vec& w) const;

  /// d[l](i, j) = d g_ij / d x^l.
  std::vector<Mat> metric_derivative(const Vec& x) const;
  Christoffel christoffel(const Vec& x) const;

  /// Covariant derivative of `field` (coordinate components as a function of the point)
  /// in direction `dir` at x. The field is differentiated by central differences.
  Vec covariant_derivative(const Vec& x, const Vec& dir, const std::function<Vec(const Vec&)>& field) const;

  /// Unit radial vector X^ (g-unit). Throws DomainError at the pole.
  Vec grad_r(const Vec& x) const;

  /// Hess r(V, V) from finite differences of |X| and the Christoffel correction; an
  /// oracle independent of the model formula eta_w (|V|^2 - <V, grad r>^2).
  double hessian_r_fd(const Vec& x, const Vec& v) const;

 private:
  /// w(r)^2 / r^2 and its r-derivative, with the r -> 0 limits.
  std::pair<double, double> tangential_factor(double r) const;
  std::vector<Mat> metric_derivative_analytic(const Vec& x) const;
  std::vector<Mat> metric_derivative_fd(const Vec& x) const;

  ModelSpace model_;
  ChristoffelMode mode_;
};

}  // namespace warplab
