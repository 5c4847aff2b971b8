#pragma once

#include <functional>
#include <string>
#include <vector>

#include "warplab/ambient.hpp"
#include "warplab/model_space.hpp"

namespace warplab {

/// One parameter axis; wrapped axes are periodic on [lo, hi). Polar axes are trimmed
/// coordinate singularities (hyperspherical polar angles): their ends are not part of the
/// manifold boundary.
struct ParamAxis {
  double lo = 0.0;
  double hi = 1.0;
  bool wrap = false;
  bool polar = false;

  double period() const { return hi - lo; }
};

enum class JacobianMode { analytic, finite_difference };

/// Smooth chart u -> X(u) from a box parameter domain into the ambient polar chart.
class ParametricImmersion {
 public:
  using ChartFn = std::function<Vec(const Vec&)>;
  /// n x m matrix of first derivatives.
  using JacobianFn = std::function<Mat(const Vec&)>;
  /// m*m second-derivative vectors, entry i*m + j is d^2 X / du_i du_j.
  using SecondFn = std::function<std::vector<Vec>(const Vec&)>;

  ParametricImmersion(std::string name, AmbientChart ambient, std::vector<ParamAxis> domain, ChartFn chart);

  /// Switches to analytic derivatives.
  ParametricImmersion& with_derivatives(JacobianFn jacobian, SecondFn second);
  ParametricImmersion& with_fd_step(double h);
  /// Marks the immersed manifold as closed: no meshed horizon, radii may exceed max r.
  ParametricImmersion& set_compact(bool compact);

  const std::string& name() const noexcept { return name_; }
  int param_dim() const noexcept { return static_cast<int>(domain_.size()); }
  int ambient_dim() const noexcept { return ambient_.dim(); }
  const AmbientChart& ambient() const noexcept { return ambient_; }
  const std::vector<ParamAxis>& domain() const noexcept { return domain_; }
  void set_domain(std::vector<ParamAxis> domain);
  JacobianMode jacobian_mode() const noexcept { return jacobian_ ? JacobianMode::analytic : JacobianMode::finite_difference; }
  double fd_step() const noexcept { return fd_step_; }
  bool compact() const noexcept { return compact_; }

  Vec point(const Vec& u) const;
  Mat jacobian(const Vec& u) const;
  std::vector<Vec> second_derivatives(const Vec& u) const;

 private:
  std::string name_;
  AmbientChart ambient_;
  std::vector<ParamAxis> domain_;
  ChartFn chart_;
  JacobianFn jacobian_;
  SecondFn second_;
  double fd_step_ = 1e-5;
  bool compact_ = false;
};

/// Induced metric g_ij = g(dX(d_i), dX(d_j)). Throws ImmersionError when det <= 1e-12.
Mat induced_metric(const ParametricImmersion& I, const Vec& u);

/// Everything second-order at one parameter point, in a g-orthonormal tangent frame built by
/// Gram-Schmidt on the coordinate tangents (coordinate order).
struct SurfaceGeometry {
  Vec point;
  double r = 0.0;
  Mat jacobian;  // n x m coordinate tangents
  Mat induced;   // m x m
  /// frame(i, a): e_a = sum_i jacobian.col(i) * frame(i, a).
  Mat frame;
  /// B(e_a, e_b) as ambient coordinate vectors, index a*m + b.
  std::vector<Vec> sff;
  double sff_norm = 0.0;
  /// g-norm of the trace of B (mean curvature vector).
  double mean_curvature = 0.0;
};

SurfaceGeometry surface_geometry(const ParametricImmersion& I, const Vec& u);

/// Hilbert-Schmidt norm of the second fundamental form, B(X, Y) = (nabla_X Y)^perp.
double sff_norm(const ParametricImmersion& I, const Vec& u);

struct ExtrinsicQuantities {
  double r = 0.0;
  /// g-norm of the tangential projection of grad r, in [0, 1].
  double grad_r_tangent_norm = 0.0;
};

/// Throws DomainError when X(u) is within AmbientChart::pole_exclusion of the pole.
ExtrinsicQuantities extrinsic_quantities(const ParametricImmersion& I, const Vec& u);
ExtrinsicQuantities extrinsic_quantities(const SurfaceGeometry& geo);

/// Hess^P (F o r)(e_a, e_b) = F'' <grad r, e_a><grad r, e_b>
///                            + F' (Hess^N r(e_a, e_b) + <grad r, B(e_a, e_b)>)
/// with Hess^N r the model expression eta_w(r) (g - dr (x) dr); m x m in the orthonormal frame.
Mat restricted_hessian_F(const ParametricImmersion& I, const Vec& u, const RadialFunction& F);
Mat restricted_hessian_F(const ParametricImmersion& I, const SurfaceGeometry& geo, const RadialFunction& F);

}  // namespace warplab
