#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "warplab/immersion.hpp"

namespace warplab {

/// Generating profile of the rotationally symmetric minimal hypersurface in R^(m+1) with neck
/// radius 1, in arclength sigma along the profile curve (s(sigma), y(sigma)):
///   y'' = (m-1) y^(1-2m),  s' = y^(1-m),  y(0) = 1, y'(0) = 0, s(0) = 0.
/// The first integral y^(m-1) / sqrt(1 + (dy/ds)^2) equals 1 / sqrt(y'^2 + y^(2-2m)).
/// Solved once by an adaptive Dormand-Prince stepper on a uniform sample grid, then
/// evaluated by quintic Hermite interpolation; y is even and s is odd in sigma.
class RotationalMinimalProfile {
 public:
  struct Sample {
    double y, dy, ddy;  // derivatives in sigma
    double s, ds, dds;
  };

  RotationalMinimalProfile(int m, double sigma_max, double spacing = 1.0 / 256.0, double tolerance = 1e-10);

  Sample operator()(double sigma) const;
  int dim() const noexcept { return m_; }
  double sigma_max() const noexcept { return sigma_max_; }
  /// max |first integral - 1| over the stored samples.
  double first_integral_drift() const noexcept { return drift_; }
  double first_integral(double sigma) const;

 private:
  Sample at_node(std::size_t i) const;

  int m_;
  double sigma_max_;
  double spacing_;
  std::vector<double> y_, dy_, s_;
  double drift_ = 0.0;
};

struct BuiltinParams {
  int m = 2;             // parameter dimension (euclidean_plane, higher_catenoid, hyperbolic_hyperplane)
  double scale = 1.0;    // catenoid neck radius
  double radius = 1.0;   // round_sphere radius
  double extent = 10.0;  // half-width of the plane parameter box
  double v_max = 4.0;    // catenoid axial range
  double sigma_max = 10.0;  // higher_catenoid profile range
  double cap = 0.01;     // polar angles are kept inside [cap, pi - cap]
};

/// euclidean_plane, catenoid, higher_catenoid, hyperbolic_hyperplane, round_sphere.
const std::vector<std::string>& builtin_names();

/// Builds a built-in example inside `ambient`. Throws ImmersionError for unknown names or
/// incompatible ambient dimension/curvature.
ParametricImmersion builtin_example(std::string_view name, const BuiltinParams& params, const AmbientChart& ambient);

/// Coordinates on S^(k) from k hyperspherical angles; derivatives by angle index.
Vec hyperspherical(const Vec& angles);
Vec hyperspherical_d(const Vec& angles, int a);
Vec hyperspherical_dd(const Vec& angles, int a, int b);

}  // namespace warplab
