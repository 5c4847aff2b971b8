#pragma once

#include <cmath>
#include <random>
#include <string>

#include "warplab/ambient.hpp"
#include "warplab/builtin.hpp"
#include "warplab/mesh.hpp"

namespace wltest {

using namespace warplab;

inline double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

// Seeded source for the property tests; each test owns its stream.
struct Gen {
  std::mt19937_64 eng;
  explicit Gen(std::uint64_t seed) : eng(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng); }
  Vec direction(int n) {
    Vec v(n);
    std::normal_distribution<double> nd;
    for (int i = 0; i < n; ++i) v[i] = nd(eng);
    return v / v.norm();
  }
  Vec point_at_radius(int n, double r) { return r * direction(n); }
};

inline AmbientChart euclidean(int n) { return AmbientChart(ModelSpace::make(n, WarpingFunction::space_form(0.0))); }
inline AmbientChart hyperbolic(int n) { return AmbientChart(ModelSpace::make(n, WarpingFunction::space_form(-1.0))); }

inline ParametricImmersion plane(double extent = 10.0) {
  BuiltinParams p;
  p.extent = extent;
  return builtin_example("euclidean_plane", p, euclidean(3));
}

inline ParametricImmersion catenoid(double v_max = 4.0) {
  BuiltinParams p;
  p.v_max = v_max;
  return builtin_example("catenoid", p, euclidean(3));
}

inline ParametricImmersion sphere(double radius = 1.0) {
  BuiltinParams p;
  p.radius = radius;
  return builtin_example("round_sphere", p, euclidean(3));
}

inline ParametricImmersion hyperbolic_plane(double extent = 10.0) {
  BuiltinParams p;
  p.extent = extent;
  return builtin_example("hyperbolic_hyperplane", p, hyperbolic(3));
}

// Distance to the pole on the catenoid at height v.
inline double catenoid_r(double v) { return std::sqrt(std::cosh(v) * std::cosh(v) + v * v); }

// Height v >= 0 where the catenoid meets the sphere r = t, by bisection.
inline double catenoid_v_at(double t) {
  double lo = 0.0, hi = std::acosh(t) + 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (catenoid_r(mid) < t ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Area of the catenoid part with r < t: 2 pi * int_{-v}^{v} cosh^2 = 2 pi (sinh v cosh v + v).
inline double catenoid_ball_area(double t) {
  const double v = catenoid_v_at(t);
  return 2.0 * M_PI * (std::sinh(v) * std::cosh(v) + v);
}

}  // namespace wltest
