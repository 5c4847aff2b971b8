#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "warplab/errors.hpp"

using namespace warplab;
using wltest::Gen;

namespace {

Vec v3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

const Vec e1 = v3(1, 0, 0), e2 = v3(0, 1, 0), e3 = v3(0, 0, 1);

// A smooth, non-constant test field.
Vec swirl(const Vec& x) { return v3(std::sin(x[1]) + x[2], x[0] * x[2], std::cos(x[0]) - x[1] * x[1]); }
Vec drift(const Vec& x) { return v3(x[1] * x[1], 1.0 + x[0], std::exp(-x[2])); }

// d/ds f(x + s v) by central differences.
double directional(const std::function<double(const Vec&)>& f, const Vec& x, const Vec& v, double h = 1e-5) {
  return (f(x + h * v) - f(x - h * v)) / (2 * h);
}

}  // namespace

TEST_CASE("ambient metric examples") {
  const auto E = wltest::euclidean(3);
  const auto H = wltest::hyperbolic(3);
  Gen gen(1);
  const Vec x = gen.point_at_radius(3, 2.0);
  CHECK(E.metric_at(x, e1, e1) == doctest::Approx(1.0));
  CHECK(H.metric_at(e1, e2, e2) == doctest::Approx(std::pow(std::sinh(1.0), 2)).epsilon(1e-12));
  CHECK(H.metric_at(2 * e1, e1, e2) == doctest::Approx(0.0));
  CHECK(H.metric_at(2 * e1, e1, e1) == doctest::Approx(1.0));
}

TEST_CASE("covariant derivative examples") {
  const auto E = wltest::euclidean(3);
  const auto H = wltest::hyperbolic(3);
  const Vec x = v3(0.3, -1.2, 0.8);
  CHECK(E.covariant_derivative(x, e2, [](const Vec&) { return e3; }).norm() <= 1e-12);

  for (const auto* A : {&E, &H}) {
    const auto radial = [A](const Vec& p) { return A->grad_r(p); };
    CHECK(A->covariant_derivative(x, A->grad_r(x), radial).norm() <= 1e-6);
  }

  // dr(nabla_Y Y) = Y(Y r) - Hess r(Y, Y) for the constant coordinate field Y = e2; at
  // X = e1 the first term is d^2|x|/dx2^2 = 1 and the second is coth(1) sinh^2(1).
  const Vec nabla = H.covariant_derivative(e1, e2, [](const Vec&) { return e2; });
  const double radial_component = H.metric_at(e1, nabla, H.grad_r(e1));
  CHECK(radial_component == doctest::Approx(1.0 - std::sinh(1.0) * std::cosh(1.0)).epsilon(1e-8));
  const double second = (std::hypot(1.0, 1e-4) - 2.0 + std::hypot(1.0, -1e-4)) / 1e-8;
  CHECK(radial_component == doctest::Approx(second - H.hessian_r_fd(e1, e2)).epsilon(1e-4));
}

TEST_CASE("grad r") {
  const auto H = wltest::hyperbolic(3);
  CHECK((H.grad_r(3 * e1) - e1).norm() <= 1e-15);
  const Vec d = v3(1, 1, 0) / std::sqrt(2.0);
  CHECK((H.grad_r(5 * d) - d).norm() <= 1e-15);
  Gen gen(2);
  for (int k = 0; k < 20; ++k) {
    const Vec x = gen.point_at_radius(3, gen.uniform(0.1, 6.0));
    const Vec g = H.grad_r(x);
    CHECK(H.metric_at(x, g, g) == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(H.grad_r(Vec::Zero(3)), DomainError);
}

TEST_CASE("hessian of r by finite differences") {
  const auto E = wltest::euclidean(3);
  const auto H = wltest::hyperbolic(3);
  CHECK(E.hessian_r_fd(2 * e1, e2) == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(std::abs(H.hessian_r_fd(2 * e1, e1)) <= 1e-6);
  const Vec unit_tangential = e2 / std::sinh(1.0);
  CHECK(std::abs(H.hessian_r_fd(e1, unit_tangential) - 1.0 / std::tanh(1.0)) <= 1e-4);
  CHECK_THROWS(H.hessian_r_fd(Vec::Zero(3), e1));
}

TEST_CASE("euclidean christoffel symbols vanish") {
  const auto E = wltest::euclidean(4);
  Gen gen(3);
  for (int k = 0; k < 20; ++k) {
    const auto G = E.christoffel(gen.point_at_radius(4, gen.uniform(0.1, 20.0)));
    for (const auto& M : G.gamma) CHECK(M.cwiseAbs().maxCoeff() <= 1e-10);
  }
}

// Property: X g(Y, Z) = g(nabla_X Y, Z) + g(Y, nabla_X Z).
TEST_CASE("metric compatibility") {
  const auto custom = AmbientChart(ModelSpace::make(3, WarpingFunction::parse("custom:r + 0.1*r^3")));
  const auto fd = AmbientChart(ModelSpace::make(3, WarpingFunction::space_form(-1.0)), ChristoffelMode::finite_difference);
  Gen gen(4);
  for (const AmbientChart* A : {&custom, &fd}) {
    for (int k = 0; k < 25; ++k) {
      const Vec x = gen.point_at_radius(3, gen.uniform(0.5, 3.0));
      const Vec dir = gen.direction(3);
      const auto gYZ = [&](const Vec& p) { return A->metric_at(p, swirl(p), drift(p)); };
      const double lhs = directional(gYZ, x, dir);
      const double rhs = A->metric_at(x, A->covariant_derivative(x, dir, swirl), drift(x)) +
                         A->metric_at(x, swirl(x), A->covariant_derivative(x, dir, drift));
      CHECK(std::abs(lhs - rhs) <= 1e-4 * std::max(1.0, std::abs(lhs)));
    }
  }
}

// Property: nabla_Y Z - nabla_Z Y = [Y, Z] with the bracket from coordinate derivatives.
TEST_CASE("torsion freeness") {
  const auto H = wltest::hyperbolic(3);
  Gen gen(6);
  for (int k = 0; k < 25; ++k) {
    const Vec x = gen.point_at_radius(3, gen.uniform(0.5, 3.0));
    const double h = 1e-5;
    Vec bracket = Vec::Zero(3);
    const Vec Y = swirl(x), Z = drift(x);
    bracket += (drift(x + h * Y) - drift(x - h * Y)) / (2 * h);
    bracket -= (swirl(x + h * Z) - swirl(x - h * Z)) / (2 * h);
    const Vec lhs = H.covariant_derivative(x, Y, drift) - H.covariant_derivative(x, Z, swirl);
    CHECK((lhs - bracket).norm() <= 1e-5 * std::max(1.0, bracket.norm()));
  }
}

TEST_CASE("hessian of r matches the model expression") {
  for (double b : {0.0, -1.0, 1.0}) {
    const auto A = AmbientChart(ModelSpace::make(3, WarpingFunction::space_form(b)));
    Gen gen(7);
    for (int k = 0; k < 30; ++k) {
      const double r = gen.uniform(0.5, b > 0 ? 2.5 : 4.0);
      const Vec x = gen.point_at_radius(3, r);
      const Vec v = gen.direction(3) * gen.uniform(0.2, 2.0);
      const double norm = std::sqrt(A.metric_at(x, v, v));
      const double radial = A.metric_at(x, v, A.grad_r(x));
      const double model = comparison_hessian_radial(A.warping(), r, norm, radial);
      CHECK(std::abs(A.hessian_r_fd(x, v) - model) <= 1e-4 * std::max(1.0, std::abs(model)));
    }
  }
}
