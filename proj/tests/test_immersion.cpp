#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "support.hpp"
#include "warplab/errors.hpp"

using namespace warplab;
using wltest::Gen;

namespace {

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

ParametricImmersion higher_catenoid(int m = 3) {
  BuiltinParams p;
  p.m = m;
  p.sigma_max = 6.0;
  return builtin_example("higher_catenoid", p, wltest::euclidean(m + 1));
}

Vec random_param(const ParametricImmersion& I, Gen& gen, double shrink = 0.8) {
  Vec u(I.param_dim());
  for (int i = 0; i < I.param_dim(); ++i) {
    const auto& a = I.domain()[static_cast<std::size_t>(i)];
    const double mid = 0.5 * (a.lo + a.hi), half = 0.5 * (a.hi - a.lo) * shrink;
    u[i] = gen.uniform(mid - half, mid + half);
  }
  return u;
}

// Intrinsic Hessian of F(r(X(u))) from finite differences of the composite and of the
// induced metric, then expressed in the frame the library uses.
Mat fd_hessian(const ParametricImmersion& I, const Vec& u, const RadialFunction& F, const Mat& frame) {
  const int m = I.param_dim();
  const auto f = [&](const Vec& p) { return F(I.point(p).norm()); };
  const double h = 1e-3, hg = 1e-5;
  Vec df(m);
  Mat d2f(m, m);
  for (int i = 0; i < m; ++i) {
    const Vec ei = Vec::Unit(m, i);
    df[i] = (f(u + h * ei) - f(u - h * ei)) / (2 * h);
    for (int j = 0; j < m; ++j) {
      const Vec ej = Vec::Unit(m, j);
      d2f(i, j) = (f(u + h * ei + h * ej) - f(u + h * ei - h * ej) - f(u - h * ei + h * ej) + f(u - h * ei - h * ej)) /
                  (4 * h * h);
    }
  }
  std::vector<Mat> dG(static_cast<std::size_t>(m));
  for (int l = 0; l < m; ++l) {
    const Vec el = Vec::Unit(m, l);
    dG[static_cast<std::size_t>(l)] = (induced_metric(I, u + hg * el) - induced_metric(I, u - hg * el)) / (2 * hg);
  }
  const Mat Ginv = induced_metric(I, u).inverse();
  Mat H = d2f;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        double gamma = 0.0;
        for (int l = 0; l < m; ++l)
          gamma += 0.5 * Ginv(k, l) *
                   (dG[static_cast<std::size_t>(i)](j, l) + dG[static_cast<std::size_t>(j)](i, l) -
                    dG[static_cast<std::size_t>(l)](i, j));
        H(i, j) -= gamma * df[k];
      }
  return frame.transpose() * H * frame;
}

}  // namespace

TEST_CASE("induced metric examples") {
  CHECK((induced_metric(wltest::plane(), v2(1.5, -2.0)) - Mat::Identity(2, 2)).norm() <= 1e-14);
  const auto C = wltest::catenoid();
  for (double v : {-2.0, 0.0, 0.7, 3.1}) {
    const Mat G = induced_metric(C, v2(v, 1.3));
    const double c2 = std::cosh(v) * std::cosh(v);
    CHECK((G - c2 * Mat::Identity(2, 2)).norm() <= 1e-10 * c2);
  }
  const auto H = wltest::hyperbolic_plane();
  const AmbientChart H2(ModelSpace::make(2, WarpingFunction::space_form(-1.0)));
  Gen gen(8);
  for (int k = 0; k < 10; ++k) {
    const Vec u = random_param(H, gen);
    if (u.norm() < 1e-3) continue;
    const Mat want = H2.metric(u);
    CHECK((induced_metric(H, u) - want).norm() <= 1e-8 * want.norm());
  }
}

TEST_CASE("second fundamental form examples") {
  Gen gen(9);
  const auto P = wltest::plane();
  for (int k = 0; k < 10; ++k) CHECK(sff_norm(P, random_param(P, gen)) <= 1e-10);
  const auto C = wltest::catenoid();
  CHECK(sff_norm(C, v2(0.0, 0.4)) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
  for (int k = 0; k < 10; ++k) {
    const Vec u = random_param(C, gen);
    CHECK(sff_norm(C, u) == doctest::Approx(std::sqrt(2.0) / std::pow(std::cosh(u[0]), 2)).epsilon(1e-7));
  }
  for (double R : {1.0, 2.5}) {
    const auto S = wltest::sphere(R);
    for (int k = 0; k < 10; ++k)
      CHECK(sff_norm(S, random_param(S, gen)) == doctest::Approx(std::sqrt(2.0) / R).epsilon(1e-7));
  }
}

TEST_CASE("extrinsic quantities") {
  const auto P = wltest::plane();
  const auto q = extrinsic_quantities(P, v2(3.0, 4.0));
  CHECK(q.r == doctest::Approx(5.0));
  CHECK(q.grad_r_tangent_norm == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(extrinsic_quantities(P, v2(0.0, 0.0)), DomainError);
  const auto C = wltest::catenoid(6.0);
  CHECK(extrinsic_quantities(C, v2(0.0, 0.0)).grad_r_tangent_norm <= 1e-12);
  CHECK(extrinsic_quantities(C, v2(5.0, 2.0)).grad_r_tangent_norm >= 0.99);
  CHECK(extrinsic_quantities(C, v2(1.0, 2.0)).r == doctest::Approx(wltest::catenoid_r(1.0)));
}

TEST_CASE("builtin examples") {
  CHECK(builtin_names().size() == 5);
  CHECK_THROWS_AS(builtin_example("torus", {}, wltest::euclidean(3)), ImmersionError);
  CHECK_THROWS_AS(builtin_example("catenoid", {}, wltest::hyperbolic(3)), ImmersionError);
  CHECK(wltest::sphere().compact());
  BuiltinParams p;
  p.m = 2;
  const auto P = builtin_example("euclidean_plane", p, wltest::euclidean(3));
  const Vec x = P.point(v2(1.5, -0.5));
  CHECK(x.size() == 3);
  CHECK(x[0] == 1.5);
  CHECK(x[1] == -0.5);
  CHECK(x[2] == 0.0);
}

TEST_CASE("higher catenoid profile keeps its first integral") {
  for (int m : {3, 4}) {
    RotationalMinimalProfile prof(m, 10.0);
    CHECK(prof.first_integral_drift() <= 1e-8);
    Gen gen(10);
    for (int k = 0; k < 50; ++k) CHECK(std::abs(prof.first_integral(gen.uniform(-10.0, 10.0)) - 1.0) <= 1e-8);
    const auto s = prof(0.0);
    CHECK(s.y == doctest::Approx(1.0));
    CHECK(s.s == doctest::Approx(0.0));
  }
}

// Property: the trace of B vanishes on the minimal builtins.
TEST_CASE("minimal builtins have zero mean curvature") {
  Gen gen(12);
  const std::vector<ParametricImmersion> minimal{wltest::catenoid(), higher_catenoid(3), higher_catenoid(4),
                                                 wltest::hyperbolic_plane(), wltest::plane()};
  for (const auto& I : minimal) {
    for (int k = 0; k < 20; ++k) {
      const Vec u = random_param(I, gen);
      if (I.point(u).norm() < 1e-3) continue;
      INFO(I.name() << " at u = " << u.transpose());
      CHECK(surface_geometry(I, u).mean_curvature <= 1e-5);
    }
  }
  const auto S = wltest::sphere();
  CHECK(surface_geometry(S, v2(1.0, 1.0)).mean_curvature == doctest::Approx(2.0).epsilon(1e-7));
}

// Property: grad_r_tangent_norm lies in [0, 1].
TEST_CASE("tangential gradient of r is bounded") {
  Gen gen(13);
  const std::vector<ParametricImmersion> all{wltest::catenoid(), higher_catenoid(), wltest::hyperbolic_plane(),
                                             wltest::sphere(), wltest::plane()};
  for (const auto& I : all) {
    for (int k = 0; k < 30; ++k) {
      const Vec u = random_param(I, gen, 1.0);
      if (I.point(u).norm() < 1e-3) continue;
      const double g = extrinsic_quantities(I, u).grad_r_tangent_norm;
      CHECK(g >= 0.0);
      CHECK(g <= 1.0);
    }
  }
}

TEST_CASE("restricted hessian examples") {
  const auto P = wltest::plane();
  const auto F = half_r_squared();
  CHECK((restricted_hessian_F(P, v2(2.0, -3.0), F) - Mat::Identity(2, 2)).norm() <= 1e-10);
  // Radial direction on a totally geodesic plane: Hess(X, X) = F''.
  const auto H = wltest::hyperbolic_plane();
  const auto Fw = integral_of_warping(H.ambient().warping());
  const Vec u = v2(2.0, 0.0);
  const auto geo = surface_geometry(H, u);
  const Mat Hf = restricted_hessian_F(H, geo, Fw);
  const Vec radial = (geo.jacobian * geo.frame).transpose() * (geo.point / geo.r);
  CHECK(radial.norm() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(radial.dot(Hf * radial) == doctest::Approx(Fw(geo.r, 2)).epsilon(1e-8));
}

// Property: the assembled Hessian agrees with the intrinsic finite-difference Hessian.
TEST_CASE("restricted hessian agrees with finite differences on every builtin") {
  Gen gen(14);
  const std::vector<ParametricImmersion> all{wltest::catenoid(3.0), higher_catenoid(), wltest::hyperbolic_plane(4.0),
                                             wltest::sphere(), wltest::plane()};
  for (const auto& I : all) {
    const std::vector<RadialFunction> Fs{half_r_squared(), integral_of_warping(I.ambient().warping())};
    for (const auto& F : Fs) {
      for (int k = 0; k < 8; ++k) {
        const Vec u = random_param(I, gen, 0.7);
        if (I.point(u).norm() < 0.2) continue;
        const auto geo = surface_geometry(I, u);
        const Mat got = restricted_hessian_F(I, geo, F);
        const Mat want = fd_hessian(I, u, F, geo.frame);
        INFO(I.name() << " " << F.name << " at u = " << u.transpose());
        CHECK((got - want).cwiseAbs().maxCoeff() <= 1e-3 * std::max(1.0, want.cwiseAbs().maxCoeff()));
      }
    }
  }
}

TEST_CASE("catenoid convexity near v = 2") {
  const auto C = wltest::catenoid();
  const Mat Hf = restricted_hessian_F(C, v2(2.0, 0.3), half_r_squared());
  const double lo = Eigen::SelfAdjointEigenSolver<Mat>(Hf).eigenvalues().minCoeff();
  const double r = wltest::catenoid_r(2.0);
  const double B = std::sqrt(2.0) / std::pow(std::cosh(2.0), 2);
  CHECK(lo >= 1.0 - r * B - 1e-6);
}
