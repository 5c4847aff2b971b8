#include <doctest.h>

#include <cmath>
#include <vector>

#include "support.hpp"
#include "warplab/errors.hpp"
#include "warplab/model_space.hpp"

using namespace warplab;
using wltest::rel_err;

namespace {

const WarpingFunction w0 = WarpingFunction::space_form(0.0);
const WarpingFunction wm1 = WarpingFunction::space_form(-1.0);
const WarpingFunction w1 = WarpingFunction::space_form(1.0);

std::vector<double> grid(double lo, double hi, int n) {
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(lo + (hi - lo) * i / (n - 1));
  return g;
}

}  // namespace

TEST_CASE("warping function evaluation") {
  CHECK(w0(2.0) == doctest::Approx(2.0));
  CHECK(wm1(0.0, 1) == doctest::Approx(1.0));
  CHECK(wm1(1.0) == doctest::Approx(std::sinh(1.0)).epsilon(1e-14));
  CHECK(w1.domain_end() == doctest::Approx(M_PI).epsilon(1e-8));
  CHECK(wm1.curvature().value() == -1.0);
}

TEST_CASE("mean curvature of distance spheres") {
  CHECK(mean_curvature_eta(w0, 2.0) == doctest::Approx(0.5));
  CHECK(mean_curvature_eta(wm1, 1.0) == doctest::Approx(1.0 / std::tanh(1.0)).epsilon(1e-12));
  CHECK(std::abs(mean_curvature_eta(wm1, 20.0) - 1.0) <= 1e-8);
  CHECK_THROWS_AS(mean_curvature_eta(w0, 0.0), DomainError);
  CHECK_THROWS_AS(mean_curvature_eta(w1, 4.0), DomainError);
}

TEST_CASE("radial and fiber curvature") {
  for (double r : {0.3, 1.0, 2.5}) CHECK(radial_curvature(w1, r) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(radial_curvature(w0, 3.0) == doctest::Approx(0.0));
  CHECK(radial_curvature(wm1, 3.0) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(fiber_curvature(w0, 1.7) == doctest::Approx(0.0));
  CHECK(fiber_curvature(wm1, 2.0) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(fiber_curvature(w1, M_PI / 2) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("fiber and ball volumes") {
  const auto E3 = ModelSpace::make(3, w0);
  const auto E2 = ModelSpace::make(2, w0);
  const auto H3 = ModelSpace::make(3, wm1);
  CHECK(vol_fiber(E3, 2.0) == doctest::Approx(16 * M_PI).epsilon(1e-12));
  CHECK(vol_fiber(E2, 1.0) == doctest::Approx(2 * M_PI).epsilon(1e-12));
  CHECK(vol_fiber(H3, 1.0) == doctest::Approx(4 * M_PI * std::pow(std::sinh(1.0), 2)).epsilon(1e-12));
  CHECK(rel_err(vol_ball(E3, 2.0), 32 * M_PI / 3) <= 1e-10);
  CHECK(rel_err(vol_ball(H3, 1.0), M_PI * (std::sinh(2.0) - 2.0)) <= 1e-10);
  CHECK(rel_err(vol_ball(E2, 3.0), 9 * M_PI) <= 1e-10);
}

TEST_CASE("isoperimetric quotient") {
  CHECK(isoperimetric_quotient(ModelSpace::make(3, w0), 2.0) == doctest::Approx(2.0 / 3).epsilon(1e-10));
  CHECK(isoperimetric_quotient(ModelSpace::make(4, w0), 1.0) == doctest::Approx(0.25).epsilon(1e-10));
  const double oracle = M_PI * (std::sinh(2.0) - 2.0) / (4 * M_PI * std::pow(std::sinh(1.0), 2));
  CHECK(isoperimetric_quotient(ModelSpace::make(3, wm1), 1.0) == doctest::Approx(oracle).epsilon(1e-10));
  CHECK(oracle == doctest::Approx(0.29455).epsilon(1e-4));
}

TEST_CASE("balance report") {
  const auto g = grid(0.1, 10.0, 100);
  SUBCASE("euclidean is exactly balanced from below") {
    const auto B = balance_report(ModelSpace::make(3, w0), g);
    CHECK(B.below_ok);
    CHECK(std::abs(B.min_margin_below) <= 1e-12);
    CHECK(B.sufficient_condition_used == BalanceCondition::K_le_0);
  }
  SUBCASE("hyperbolic") {
    const auto B = balance_report(ModelSpace::make(3, wm1), g);
    CHECK(B.below_ok);
    CHECK(B.above_ok);
    CHECK(B.sufficient_condition_used == BalanceCondition::K_le_0);
    CHECK(B.K_ge_minus_eta_sq_holds);
  }
  SUBCASE("bad grids") {
    const std::vector<double> decreasing{2.0, 1.0};
    CHECK_THROWS(balance_report(ModelSpace::make(3, w0), decreasing));
    CHECK_THROWS(balance_report(ModelSpace::make(3, w0), std::vector<double>{}));
  }
}

TEST_CASE("comparison hessian") {
  CHECK(comparison_hessian_radial(w0, 2.0, 1.0, 0.0) == doctest::Approx(0.5));
  CHECK(comparison_hessian_radial(wm1, 3.0, 1.0, 1.0) == doctest::Approx(0.0));
  CHECK(comparison_hessian_radial(wm1, 1.0, 1.0, 0.0) == doctest::Approx(1.31304).epsilon(1e-5));
  CHECK_THROWS(comparison_hessian_radial(w0, 1.0, 1.0, 2.0));
}

// Property: central differences of the order-0 evaluation converge to the order-1/2
// evaluations at second order (halving h divides the error by about 4).
TEST_CASE("warping derivatives agree with finite differences") {
  const std::vector<WarpingFunction> ws{w0, wm1, w1, WarpingFunction::parse("custom:r + 0.1*r^3"),
                                        WarpingFunction::parse("space_form:-0.25")};
  wltest::Gen gen(11);
  for (const auto& w : ws) {
    for (int k = 0; k < 20; ++k) {
      const double r = gen.uniform(0.2, std::min(3.0, w.domain_end() - 0.2));
      auto err1 = [&](double h) { return std::abs((w(r + h) - w(r - h)) / (2 * h) - w.d1(r)); };
      auto err2 = [&](double h) { return std::abs((w(r + h) - 2 * w(r) + w(r - h)) / (h * h) - w.d2(r)); };
      const double h = 1e-2;
      CHECK(err1(h) <= 1e-4 * std::max(1.0, std::abs(w(r))));
      if (err1(h) > 1e-11) CHECK(err1(h / 2) <= 0.3 * err1(h));
      if (err2(h) > 1e-7) CHECK(err2(h / 2) <= 0.3 * err2(h));
    }
  }
}

TEST_CASE("euclidean balance identity on a grid") {
  for (int m : {2, 3, 4, 5}) {
    const auto M = ModelSpace::make(m, w0);
    for (double r : grid(0.05, 50.0, 60))
      CHECK(std::abs(isoperimetric_quotient(M, r) * mean_curvature_eta(w0, r) - 1.0 / m) <= 1e-12);
  }
}

TEST_CASE("vol_ball is increasing and differentiates to vol_fiber") {
  for (const auto& w : {w0, wm1, w1}) {
    const auto M = ModelSpace::make(3, w);
    double prev = 0.0;
    for (double r : grid(0.1, std::min(3.0, w.domain_end() - 0.1), 30)) {
      const double v = vol_ball(M, r);
      CHECK(v > prev);
      prev = v;
      const double h = 1e-4;
      const double dv = (vol_ball(M, r + h) - vol_ball(M, r - h)) / (2 * h);
      CHECK(rel_err(dv, vol_fiber(M, r)) <= 1e-6);
    }
  }
}

TEST_CASE("constant curvature consistency") {
  for (double b : {-0.5, -1.0, -4.0}) {
    const auto w = WarpingFunction::space_form(b);
    for (double r : grid(0.1, 4.0, 25)) {
      CHECK(radial_curvature(w, r) == doctest::Approx(b).epsilon(1e-9));
      CHECK(fiber_curvature(w, r) == doctest::Approx(b).epsilon(1e-6));
    }
  }
}

TEST_CASE("comparison hessian is even in X") {
  wltest::Gen gen(5);
  for (int k = 0; k < 50; ++k) {
    const double r = gen.uniform(0.1, 5.0);
    const double n = gen.uniform(0.0, 3.0);
    const double c = gen.uniform(-n, n);
    CHECK(comparison_hessian_radial(wm1, r, n, c) == comparison_hessian_radial(wm1, r, n, -c));
  }
}
