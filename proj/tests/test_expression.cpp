#include <doctest.h>

#include <cmath>
#include <vector>

#include "warplab/errors.hpp"
#include "warplab/expression.hpp"
#include "warplab/warping.hpp"

using namespace warplab;

TEST_CASE("expression evaluation") {
  CHECK(Expression::parse("1 + 2*3", {}).eval(std::span<const double>{}) == 7.0);
  CHECK(Expression::parse("2^3^2", {"x"}).eval(0.0) == 512.0);
  CHECK(Expression::parse("-x^2", {"x"}).eval(3.0) == -9.0);
  CHECK(Expression::parse("sinh(x)/x", {"x"}).eval(1.0) == doctest::Approx(std::sinh(1.0)));
  const std::vector<double> uv{2.0, 0.5};
  CHECK(Expression::parse("u1*cos(u2) - e", {"u1", "u2"}).eval(uv) == doctest::Approx(2 * std::cos(0.5) - M_E));
  CHECK(parse_number_expression("2*pi") == doctest::Approx(2 * M_PI));
  CHECK(parse_number_expression("-4") == -4.0);
}

TEST_CASE("expression parse errors") {
  CHECK_THROWS_AS(Expression::parse("x +", {"x"}), ConfigError);
  CHECK_THROWS_AS(Expression::parse("y", {"x"}), ConfigError);
  CHECK_THROWS_AS(Expression::parse("foo(x)", {"x"}), ConfigError);
  CHECK_THROWS_AS(Expression::parse("(x", {"x"}), ConfigError);
  CHECK_THROWS_AS(WarpingFunction::parse("banana:1"), ConfigError);
}

TEST_CASE("custom warping must be normalized") {
  CHECK_THROWS(WarpingFunction::parse("custom:2*r"));
  CHECK_THROWS(WarpingFunction::parse("custom:r + 1"));
  CHECK_NOTHROW(WarpingFunction::parse("custom:sinh(r)"));
}

// Property: jets match central differences of the value for every supported function.
TEST_CASE("jets agree with finite differences") {
  const std::vector<const char*> sources{"sin(x)*exp(x)", "cosh(x)^2 - x", "log(1 + x^2)", "sqrt(x)*tanh(x)",
                                         "x^2.5 / (1 + x)", "abs(x - 3) + tan(x/4)", "2^x", "x^x"};
  for (const char* s : sources) {
    const auto e = Expression::parse(s, {"x"});
    for (double x : {0.4, 1.1, 2.3, 3.7}) {
      const double h = 1e-4;
      const Jet2 j = e.eval_jet(x);
      CHECK(j.v == doctest::Approx(e.eval(x)));
      const double d1 = (e.eval(x + h) - e.eval(x - h)) / (2 * h);
      const double d2 = (e.eval(x + h) - 2 * e.eval(x) + e.eval(x - h)) / (h * h);
      INFO(s << " at x = " << x);
      CHECK(j.d1 == doctest::Approx(d1).epsilon(1e-6));
      CHECK(j.d2 == doctest::Approx(d2).epsilon(1e-4));
    }
  }
}
