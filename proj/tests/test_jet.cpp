#include <doctest.h>

#include <cmath>
#include <random>

#include "gcflab/errors.hpp"
#include "gcflab/expression.hpp"
#include "gcflab/jet.hpp"

using gcflab::Expression;
using gcflab::Jet2d;

TEST_CASE("polynomial expression jet") {
  const Expression e = Expression::parse("u^2*v");
  const Jet2d j = e.eval(Jet2d::coord_u(2.0), Jet2d::coord_v(3.0));
  CHECK(j.val == 12.0);
  CHECK(j.du == 12.0);
  CHECK(j.dv == 4.0);
  CHECK(j.duu == 6.0);
  CHECK(j.duv == 4.0);
  CHECK(j.dvv == 0.0);
}

TEST_CASE("parser grammar") {
  CHECK(Expression::parse("-2^2").eval(0.0, 0.0) == doctest::Approx(-4.0));
  CHECK(Expression::parse("2*u-v/4").eval(1.0, 2.0) == doctest::Approx(1.5));
  CHECK(Expression::parse("u^(-2)").eval(2.0, 0.0) == doctest::Approx(0.25));
  CHECK(Expression::parse("a*sin(pi/2)+1.5e1", {{"a", 3.0}}).eval(0.0, 0.0) == doctest::Approx(18.0));
  CHECK(Expression::parse("sqrt(exp(log(u)))").eval(4.0, 0.0) == doctest::Approx(2.0));
  CHECK_THROWS_AS(Expression::parse("u^1.5"), gcflab::ParseError);
  CHECK_THROWS_AS(Expression::parse("w+1"), gcflab::ParseError);
  CHECK_THROWS_AS(Expression::parse("sin(u"), gcflab::ParseError);
  CHECK_THROWS_AS(Expression::parse("u v"), gcflab::ParseError);
}

namespace {

// Central differences of f at (u,v) with step h: value, du, dv, duu, duv, dvv.
std::array<double, 6> fd_jet(const Expression& e, double u, double v, double h) {
  auto f = [&](double a, double b) { return e.eval(a, b); };
  return {f(u, v),
          (f(u + h, v) - f(u - h, v)) / (2 * h),
          (f(u, v + h) - f(u, v - h)) / (2 * h),
          (f(u + h, v) - 2 * f(u, v) + f(u - h, v)) / (h * h),
          (f(u + h, v + h) - f(u + h, v - h) - f(u - h, v + h) + f(u - h, v - h)) / (4 * h * h),
          (f(u, v + h) - 2 * f(u, v) + f(u, v - h)) / (h * h)};
}

}  // namespace

TEST_CASE("jets agree with finite differences of composed expressions") {
  const char* sources[] = {
      "sin(u*v)+cos(u)^3",
      "exp(u-v)/(1+u^2)",
      "sqrt(2+u^2+v^4)*log(3+u*v)",
      "(u-v)^(-2)*sin(v)",
      "cos(exp(u/3))-v^5/(u+4)",
  };
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> pick(-0.8, 0.8);
  for (const char* src : sources) {
    const Expression e = Expression::parse(src);
    for (int trial = 0; trial < 10; ++trial) {
      const double u = pick(rng);
      double v = pick(rng);
      if (std::abs(u - v) < 0.2) v = u + 0.5;
      const Jet2d j = e.eval(Jet2d::coord_u(u), Jet2d::coord_v(v));
      const double exact[6] = {j.val, j.du, j.dv, j.duu, j.duv, j.dvv};
      // FD error is O(h^2): halving h must shrink the mismatch about 4x
      // unless it is already at rounding level.
      const auto coarse = fd_jet(e, u, v, 1e-3);
      const auto fine = fd_jet(e, u, v, 5e-4);
      for (int k = 1; k < 6; ++k) {
        const double scale = 1.0 + std::abs(exact[k]);
        const double ec = std::abs(coarse[k] - exact[k]) / scale;
        const double ef = std::abs(fine[k] - exact[k]) / scale;
        CHECK(ec < 1e-4);
        CHECK((ef < 1e-7 || ef < 0.35 * ec));
      }
    }
  }
}

TEST_CASE("integer powers of jets") {
  const Jet2d x = Jet2d::coord_u(1.5);
  const Jet2d p = pow(x, 3);
  CHECK(p.val == doctest::Approx(3.375));
  CHECK(p.du == doctest::Approx(6.75));
  CHECK(p.duu == doctest::Approx(9.0));
  const Jet2d q = pow(x, -1);
  CHECK(q.du == doctest::Approx(-1.0 / 2.25));
  CHECK(pow(x, 0).val == 1.0);
  CHECK(pow(x, 0).du == 0.0);
}
