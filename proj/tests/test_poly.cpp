#include <random>

#include "doctest.h"
#include "gcflab/errors.hpp"
#include "gcflab/poly.hpp"

using namespace gcflab;

namespace {

Poly v(Var x) { return Poly::variable(x); }

// Small random polynomial over a few variables with small rational coefficients.
Poly random_poly(std::mt19937& rng) {
  std::uniform_int_distribution<int> nterms(0, 4), exp(0, 2), num(-5, 5), den(1, 4), var(0, 4);
  Poly p;
  const int n = nterms(rng);
  for (int t = 0; t < n; ++t) {
    Monomial m{};
    for (int k = 0; k < 2; ++k) m[var(rng)] += static_cast<std::uint16_t>(exp(rng));
    p += Poly::term(m, mpq_class(num(rng), den(rng)));
  }
  return p;
}

}  // namespace

TEST_CASE("ring axioms on random triples") {
  std::mt19937 rng(7);
  for (int i = 0; i < 1000; ++i) {
    const Poly a = random_poly(rng), b = random_poly(rng), c = random_poly(rng);
    CHECK(a + b == b + a);
    CHECK(a * b == b * a);
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a - a == Poly());
    const Poly ab = a * b;
    for (const auto& [m, q] : ab.terms()) CHECK(q != 0);
  }
}

TEST_CASE("difference of squares") {
  const Poly p = (v(Var::k1) + v(Var::H)) * (v(Var::k1) - v(Var::H));
  CHECK(p == v(Var::k1).pow(2) - v(Var::H).pow(2));
  CHECK(p.str() == "k1^2 - H^2");
}

TEST_CASE("substituting the mean curvature") {
  const RationalFn f = parse_rational_fn("2*H - k1");
  const RationalFn h = parse_rational_fn("(k1 + k2)/2");
  CHECK(f.substitute(Var::H, h) == RationalFn(v(Var::k2)));
}

TEST_CASE("Gauss curvature through k2 = 2H - k1") {
  const RationalFn k2 = parse_rational_fn("2*H - k1");
  const RationalFn direct = parse_rational_fn("k1*(2*H - k1)");
  const RationalFn via = parse_rational_fn("k1*k2").substitute(Var::k2, k2);
  CHECK(direct == via);
  CHECK(direct.numerator() == via.numerator());
}

TEST_CASE("exact division") {
  const Poly a = parse_rational_fn("(k1 - H)*(k1^2 + 3*lam)").numerator();
  const auto q = divide_exact(a, parse_rational_fn("k1 - H").numerator());
  REQUIRE(q);
  CHECK(*q == parse_rational_fn("k1^2 + 3*lam").numerator());
  CHECK_FALSE(divide_exact(a, parse_rational_fn("k1 + H").numerator()));
  CHECK_THROWS_AS(divide_exact(a, Poly()), DivisionByZeroPoly);
}

TEST_CASE("rational functions") {
  const RationalFn a = parse_rational_fn("d2/(2*(k1 - H))");
  const RationalFn b = parse_rational_fn("-d2/(2*(H - k1))");
  CHECK(a == b);
  CHECK(a - b == RationalFn(0));
  const RationalFn c = parse_rational_fn("(k1^2 - H^2)/(k1 - H)");
  CHECK(c.is_polynomial());
  CHECK(c == parse_rational_fn("k1 + H"));
  CHECK(parse_rational_fn("1/k1 + 1/k2") == parse_rational_fn("(k1 + k2)/(k1*k2)"));
  CHECK_THROWS_AS(parse_rational_fn("1/(k1 - k1)"), DivisionByZeroPoly);
  CHECK_THROWS_AS(RationalFn::quotient(Poly(1), Poly()), DivisionByZeroPoly);
}

TEST_CASE("substitution producing a denominator") {
  const RationalFn f = parse_rational_fn("k1^2 + d2");
  const RationalFn g = f.substitute(Var::d2, parse_rational_fn("1/k1"));
  CHECK(g == parse_rational_fn("(k1^3 + 1)/k1"));
  CHECK_FALSE(g.is_polynomial());
}

TEST_CASE("content and leading term") {
  const Poly p = parse_rational_fn("-6*k1^2 + 4*lam").numerator();
  CHECK(p.content() == mpq_class(-2));
  CHECK(p.leading_coefficient() == -6);
  CHECK(p.degree(Var::k1) == 2);
  CHECK(p.coefficient(Var::k1, 2) == Poly(-6));
}

TEST_CASE("parser") {
  CHECK(parse_rational_fn("k1^-1") == parse_rational_fn("1/k1"));
  CHECK(parse_rational_fn("-(k1)^2") == -parse_rational_fn("k1^2"));
  CHECK(parse_rational_fn("K - lam", {{"K", parse_rational_fn("k1*k2")}}) == parse_rational_fn("k1*k2 - lam"));
  CHECK_THROWS_AS(parse_rational_fn("k1 +"), ParseError);
  CHECK_THROWS_AS(parse_rational_fn("kappa"), ParseError);
  CHECK_THROWS_AS(parse_rational_fn("k1)"), ParseError);
}

TEST_CASE("evaluation at a rational point") {
  const RationalFn f = parse_rational_fn("(k1 + 1)/(k2 - 3)");
  const mpq_class r = f.evaluate<mpq_class>([](Var x) { return x == Var::k1 ? mpq_class(1, 2) : mpq_class(5); });
  CHECK(r == mpq_class(3, 4));
}
