#include <random>

#include "doctest.h"
#include "gcflab/errors.hpp"
#include "gcflab/replay.hpp"

using namespace gcflab;

namespace {

RationalFn rf(const char* s) { return parse_rational_fn(s); }

bool proportional(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
  return Poly(b.leading_coefficient() / a.leading_coefficient()) * a == b;
}

const ReplayCheck& find_check(const DerivationReport& r, const std::string& name) {
  for (const auto& c : r.checks) {
    if (c.name == name) return c;
  }
  FAIL("no check named " << name);
  throw;
}

const std::vector<std::string> kPolynomialCases = {"T_C_K2NONZERO", "T1_CASE1", "T1_CASE2",
                                                   "TD_K2NONZERO",  "T2_CASE1", "T2_CASE2"};

}  // namespace

TEST_CASE("second-derivative tables reproduce exactly") {
  const DerivationReport r = verify_second_derivative_tables();
  CHECK(r.match);
  CHECK(r.checks.size() >= 8);
  for (const char* name : {"e11(k1) (translator)", "e12(k1) (translator)", "e22(k1) (translator)",
                           "e11(k1) (shrinker)", "e12(k1) (shrinker)", "e22(k1) (shrinker)"}) {
    CHECK_MESSAGE(find_check(r, name).match, name);
  }
  // the mixed table is alpha-independent
  CHECK(find_check(r, "e12(k1) (translator)").derived == find_check(r, "e12(k1) (shrinker)").derived);
}

TEST_CASE("every replay ends in a polynomial in k1 with an exact residual") {
  for (const auto& id : kPolynomialCases) {
    CAPTURE(id);
    const DerivationReport r = replay(id);
    CHECK(r.case_id == id);
    CHECK(r.polynomial_in_k1);
    CHECK(r.residual == Poly(r.scale) * r.derived - r.printed);
    CHECK(r.match == r.residual.is_zero());
    CHECK_FALSE(r.steps.empty());
    CHECK(r.steps.size() == r.trees.size());
  }
}

TEST_CASE("shrinker constant-mean cases match the printed quartics") {
  CHECK(replay("T2_CASE1").match);
  const DerivationReport r = replay("T2_CASE2");
  CHECK(r.match);
  CHECK(proportional(r.derived, rf("3*k1^4 - 6*H*k1^3 + H*lam*(2*H + k1) - k1*alf - H*alf").numerator()));
  bool divided = false;
  for (const auto& d : r.divisions) divided = divided || (d.factor == "k1 - H" && d.applied);
  CHECK(divided);
}

TEST_CASE("constant k2 translator against an independent derivation") {
  // Derive the printed Gauss relation directly with a plain rule.
  const std::map<std::string, RationalFn> m = {{"K", rf("k1*k2")}};
  DerivationRule e2;
  e2.direction = Direction::E2;
  e2.images = {{Var::k1, rf("d2")}, {Var::k2, 0}, {Var::lam, 0}, {Var::d2, rf("d22")}};
  const RationalFn rel = parse_rational_fn("2*d2^2 + (K-lam)*k2*(k1-k2) + K*(k1-k2)^2", m);
  const RationalFn e22 = parse_rational_fn("-(K-lam)*k2", m);
  const RationalFn expect = derive(rel, e2).substitute(Var::d22, e22) / rf("d2*k2");
  const DerivationReport r = replay("T_C_K2NONZERO");
  CHECK(proportional(r.derived, expect.numerator()));
  CHECK(proportional(r.derived, rf("k1^2 - 2*k1*k2 + lam").numerator()));
  CHECK_FALSE(r.match);
  CHECK(r.residual == rf("8*lam").numerator());
}

TEST_CASE("shrinker quartics reduce to the translator ones at alpha = 0") {
  for (const auto& [t1, t2] : {std::pair{"T1_CASE1", "T2_CASE1"}, std::pair{"T1_CASE2", "T2_CASE2"}}) {
    CAPTURE(t1);
    const Poly a = replay(t1).derived;
    const Poly b = replay(t2).derived.substitute(Var::alf, Poly());
    CHECK(proportional(a, b));
  }
}

TEST_CASE("flat shrinker chain") {
  const DerivationReport r = replay("TD_K2ZERO");
  CHECK(r.derived.is_zero());
  CHECK(r.printed.is_constant());
  CHECK_FALSE(r.printed.is_zero());
  CHECK_FALSE(find_check(r, "first frame equation").match);
  CHECK(find_check(r, "printed chain reduced derivative").match);
}

TEST_CASE("corrupted rule image is caught") {
  ReplayOptions o;
  o.overrides.push_back({Direction::E2, Var::H, "d2"});
  const DerivationReport r = replay("T2_CASE1", o);
  CHECK_FALSE(r.match);
  CHECK_FALSE(r.residual.is_zero());
}

TEST_CASE("unknown case") { CHECK_THROWS_AS(replay("T3"), UnknownCase); }

TEST_CASE("numeric and symbolic evaluation agree on every step") {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<int> num(-12, 12), den(1, 9);
  std::vector<DerivationReport> reports;
  for (const auto& id : replay_case_ids()) reports.push_back(replay(id));
  reports.push_back(verify_second_derivative_tables());
  for (const auto& r : reports) {
    CAPTURE(r.case_id);
    for (std::size_t i = 0; i < r.trees.size(); ++i) {
      CAPTURE(r.steps[i].op);
      const RationalFn& sym = r.trees[i].value();
      int agreed = 0;
      for (int trial = 0; agreed < 50 && trial < 200; ++trial) {
        NumericPoint p;
        for (std::size_t v = 0; v < kNumVars; ++v) {
          mpq_class q(num(rng), den(rng));
          q.canonicalize();
          p[static_cast<Var>(v)] = q;
        }
        const auto at = [&](Var x) { return p.at(x); };
        if (sym.denominator().evaluate<mpq_class>(at) == 0) continue;
        NilNumber got;
        try {
          got = r.trees[i].evaluate(p);
        } catch (const DivisionByZeroPoly&) {
          continue;  // an intermediate pole of the tree
        }
        CHECK(got == NilNumber(sym.evaluate<mpq_class>(at)));
        ++agreed;
      }
      CHECK(agreed == 50);
    }
  }
}

TEST_CASE("report JSON round trip") {
  for (const auto& id : replay_case_ids()) {
    const DerivationReport r = replay(id);
    const nlohmann::json j = r;
    const DerivationReport back = j.get<DerivationReport>();
    CHECK(nlohmann::json(back) == j);
    CHECK(back.derived == r.derived);
    CHECK(back.printed == r.printed);
    CHECK(back.residual == r.residual);
    CHECK(back.scale == r.scale);
    CHECK(back.match == r.match);
  }
  CHECK_THROWS_AS(nlohmann::json::parse("{}").get<DerivationReport>(), ParseError);
}
