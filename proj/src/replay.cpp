#include "gcflab/replay.hpp"

#include <algorithm>
#include <array>

#include "gcflab/errors.hpp"

namespace gcflab {

Comparison compare_values(const RationalFn& derived, const RationalFn& printed) {
  Comparison c;
  c.residual = derived - printed;
  c.match = c.residual.is_zero();
  return c;
}

Comparison compare_relations(const RationalFn& derived, const RationalFn& printed) {
  const Poly& p = derived.numerator();
  const Poly& q = printed.numerator();
  Comparison c;
  if (!p.is_zero() && !q.is_zero()) c.scale = q.leading_coefficient() / p.leading_coefficient();
  const Poly r = Poly(c.scale) * p - q;
  c.residual = RationalFn(r);
  c.match = r.is_zero();
  return c;
}

namespace {

SymExpr var(Var x) { return SymExpr::variable(x); }

using RulePtr = std::shared_ptr<const TreeRule>;

class Script {
 public:
  Script(std::string case_id, const ReplayOptions& options) : options_(options) { report_.case_id = std::move(case_id); }

  void define(const std::string& name, std::string_view text) { macros_[name] = SymExpr::parse(text, macros_); }
  void define_printed(const std::string& name, std::string_view text) {
    printed_macros_[name] = SymExpr::parse(text, printed_scope());
  }

  SymExpr f(std::string_view text) const { return SymExpr::parse(text, macros_); }
  SymExpr printed(std::string_view text) const { return SymExpr::parse(text, printed_scope()); }

  RulePtr set_rule(Direction d, const std::vector<std::pair<Var, SymExpr>>& images) {
    auto r = std::make_shared<TreeRule>();
    r->direction = d;
    for (const auto& [x, img] : images) r->images[x] = img;
    for (const auto& o : options_.overrides) {
      if (o.direction != d) continue;
      r->images[o.var] = f(o.image);
      note("image of " + std::string(var_name(o.var)) + " under " + (d == Direction::E1 ? "e1" : "e2") +
           " overridden with " + o.image);
    }
    (d == Direction::E1 ? e1 : e2) = r;
    return r;
  }

  SymExpr step(std::string op, std::string cite, const SymExpr& e) {
    report_.steps.push_back({std::move(op), std::move(cite), e.value().str()});
    report_.trees.push_back(e);
    return e;
  }

  SymExpr divide(const SymExpr& e, std::string_view factor, const std::string& justification) {
    const SymExpr g = f(factor);
    report_.divisions.push_back({g.value().str(), justification, true});
    return step("divide by " + g.value().str(), justification, e.divide_by(g, justification));
  }

  SymExpr try_divide(const SymExpr& e, std::string_view factor, const std::string& justification) {
    const SymExpr g = f(factor);
    const SymExpr r = e.try_divide_by(g, justification);
    const bool applied = r.division_applied();
    report_.divisions.push_back({g.value().str(), justification, applied});
    if (!applied) note(g.value().str() + " is not a factor; division skipped");
    return step((applied ? "divide by " : "skip division by ") + g.value().str(), justification, r);
  }

  // Division hidden inside solve_for.
  void implicit_division(std::string_view factor, const std::string& justification) {
    report_.divisions.push_back({f(factor).value().str(), justification, true});
  }

  bool check_value(std::string name, std::string cite, const SymExpr& derived, const SymExpr& printed) {
    return check(std::move(name), std::move(cite), false, derived, printed);
  }
  bool check_relation(std::string name, std::string cite, const SymExpr& derived, const SymExpr& printed) {
    return check(std::move(name), std::move(cite), true, derived, printed);
  }

  void note(std::string text) { report_.notes.push_back(std::move(text)); }

  DerivationReport finish(const SymExpr& final_relation, const SymExpr& printed, std::string cite,
                          const std::vector<Var>& constants) {
    const RationalFn& d = final_relation.value();
    const RationalFn& p = printed.value();
    step("compare with the printed polynomial", cite, final_relation);
    const Comparison c = compare_relations(d, p);
    report_.derived = d.numerator();
    report_.printed = p.numerator();
    report_.scale = c.scale;
    report_.residual = c.residual.numerator();
    report_.match = c.match;
    const Poly& q = report_.derived;
    bool only_constants = true;
    for (Var x : q.variables()) {
      if (x != Var::k1 && std::find(constants.begin(), constants.end(), x) == constants.end()) only_constants = false;
    }
    report_.polynomial_in_k1 = only_constants && q.degree(Var::k1) >= 1;
    if (!report_.polynomial_in_k1) note("final derived object is not a polynomial in k1 with constant coefficients");
    return std::move(report_);
  }

  DerivationReport finish_tables() {
    report_.match = std::all_of(report_.checks.begin(), report_.checks.end(), [](const ReplayCheck& c) { return c.match; });
    return std::move(report_);
  }

  RulePtr e1;
  RulePtr e2;

 private:
  std::map<std::string, SymExpr> printed_scope() const {
    std::map<std::string, SymExpr> scope = macros_;
    for (const auto& [k, v] : printed_macros_) scope[k] = v;
    return scope;
  }

  bool check(std::string name, std::string cite, bool relation, const SymExpr& derived, const SymExpr& printed) {
    const RationalFn& d = derived.value();
    const RationalFn& p = printed.value();
    const Comparison c = relation ? compare_relations(d, p) : compare_values(d, p);
    ReplayCheck rc;
    rc.name = std::move(name);
    rc.cite = std::move(cite);
    rc.mode = relation ? "relation" : "value";
    rc.derived = relation ? d.numerator().str() : d.str();
    rc.printed = relation ? p.numerator().str() : p.str();
    rc.match = c.match;
    rc.scale = c.scale.get_str();
    rc.residual = c.residual.str();
    report_.checks.push_back(std::move(rc));
    return c.match;
  }

  const ReplayOptions& options_;
  DerivationReport report_;
  std::map<std::string, SymExpr> macros_;
  std::map<std::string, SymExpr> printed_macros_;
};

// --- regimes ---------------------------------------------------------------

// Constant mean curvature: H, lam, alf are constants and k2 = 2H - k1.
void constant_mean_regime(Script& s) {
  s.define("k2", "2*H - k1");
  s.define("K", "k1*(2*H - k1)");
  s.note("k2 eliminated through k2 = 2H - k1; H, lam, alf are constants");
  s.set_rule(Direction::E1, {{Var::k1, var(Var::d1)},
                             {Var::d1, var(Var::d11)},
                             {Var::d2, var(Var::d12)},
                             {Var::H, 0},
                             {Var::lam, 0},
                             {Var::alf, 0}});
  s.set_rule(Direction::E2, {{Var::k1, var(Var::d2)},
                             {Var::d1, var(Var::d21)},
                             {Var::d2, var(Var::d22)},
                             {Var::H, 0},
                             {Var::lam, 0},
                             {Var::alf, 0}});
}

// Constant k2: K = k1*k2, lam and alf constant.
void constant_k2_regime(Script& s, bool shrinker) {
  s.define("K", "k1*k2");
  s.note("k2 is constant; K = k1*k2");
  if (shrinker) {
    s.define_printed("H", "(k1 + k2)/2");
    s.note("printed forms use H as shorthand; H = (k1 + k2)/2 is substituted before comparison");
  }
  s.set_rule(Direction::E1, {{Var::k1, var(Var::d1)},
                             {Var::k2, 0},
                             {Var::d1, var(Var::d11)},
                             {Var::d2, var(Var::d12)},
                             {Var::lam, 0},
                             {Var::alf, 0}});
  s.set_rule(Direction::E2, {{Var::k1, var(Var::d2)},
                             {Var::k2, 0},
                             {Var::d1, var(Var::d21)},
                             {Var::d2, var(Var::d22)},
                             {Var::lam, 0},
                             {Var::alf, 0}});
}

// Right-hand side of the Gauss identity in the principal frame.
SymExpr gauss_curvature_expression(const Script& s, const SymExpr& k1, const SymExpr& k2) {
  const SymExpr e1k2 = k2.derive(s.e1);
  const SymExpr e2k1 = k1.derive(s.e2);
  const SymExpr gap = k1 - k2;
  return -(e1k2 / gap).derive(s.e1) + (e2k1 / gap).derive(s.e2) - (e1k2.pow(2) + e2k1.pow(2)) / gap.pow(2);
}

const char* const kGaussCite = "K=κ1κ2=−e1(e1(κ2)/(κ1−κ2))+e2(e2(κ1)/(κ1−κ2))−(e1(κ2)²+e2(κ1)²)/(κ1−κ2)²";

// --- second-derivative tables ------------------------------------------------

struct Tables {
  SymExpr e11, e12, e21, e22;
};

struct TablePrinted {
  const char* gam;
  const char* mu;
  const char* frame[4];
  const char* derivative[4];
  const char* e11;
  const char* e12;
  const char* e22;
};

const TablePrinted kTranslatingTables = {
    "2*(k1-H)*d1/k1",
    "2*(k1-H)*d2/(2*H-k1)",
    {"d2^2/(2*H-k1) + (K-lam)*k1", "-d1*d2/k1", "-d1*d2/(2*H-k1)", "d1^2/k1 + (K-lam)*(2*H-k1)"},
    {"2*(k1-H)/k1*d11 + 2*H/k1^2*d1^2", "2*(k1-H)/(2*H-k1)*d12 + 2*H/(2*H-k1)^2*d1*d2",
     "2*(k1-H)/k1*d21 + 2*H/k1^2*d1*d2", "2*(k1-H)/(2*H-k1)*d22 + 2*H/(2*H-k1)^2*d2^2"},
    "-H*d1^2/(k1*(k1-H)) + k1*d2^2/(2*(k1-H)*(2*H-k1)) + (K-lam)*k1^2/(2*(k1-H))",
    "-(k1^2-2*H*k1+4*H^2)/(2*k1*(k1-H)*(2*H-k1))*d1*d2",
    "(2*H-k1)*d1^2/(2*k1*(k1-H)) - H*d2^2/((k1-H)*(2*H-k1)) + (K-lam)*(2*H-k1)^2/(2*(k1-H))",
};

const TablePrinted kShrinkerTables = {
    "2*(k1-H)/(alf*k1)*d1",
    "2*(k1-H)/(alf*(2*H-k1))*d2",
    {"d2^2/(alf*(2*H-k1)) + (K-lam)/alf*k1 + 1", "-d1*d2/(alf*k1)", "-d1*d2/(alf*(2*H-k1))",
     "d1^2/(alf*k1) + (K-lam)/alf*(2*H-k1) + 1"},
    {"2*(k1-H)/(alf*k1)*d11 + 2*H/(alf*k1^2)*d1^2",
     "2*(k1-H)/(alf*(2*H-k1))*d12 + 2*H/(alf*(2*H-k1)^2)*d1*d2",
     "2*(k1-H)/(alf*k1)*d21 + 2*H/(alf*k1^2)*d1*d2",
     "2*(k1-H)/(alf*(2*H-k1))*d22 + 2*H/(alf*(2*H-k1)^2)*d2^2"},
    "-H*d1^2/(k1*(k1-H)) + k1*d2^2/(2*(k1-H)*(2*H-k1)) + ((K-lam)*k1+alf)*k1/(2*(k1-H))",
    "-(k1^2-2*H*k1+4*H^2)/(2*k1*(k1-H)*(2*H-k1))*d1*d2",
    "(2*H-k1)*d1^2/(2*k1*(k1-H)) - H*d2^2/((k1-H)*(2*H-k1)) + ((K-lam)*(2*H-k1)+alf)*(2*H-k1)/(2*(k1-H))",
};

Tables second_derivative_tables(Script& s, bool shrinker) {
  const TablePrinted& pr = shrinker ? kShrinkerTables : kTranslatingTables;
  const std::string tag = shrinker ? " (shrinker)" : " (translator)";
  const SymExpr k1 = s.f("k1"), k2 = s.f("k2"), K = s.f("K"), lam = var(Var::lam), alf = var(Var::alf);
  const SymExpr potential = shrinker ? K / alf : K;
  const SymExpr c = shrinker ? (K - lam) / alf : K - lam;
  const SymExpr one = shrinker ? SymExpr(1) : SymExpr(0);

  const SymExpr gam = s.step("solve e1(K) + gam*k1 = 0 for gam" + tag, "e1(K)+γκ1=0",
                             (potential.derive(s.e1) + var(Var::gam) * k1).solve_for(Var::gam));
  s.implicit_division("k1", "κ1 ≠ 0 on the subdomain");
  const SymExpr mu = s.step("solve e2(K) + mu*k2 = 0 for mu" + tag, "e2(K)+μκ2=0",
                            (potential.derive(s.e2) + var(Var::mu) * k2).solve_for(Var::mu));
  s.implicit_division("2*H - k1", "κ2 = 2H − κ1 ≠ 0 on the subdomain");
  s.check_value("gamma" + tag, "γ=2(κ1−H)e1(κ1)/κ1", gam, s.printed(pr.gam));
  s.check_value("mu" + tag, "μ=2(κ1−H)e2(κ1)/(2H−κ1)", mu, s.printed(pr.mu));

  const SymExpr w1 = s.step("connection form on e1 from Codazzi", "e2(κ1)=(κ1−κ2)ω(e1)", k1.derive(s.e2) / (k1 - k2));
  const SymExpr w2 = s.step("connection form on e2 from Codazzi", "e1(κ2)=(κ1−κ2)ω(e2)", k2.derive(s.e1) / (k1 - k2));
  s.check_value("omega(e1)", "ω(e1)=e2(κ1)/(2(κ1−H))", w1, s.printed("d2/(2*(k1-H))"));
  s.check_value("omega(e2)", "ω(e2)=−e1(κ1)/(2(κ1−H))", w2, s.printed("-d1/(2*(k1-H))"));

  const std::array<SymExpr, 4> frame = {mu * w1 + c * k1 + one, -(gam * w1), mu * w2, -(gam * w2) + c * k2 + one};
  const std::array<SymExpr, 4> derivative = {gam.derive(s.e1), mu.derive(s.e1), gam.derive(s.e2), mu.derive(s.e2)};
  const std::array<const char*, 4> names = {"e1(gamma)", "e1(mu)", "e2(gamma)", "e2(mu)"};
  const std::array<Var, 4> unknown = {Var::d11, Var::d12, Var::d21, Var::d22};
  std::array<SymExpr, 4> solved;
  for (std::size_t i = 0; i < 4; ++i) {
    const SymExpr lhs = s.step(std::string(names[i]) + " from the frame equations" + tag, "frame equations", frame[i]);
    const SymExpr rhs = s.step(std::string(names[i]) + " by deriving gamma, mu" + tag, "derivative of γ, μ", derivative[i]);
    s.check_value(std::string(names[i]) + " from the frame equations" + tag, "frame equations with γ, μ, ω substituted",
                  lhs, s.printed(pr.frame[i]));
    s.check_value(std::string(names[i]) + " by derivation" + tag, "derivative of γ, μ", rhs,
                  s.printed(pr.derivative[i]));
    solved[i] = s.step("equate and solve for " + std::string(var_name(unknown[i])) + tag, "equating both expressions",
                       (rhs - lhs).solve_for(unknown[i]));
  }
  s.implicit_division("k1 - H", "κ1 − H ≠ 0 on the subdomain");
  s.check_value("e11(k1)" + tag, "e11(κ1)=−He1(κ1)²/(κ1(κ1−H))+…", solved[0], s.printed(pr.e11));
  s.check_value("e12(k1)" + tag, "e12(κ1)=−(κ1²−2Hκ1+4H²)/(2κ1(κ1−H)(2H−κ1))e1(κ1)e2(κ1)", solved[1],
                s.printed(pr.e12));
  s.check_value("e21(k1) against the printed e12(k1)" + tag, "e12(κ1)=−(κ1²−2Hκ1+4H²)/(2κ1(κ1−H)(2H−κ1))e1(κ1)e2(κ1)",
                solved[2], s.printed(pr.e12));
  s.check_value("e22(k1)" + tag, "e22(κ1)=(2H−κ1)e1(κ1)²/(2κ1(κ1−H))−…", solved[3], s.printed(pr.e22));
  return {solved[0], solved[1], solved[2], solved[3]};
}

// --- cases -----------------------------------------------------------------

DerivationReport replay_constant_k2_translating(const ReplayOptions& o) {
  Script s("T_C_K2NONZERO", o);
  constant_k2_regime(s, false);
  const SymExpr k1 = s.f("k1"), k2 = s.f("k2"), K = s.f("K"), lam = var(Var::lam), gap = k1 - k2;

  const SymExpr w2 = s.step("connection form on e2 from Codazzi", "e1(κ2)=(κ1−κ2)ω(e2)", k2.derive(s.e1) / gap);
  s.check_value("omega(e2)", "ω(e2)=0", w2, s.printed("0"));
  const SymExpr mu = s.step("solve e2(K) + mu*k2 = 0 for mu", "e2(K)+μκ2=0",
                            (K.derive(s.e2) + var(Var::mu) * k2).solve_for(Var::mu));
  s.implicit_division("k2", "κ2 ≠ 0 in this case");
  s.check_value("mu", "μ=−e2(κ1)", mu, s.printed("-d2"));
  const SymExpr e22 = s.step("solve e2(mu) + gam*omega(e2) - (K-lam)*k2 = 0 for d22", "e2(μ)+γω(e2)−(K−λ)κ2=0",
                             (mu.derive(s.e2) + var(Var::gam) * w2 - (K - lam) * k2).solve_for(Var::d22));
  s.check_value("e22(k1)", "e22(κ1)=−(K−λ)κ2", e22, s.printed("-(K-lam)*k2"));

  const SymExpr gauss = s.step("Gauss identity with e22 inserted, times (k1-k2)^2", kGaussCite,
                               (K - gauss_curvature_expression(s, k1, k2)).substitute(Var::d22, e22) * gap.pow(2));
  s.check_relation("Gauss identity", "2e2(κ1)²=−(K−λ)κ2(κ1−κ2)−κ1κ2(κ1−κ2)²", gauss,
                   s.printed("2*d2^2 + (K-lam)*k2*(k1-k2) + k1*k2*(k1-k2)^2"));
  const SymExpr fp = s.step("derive along e2", "differentiating with respect to e2", gauss.derive(s.e2));
  s.check_relation("Gauss identity derived along e2",
                   "4e2(κ1)e22(κ1)=−e2(κ1)κ2((κ2+2κ1)(κ1−κ2)+K−λ+(κ1−κ2)²)", fp,
                   s.printed("4*d2*d22 + d2*k2*((k2+2*k1)*(k1-k2) + K - lam + (k1-k2)^2)"));
  SymExpr fin = s.step("insert e22", "e22(κ1)=−(K−λ)κ2", fp.substitute(Var::d22, e22));
  fin = s.divide(fin, "d2", "e2(κ1) is not identically zero: otherwise μ = 0 and K = λ");
  fin = s.try_divide(fin, "k2", "κ2 ≠ 0 in this case");
  return s.finish(fin, s.printed("3*k1^2 - 6*k2*k1 - 5*lam"), "3κ1²−6κ2κ1−5λ=0", {Var::k2, Var::lam});
}

DerivationReport replay_constant_k2_shrinker(const ReplayOptions& o) {
  Script s("TD_K2NONZERO", o);
  constant_k2_regime(s, true);
  const SymExpr k1 = s.f("k1"), k2 = s.f("k2"), K = s.f("K"), lam = var(Var::lam), alf = var(Var::alf);
  const SymExpr gap = k1 - k2;

  const SymExpr w2 = s.step("connection form on e2 from Codazzi", "e1(κ2)=(κ1−κ2)ω(e2)", k2.derive(s.e1) / gap);
  s.check_value("omega(e2)", "ω(e2)=0", w2, s.printed("0"));
  const SymExpr mu = s.step("solve e2(K/alf) + mu*k2 = 0 for mu", "e2(K/α)+μκ2=0",
                            ((K / alf).derive(s.e2) + var(Var::mu) * k2).solve_for(Var::mu));
  s.implicit_division("k2", "κ2 ≠ 0 in this case");
  s.check_value("mu", "μ=−e2(κ1)/α", mu, s.printed("-d2/alf"));
  const SymExpr e22 =
      s.step("solve e2(mu) + gam*omega(e2) - (K-lam)/alf*k2 = 1 for d22", "e2(μ)+γω(e2)−(K−λ)/α κ2=1",
             (mu.derive(s.e2) + var(Var::gam) * w2 - (K - lam) / alf * k2 - 1).solve_for(Var::d22));
  s.check_value("e22(k1)", "e22(κ1)=−(K−λ)κ2−α", e22, s.printed("-(K-lam)*k2 - alf"));

  const SymExpr gauss = s.step("Gauss identity with e22 inserted, times (k1-k2)^2", kGaussCite,
                               (K - gauss_curvature_expression(s, k1, k2)).substitute(Var::d22, e22) * gap.pow(2));
  const SymExpr gauss_printed = s.printed("2*d2^2 + (k1-k2)*(k1*K + alf - lam*k2)");
  s.check_relation("Gauss identity", "2e2(κ1)²=−(κ1−κ2)(κ1K+α−λκ2)", gauss, gauss_printed);
  const SymExpr fp = s.step("derive along e2", "differentiating with respect to e2", gauss.derive(s.e2));
  const char* fp_cite = "4e2(κ1)e22(κ1)=−2e2(κ1)(α−4H²κ1+9Hκ1²−3Hλ−4κ1³+2λκ1)";
  const SymExpr fp_printed = s.printed("4*d2*d22 + 2*d2*(alf - 4*H^2*k1 + 9*H*k1^2 - 3*H*lam - 4*k1^3 + 2*lam*k1)");
  s.check_relation("Gauss identity derived along e2", fp_cite, fp, fp_printed);
  s.check_relation("printed derivative against the derivative of the printed Gauss identity", fp_cite,
                   gauss_printed.derive(s.e2), fp_printed);
  SymExpr fin = s.step("insert e22", "e22(κ1)=−(K−λ)κ2−α", fp.substitute(Var::d22, e22));
  fin = s.divide(fin, "d2", "e2(κ1) is not zero: otherwise μ = 0 and K − λ = 1 is constant");
  fin = s.try_divide(fin, "k2", "κ2 ≠ 0 in this case");
  return s.finish(fin, s.printed("-6*k1^3 + 17*H*k1^2 - 12*H^2*k1 + lam*H - alf"), "−6κ1³+17Hκ1²−12H²κ1+λH−α=0",
                  {Var::k2, Var::lam, Var::alf});
}

DerivationReport replay_flat_shrinker(const ReplayOptions& o) {
  Script s("TD_K2ZERO", o);
  s.define("k2", "0");
  s.define("K", "0");
  s.note("k2 = 0 and K = 0; lam and alf are constants");
  const SymExpr k1 = s.f("k1"), k2 = s.f("k2"), K = s.f("K"), lam = var(Var::lam), alf = var(Var::alf);
  const SymExpr mu = var(Var::mu), gam_var = var(Var::gam);
  s.set_rule(Direction::E1, {{Var::k1, var(Var::d1)},
                             {Var::d1, var(Var::d11)},
                             {Var::d2, var(Var::d12)},
                             {Var::lam, 0},
                             {Var::alf, 0}});
  s.set_rule(Direction::E2, {{Var::k1, var(Var::d2)},
                             {Var::d1, var(Var::d21)},
                             {Var::d2, var(Var::d22)},
                             {Var::lam, 0},
                             {Var::alf, 0}});

  const SymExpr gam = s.step("solve e1(K/alf) + gam*k1 = 0 for gam", "e1(K/α)+γκ1=0",
                             ((K / alf).derive(s.e1) + gam_var * k1).solve_for(Var::gam));
  s.implicit_division("k1", "κ1 ≠ 0: the point is non-umbilic and κ2 = 0");
  s.check_value("gamma", "γ=0", gam, s.printed("0"));
  const SymExpr w1 = s.step("connection form on e1 from Codazzi", "e2(κ1)=(κ1−κ2)ω(e1)", k1.derive(s.e2) / (k1 - k2));
  const SymExpr w2 = s.step("connection form on e2 from Codazzi", "e1(κ2)=(κ1−κ2)ω(e2)", k2.derive(s.e1) / (k1 - k2));
  s.check_value("omega(e1)", "ω(e1)=e2(κ1)/κ1", w1, s.printed("d2/k1"));
  s.check_value("omega(e2)", "ω(e2)=0", w2, s.printed("0"));
  const SymExpr e2mu = s.step("solve e2(mu) + gam*omega(e2) - (K-lam)/alf*k2 = 1 for e2(mu)",
                              "e2(μ)+γω(e2)−(K−λ)/α κ2=1",
                              (var(Var::dmu) + gam * w2 - (K - lam) / alf * k2 - 1).solve_for(Var::dmu));
  s.check_value("e2(mu)", "e2(μ)=1", e2mu, s.printed("1"));
  s.set_rule(Direction::E2, {{Var::k1, var(Var::d2)},
                             {Var::d1, var(Var::d21)},
                             {Var::d2, var(Var::d22)},
                             {Var::mu, e2mu},
                             {Var::lam, 0},
                             {Var::alf, 0}});

  const SymExpr con = s.step("first frame equation", "e1(γ)−μω(e1)−(K−λ)/α κ1=1",
                             gam.derive(s.e1) - mu * w1 - (K - lam) / alf * k1 - 1);
  const SymExpr con_printed = s.printed("d2/k1*mu + lam/alf*k1 - 1");
  s.check_relation("first frame equation", "e2(κ1)/κ1 μ+λ/α κ1=1", con, con_printed);
  const SymExpr con2 = s.step("derive along e2", "differentiating with respect to e2, e2(μ)=1", con.derive(s.e2));
  const char* con2_cite = "e22(κ1)/κ1 μ+e2(κ1)/κ1−e2(κ1)²/κ1² μ+λ/α e2(κ1)=0";
  const SymExpr con2_printed = s.printed("d22/k1*mu + d2/k1 - d2^2/k1^2*mu + lam/alf*d2");
  s.check_relation("first frame equation derived along e2", con2_cite, con2, con2_printed);
  const SymExpr e22 = s.step("solve the Gauss identity for d22", kGaussCite,
                             (K - gauss_curvature_expression(s, k1, k2)).solve_for(Var::d22));
  s.check_value("e22(k1)", "0=e22(κ1)/κ1−2e2(κ1)²/κ1²", e22, s.printed("2*d2^2/k1"));
  const char* last_cite = "e2(κ1)/κ1² μ+1/κ1+λ/α=0";
  const SymExpr last_printed = s.printed("d2/k1^2*mu + 1/k1 + lam/alf");
  const std::string e2_nonzero = "e2(κ1) ≠ 0";

  SymExpr last = s.step("insert e22", "e22(κ1)=2e2(κ1)²/κ1", con2.substitute(Var::d22, e22));
  last = s.divide(last, "d2", e2_nonzero);
  s.check_relation("reduced derivative", last_cite, last, last_printed);
  SymExpr fin = s.step("eliminate mu between the two relations", "This gives a contradiction with the first relation",
                       last.coefficient(Var::mu, 1) * con - con.coefficient(Var::mu, 1) * last);
  fin = s.divide(fin, "d2", e2_nonzero);

  // The same elimination run on the printed first relation.
  const SymExpr con2_from_printed = s.step("printed chain: derive the printed first relation along e2",
                                           "e2(κ1)/κ1 μ+λ/α κ1=1", con_printed.derive(s.e2));
  s.check_relation("printed derivative against the derivative of the printed relation", con2_cite, con2_from_printed,
                   con2_printed);
  SymExpr last_p = s.step("printed chain: insert e22", "e22(κ1)=2e2(κ1)²/κ1",
                          con2_from_printed.substitute(Var::d22, e22));
  last_p = s.divide(last_p, "d2", e2_nonzero);
  s.check_relation("printed chain reduced derivative", last_cite, last_p, last_printed);
  SymExpr fin_p = s.step("printed chain: eliminate mu", "This gives a contradiction with the first relation",
                         last_p.coefficient(Var::mu, 1) * con_printed - con_printed.coefficient(Var::mu, 1) * last_p);
  fin_p = s.divide(fin_p, "d2", e2_nonzero);
  s.note("the contradiction is the nonzero constant left after eliminating mu; a zero result means the chain closes "
         "without contradiction");
  return s.finish(fin, fin_p, "This gives a contradiction with e2(κ1)/κ1 μ+λ/α κ1=1", {Var::lam, Var::alf});
}

struct MeanCase1Printed {
  const char* e77;
  const char* e88;
  const char* e99;
  const char* quartic;
};

DerivationReport replay_mean_case1(const ReplayOptions& o, bool shrinker) {
  Script s(shrinker ? "T2_CASE1" : "T1_CASE1", o);
  constant_mean_regime(s);
  const Tables t = second_derivative_tables(s, shrinker);
  const SymExpr k1 = s.f("k1"), H = var(Var::H);
  const MeanCase1Printed pr =
      shrinker ? MeanCase1Printed{"d2^2 + (2*H-k1)*(alf+(K-lam)*k1)",
                                  "(alf*(2*H-k1) + 2*H*(alf+k1*(K-lam)) + (2*H-k1)^2*(K-lam))/(2*(k1-H))",
                                  "(alf - 2*(H-k1)*(4*H*k1-2*k1^2-lam))/2",
                                  "-3*k1^4 + 12*H*k1^3 - (12*H^2+lam)*k1^2 + 2*(alf+H*lam)*k1 + H*(2*H*lam-5*alf)"}
               : MeanCase1Printed{"d2^2 + k1*(2*H-k1)*(K-lam)", "(K-lam)/(2*(k1-H))*(k1^2-2*H*k1+4*H^2)",
                                  "(k1-H)*(2*K-lam)",
                                  "3*k1^4 - 12*H*k1^3 + 2*(6*H^2+lam)*k1^2 - 4*H*lam*k1 + 2*H^2*lam"};
  const char* quartic_cite = shrinker ? "−3κ1⁴+12Hκ1³−(12H²+λ)κ1²+2(α+Hλ)κ1+H(2Hλ−5α)=0"
                                      : "3κ1⁴−12Hκ1³+2(6H²+λ)κ1²−4Hλκ1+2H²λ=0";

  SymExpr e77 = s.step("case e1(k1) = 0: e11(k1) = 0 with d1 = 0, times 2(k1-H)(2H-k1)", "e1(κ1)=0 identically",
                       t.e11.substitute(Var::d1, 0) * (2 * (k1 - H) * (2 * H - k1)));
  e77 = s.divide(e77, "k1", "κ1 ≠ 0 on the subdomain");
  s.check_relation("e2(k1)^2", shrinker ? "e2(κ1)²=−(2H−κ1)(α+(K−λ)κ1)" : "e2(κ1)²=−κ1(2H−κ1)(K−λ)", e77,
                   s.printed(pr.e77));
  const SymExpr d2sq = s.step("solve for d2^2", "e2(κ1)² relation",
                              -e77.coefficient(Var::d2, 0) / e77.coefficient(Var::d2, 2));
  const SymExpr e88 = s.step("e22(k1) with d1 = 0 and d2^2 inserted", "e22(κ1) table",
                             t.e22.substitute(Var::d1, 0).substitute_power(Var::d2, 2, d2sq));
  s.check_value("e22(k1) from the table", shrinker ? "e22(κ1)=(α(2H−κ1)+2H(α+κ1(K−λ))+(2H−κ1)²(K−λ))/(2(κ1−H))"
                                                   : "e22(κ1)=(K−λ)/(2(κ1−H))(κ1²−2Hκ1+4H²)",
                e88, s.printed(pr.e88));
  const SymExpr e99 = s.step("derive the e2(k1)^2 relation along e2 and solve for d22",
                             "differentiating with respect to e2, e2(κ1)≠0", e77.derive(s.e2).solve_for(Var::d22));
  s.implicit_division("2*d2", "e2(κ1) ≠ 0 in Ω");
  s.check_value("e22(k1) by derivation", shrinker ? "e22(κ1)=(α−2(H−κ1)(4Hκ1−2κ1²−λ))/2" : "e22(κ1)=(κ1−H)(2K−λ)",
                e99, s.printed(pr.e99));
  if (!shrinker) {
    const SymExpr line = s.printed("(k1-H)*(2*H-lam) - (K-lam)/(2*(k1-H))*(k1^2-2*H*k1+4*H^2)");
    const char* line_cite = "(κ1−H)(2H−λ)=(K−λ)/(2(κ1−H))(κ1²−2Hκ1+4H²)";
    s.check_relation("equating the two e22(k1) expressions", line_cite, e99 - e88, line);
    s.check_relation("printed quartic against the printed equated line", line_cite, line, s.printed(pr.quartic));
  }
  const SymExpr fin = s.step("equate the two e22(k1) expressions, times 2(k1-H)", "equating both expressions",
                             (e99 - e88) * (2 * (k1 - H)));
  return s.finish(fin, s.printed(pr.quartic), quartic_cite, {Var::H, Var::lam, Var::alf});
}

struct MeanCase2Printed {
  const char* first;
  const char* second;
  const char* final;
};

DerivationReport replay_mean_case2(const ReplayOptions& o, bool shrinker) {
  Script s(shrinker ? "T2_CASE2" : "T1_CASE2", o);
  constant_mean_regime(s);
  const Tables t = second_derivative_tables(s, shrinker);
  const SymExpr k1 = s.f("k1"), k2 = s.f("k2"), K = s.f("K"), H = var(Var::H);
  const MeanCase2Printed pr =
      shrinker
          ? MeanCase2Printed{"2*d1^2 + 2*d2^2 + (2*H^2-2*H*k1+k1^2)*lam - 4*H^2*k1^2 + 4*H*k1^3 - alf*H - k1^4",
                             "2*H*d1^2 + 2*H*d2^2 + k1*(k1*(-4*H^3+10*H^2*k1-10*H*k1^2+3*k1^3-alf) - H*lam*(H-2*k1))",
                             "3*k1^4 - 6*H*k1^3 + H*lam*(2*H+k1) - k1*alf - H*alf"}
          : MeanCase2Printed{
                "2*d1^2 + 2*d2^2 + (2*H^2-2*H*k1+k1^2)*lam - k1^2*(2*H-k1)^2",
                "2*H*d1^2 + 2*H*d2^2 + k1*lam*(2*H^2-4*H*k1+3*k1^2) + k1^2*(2*H-3*k1)*(2*H-k1)^2",
                "(2*H^2-3*H*k1+k1^2)*(lam*(-2*H^2+2*H*k1-3*k1^2)+3*k1^2*(k1-2*H)^2)"};
  s.note("the printed first relation writes κ for κ1; it is read as κ1");

  const SymExpr gauss = s.step("Gauss identity in k1 and H", kGaussCite, K - gauss_curvature_expression(s, k1, k2));
  s.check_value("Gauss identity in k1 and H",
                "κ1(2H−κ1)=(e11(κ1)+e22(κ1))/(2(κ1−H))−3(e1(κ1)²+e2(κ1)²)/(4(κ1−H)²)", gauss,
                s.printed("K - ((d11+d22)/(2*(k1-H)) - 3*(d1^2+d2^2)/(4*(k1-H)^2))"));
  const SymExpr first = s.step("insert e11 and e22, times 2(k1-H)^2", "substituting the e11, e22 tables",
                               gauss.substitute(Var::d11, t.e11).substitute(Var::d22, t.e22) * (2 * (k1 - H).pow(2)));
  s.check_relation("first relation", "2e1(κ1)²+2e2(κ1)²+R1=0", first, s.printed(pr.first));
  const SymExpr derived = s.step("derive along e1", "differentiating with respect to e1", first.derive(s.e1));
  SymExpr second = s.step("insert e11 and e12", "using the e11, e12 tables",
                          derived.substitute(Var::d11, t.e11).substitute(Var::d12, t.e12));
  second = s.divide(second, "d1", "e1(κ1) ≠ 0 in this case");
  second = s.step("clear denominators by k1(k1-H)", "simplifying", second * (k1 * (k1 - H)));
  s.check_relation("second relation", "2He1(κ1)²+2He2(κ1)²+R2=0", second, s.printed(pr.second));

  SymExpr fin = s.step("eliminate e1(k1)^2 and e2(k1)^2 between the two relations", "combining both relations",
                       second.coefficient(Var::d1, 2) * first - first.coefficient(Var::d1, 2) * second);
  fin = s.try_divide(fin, "k1 - H", "κ1 − H ≠ 0 on the subdomain");
  return s.finish(fin, s.printed(pr.final),
                  shrinker ? "3κ1⁴−6Hκ1³+Hλ(2H+κ1)−κ1α−Hα=0" : "(2H²−3Hκ1+κ1²)(λ(−2H²+2Hκ1−3κ1²)+3κ1²(κ1−2H)²)=0",
                  {Var::H, Var::lam, Var::alf});
}

}  // namespace

const std::vector<std::string>& replay_case_ids() {
  static const std::vector<std::string> ids = {"T_C_K2NONZERO", "T1_CASE1",     "T1_CASE2", "TD_K2ZERO",
                                               "TD_K2NONZERO",  "T2_CASE1",     "T2_CASE2"};
  return ids;
}

DerivationReport replay(std::string_view case_id, const ReplayOptions& options) {
  if (case_id == "T_C_K2NONZERO") return replay_constant_k2_translating(options);
  if (case_id == "T1_CASE1") return replay_mean_case1(options, false);
  if (case_id == "T1_CASE2") return replay_mean_case2(options, false);
  if (case_id == "TD_K2ZERO") return replay_flat_shrinker(options);
  if (case_id == "TD_K2NONZERO") return replay_constant_k2_shrinker(options);
  if (case_id == "T2_CASE1") return replay_mean_case1(options, true);
  if (case_id == "T2_CASE2") return replay_mean_case2(options, true);
  throw UnknownCase("unknown replay case '" + std::string(case_id) + "'");
}

DerivationReport verify_second_derivative_tables(const ReplayOptions& options) {
  Script s("SECOND_DERIVATIVE_TABLES", options);
  constant_mean_regime(s);
  second_derivative_tables(s, false);
  second_derivative_tables(s, true);
  return s.finish_tables();
}

// --- JSON ------------------------------------------------------------------

namespace {

Poly parse_poly(const std::string& text) {
  const RationalFn f = parse_rational_fn(text);
  if (!f.is_polynomial()) throw ParseError("expected a polynomial, got '" + text + "'");
  return f.numerator();
}

}  // namespace

void to_json(nlohmann::json& j, const DerivationReport& r) {
  j = nlohmann::json::object();
  j["case"] = r.case_id;
  j["steps"] = nlohmann::json::array();
  for (const auto& s : r.steps) j["steps"].push_back({{"op", s.op}, {"cite", s.cite}, {"result_terms", s.result}});
  j["checks"] = nlohmann::json::array();
  for (const auto& c : r.checks) {
    j["checks"].push_back({{"name", c.name},
                           {"cite", c.cite},
                           {"mode", c.mode},
                           {"derived", c.derived},
                           {"printed", c.printed},
                           {"match", c.match},
                           {"scale", c.scale},
                           {"residual", c.residual}});
  }
  j["divisions"] = nlohmann::json::array();
  for (const auto& d : r.divisions) {
    j["divisions"].push_back({{"factor", d.factor}, {"justification", d.justification}, {"applied", d.applied}});
  }
  j["notes"] = r.notes;
  j["derived"] = r.derived.str();
  j["printed"] = r.printed.str();
  j["match"] = r.match;
  j["scale"] = r.scale.get_str();
  j["residual"] = r.residual.str();
  j["polynomial_in_k1"] = r.polynomial_in_k1;
}

void from_json(const nlohmann::json& j, DerivationReport& r) {
  try {
    r = DerivationReport{};
    r.case_id = j.at("case").get<std::string>();
    for (const auto& s : j.at("steps")) {
      r.steps.push_back({s.at("op").get<std::string>(), s.at("cite").get<std::string>(),
                         s.at("result_terms").get<std::string>()});
    }
    for (const auto& c : j.at("checks")) {
      ReplayCheck rc;
      rc.name = c.at("name").get<std::string>();
      rc.cite = c.at("cite").get<std::string>();
      rc.mode = c.at("mode").get<std::string>();
      rc.derived = c.at("derived").get<std::string>();
      rc.printed = c.at("printed").get<std::string>();
      rc.match = c.at("match").get<bool>();
      rc.scale = c.at("scale").get<std::string>();
      rc.residual = c.at("residual").get<std::string>();
      r.checks.push_back(std::move(rc));
    }
    for (const auto& d : j.at("divisions")) {
      r.divisions.push_back(
          {d.at("factor").get<std::string>(), d.at("justification").get<std::string>(), d.at("applied").get<bool>()});
    }
    r.notes = j.at("notes").get<std::vector<std::string>>();
    r.derived = parse_poly(j.at("derived").get<std::string>());
    r.printed = parse_poly(j.at("printed").get<std::string>());
    r.match = j.at("match").get<bool>();
    r.scale = mpq_class(j.at("scale").get<std::string>());
    r.residual = parse_poly(j.at("residual").get<std::string>());
    r.polynomial_in_k1 = j.at("polynomial_in_k1").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("derivation report: ") + e.what());
  }
}

}  // namespace gcflab
