#include "gcflab/derivation.hpp"

#include "gcflab/errors.hpp"
#include "gcflab/formula_parser.hpp"

namespace gcflab {

const RationalFn& DerivationRule::image(Var x) const {
  const auto it = images.find(x);
  if (it == images.end()) {
    throw MissingImage("derivation along " + std::string(direction == Direction::E1 ? "e1" : "e2") +
                       " has no image for " + std::string(var_name(x)));
  }
  return it->second;
}

RationalFn derive(const Poly& p, const DerivationRule& rule) {
  RationalFn out(0);
  for (Var x : p.variables()) out += RationalFn(p.derivative(x)) * rule.image(x);
  return out;
}

RationalFn derive(const RationalFn& f, const DerivationRule& rule) {
  RationalFn inv_den(1);
  RationalFn log_derivative(0);  // D(den) / den
  for (const auto& [g, e] : f.denominator_factors()) {
    inv_den /= RationalFn(g).pow(e);
    log_derivative += RationalFn(e) * derive(g, rule) / RationalFn(g);
  }
  const RationalFn num(f.numerator());
  return derive(f.numerator(), rule) * inv_den - num * inv_den * log_derivative;
}

// ---------------------------------------------------------------------------

NilNumber::NilNumber(const mpq_class& c) {
  if (c != 0) parts_.emplace(0U, c);
}

NilNumber NilNumber::infinitesimal(unsigned slot) {
  NilNumber n;
  n.parts_.emplace(1U << slot, mpq_class(1));
  return n;
}

mpq_class NilNumber::real() const {
  const auto it = parts_.find(0U);
  return it == parts_.end() ? mpq_class(0) : it->second;
}

void NilNumber::add(std::uint32_t mask, const mpq_class& c) {
  auto [it, inserted] = parts_.emplace(mask, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) parts_.erase(it);
  }
}

NilNumber NilNumber::part(unsigned slot) const {
  const std::uint32_t bit = 1U << slot;
  NilNumber out;
  for (const auto& [m, c] : parts_) {
    if (m & bit) out.add(m & ~bit, c);
  }
  return out;
}

NilNumber operator+(const NilNumber& a, const NilNumber& b) {
  NilNumber out = a;
  for (const auto& [m, c] : b.parts_) out.add(m, c);
  return out;
}

NilNumber operator-(const NilNumber& a) {
  NilNumber out = a;
  for (auto& [m, c] : out.parts_) c = -c;
  return out;
}

NilNumber operator-(const NilNumber& a, const NilNumber& b) { return a + (-b); }

NilNumber operator*(const NilNumber& a, const NilNumber& b) {
  NilNumber out;
  for (const auto& [ma, ca] : a.parts_) {
    for (const auto& [mb, cb] : b.parts_) {
      if ((ma & mb) == 0) out.add(ma | mb, ca * cb);
    }
  }
  return out;
}

NilNumber operator/(const NilNumber& a, const NilNumber& b) {
  const mpq_class b0 = b.real();
  if (b0 == 0) throw DivisionByZeroPoly("numeric evaluation hit a pole");
  const NilNumber inv0(1 / b0);
  const NilNumber nil = b - NilNumber(b0);
  // 1/(b0 + n) = sum_k (-n)^k / b0^(k+1); the series stops because n is nilpotent.
  NilNumber term = inv0;
  NilNumber sum = inv0;
  while (true) {
    term = term * (-nil) * inv0;
    if (term.is_zero()) break;
    sum = sum + term;
  }
  return a * sum;
}

// ---------------------------------------------------------------------------

struct SymExpr::Node {
  Kind kind = Kind::Literal;
  RationalFn literal;
  Var var = Var::k1;
  int exponent = 0;
  std::vector<SymExpr> children;
  std::shared_ptr<const TreeRule> rule;
  std::string justification;
  mutable std::optional<RationalFn> cache;
  mutable bool applied = false;
};

DerivationRule TreeRule::symbolic() const {
  DerivationRule r;
  r.direction = direction;
  for (const auto& [x, img] : images) r.images.emplace(x, img.value());
  return r;
}

namespace {

std::shared_ptr<SymExpr::Node> make_node(SymExpr::Kind kind, std::vector<SymExpr> children) {
  auto n = std::make_shared<SymExpr::Node>();
  n->kind = kind;
  n->children = std::move(children);
  return n;
}

// p with x^k replaced by value; powers of x must be multiples of k.
RationalFn substitute_power_poly(const Poly& p, Var x, int k, const RationalFn& value) {
  RationalFn acc(0);
  const int deg = p.degree(x);
  for (int e = deg; e >= 0; --e) {
    const Poly c = p.coefficient(x, e);
    if (c.is_zero()) continue;
    if (e % k != 0) {
      throw NotDivisible(std::string(var_name(x)) + "^" + std::to_string(e) + " is not a power of " +
                         std::string(var_name(x)) + "^" + std::to_string(k));
    }
    acc += RationalFn(c) * value.pow(e / k);
  }
  return acc;
}

}  // namespace

SymExpr::SymExpr() : SymExpr(RationalFn(0)) {}

SymExpr::SymExpr(std::shared_ptr<Node> node) : node_(std::move(node)) {}

SymExpr::SymExpr(const RationalFn& value) : node_(make_node(Kind::Literal, {})) { node_->literal = value; }

SymExpr::SymExpr(long c) : SymExpr(RationalFn(c)) {}

SymExpr SymExpr::variable(Var x) {
  auto n = make_node(Kind::Variable, {});
  n->var = x;
  n->literal = RationalFn(Poly::variable(x));
  return SymExpr(n);
}

SymExpr operator+(const SymExpr& a, const SymExpr& b) { return SymExpr(make_node(SymExpr::Kind::Add, {a, b})); }
SymExpr operator-(const SymExpr& a, const SymExpr& b) { return SymExpr(make_node(SymExpr::Kind::Sub, {a, b})); }
SymExpr operator*(const SymExpr& a, const SymExpr& b) { return SymExpr(make_node(SymExpr::Kind::Mul, {a, b})); }
SymExpr operator/(const SymExpr& a, const SymExpr& b) { return SymExpr(make_node(SymExpr::Kind::Div, {a, b})); }
SymExpr operator-(const SymExpr& a) { return SymExpr(make_node(SymExpr::Kind::Neg, {a})); }

SymExpr SymExpr::pow(int n) const {
  auto node = make_node(Kind::Pow, {*this});
  node->exponent = n;
  return SymExpr(node);
}

SymExpr SymExpr::derive(std::shared_ptr<const TreeRule> rule) const {
  auto node = make_node(Kind::Derive, {*this});
  node->rule = std::move(rule);
  return SymExpr(node);
}

SymExpr SymExpr::substitute(Var x, const SymExpr& value) const {
  auto node = make_node(Kind::Subst, {*this, value});
  node->var = x;
  return SymExpr(node);
}

SymExpr SymExpr::substitute_power(Var x, int k, const SymExpr& value) const {
  if (k < 1) throw InvalidSpec("substitute_power needs k >= 1");
  auto node = make_node(Kind::SubstPower, {*this, value});
  node->var = x;
  node->exponent = k;
  return SymExpr(node);
}

SymExpr SymExpr::solve_for(Var x) const {
  auto node = make_node(Kind::Solve, {*this});
  node->var = x;
  return SymExpr(node);
}

SymExpr SymExpr::coefficient(Var x, int k) const {
  auto node = make_node(Kind::Coefficient, {*this});
  node->var = x;
  node->exponent = k;
  return SymExpr(node);
}

SymExpr SymExpr::divide_by(const SymExpr& factor, std::string justification) const {
  auto node = make_node(Kind::DivideBy, {*this, factor});
  node->justification = std::move(justification);
  return SymExpr(node);
}

SymExpr SymExpr::try_divide_by(const SymExpr& factor, std::string justification) const {
  auto node = make_node(Kind::TryDivide, {*this, factor});
  node->justification = std::move(justification);
  return SymExpr(node);
}

SymExpr::Kind SymExpr::kind() const { return node_->kind; }
const std::string& SymExpr::justification() const { return node_->justification; }
bool SymExpr::division_applied() const {
  value();
  return node_->applied;
}
const SymExpr& SymExpr::child(std::size_t i) const { return node_->children.at(i); }

const RationalFn& SymExpr::value() const {
  if (node_->cache) return *node_->cache;
  const auto& ch = node_->children;
  RationalFn v;
  switch (node_->kind) {
    case Kind::Literal:
    case Kind::Variable: v = node_->literal; break;
    case Kind::Add: v = ch[0].value() + ch[1].value(); break;
    case Kind::Sub: v = ch[0].value() - ch[1].value(); break;
    case Kind::Mul: v = ch[0].value() * ch[1].value(); break;
    case Kind::Div: v = ch[0].value() / ch[1].value(); break;
    case Kind::Neg: v = -ch[0].value(); break;
    case Kind::Pow: v = ch[0].value().pow(node_->exponent); break;
    case Kind::Derive: v = gcflab::derive(ch[0].value(), node_->rule->symbolic()); break;
    case Kind::Subst: v = ch[0].value().substitute(node_->var, ch[1].value()); break;
    case Kind::SubstPower: {
      const RationalFn& f = ch[0].value();
      const RationalFn& val = ch[1].value();
      v = substitute_power_poly(f.numerator(), node_->var, node_->exponent, val);
      for (const auto& [g, e] : f.denominator_factors()) {
        v /= substitute_power_poly(g, node_->var, node_->exponent, val).pow(e);
      }
      break;
    }
    case Kind::Solve: {
      const RationalFn& f = ch[0].value();
      const Var x = node_->var;
      const Poly& num = f.numerator();
      if (num.degree(x) != 1 || f.denominator().depends_on(x)) {
        throw InvalidSpec("equation is not affine in " + std::string(var_name(x)));
      }
      v = RationalFn::quotient(-num.coefficient(x, 0), num.coefficient(x, 1));
      break;
    }
    case Kind::Coefficient: {
      const RationalFn& f = ch[0].value();
      if (f.denominator().depends_on(node_->var)) {
        throw InvalidSpec("denominator depends on " + std::string(var_name(node_->var)));
      }
      v = RationalFn::quotient(f.numerator().coefficient(node_->var, node_->exponent), f.denominator());
      break;
    }
    case Kind::DivideBy: v = ch[0].value() / ch[1].value(); break;
    case Kind::TryDivide: {
      const RationalFn& f = ch[0].value();
      const RationalFn& g = ch[1].value();
      node_->applied = g.is_polynomial() && !g.is_zero() && divide_exact(f.numerator(), g.numerator()).has_value();
      v = node_->applied ? f / g : f;
      break;
    }
  }
  node_->cache = std::move(v);
  return *node_->cache;
}

NilNumber SymExpr::evaluate(const NumericPoint& point) const {
  std::map<Var, NilNumber> env;
  for (const auto& [x, q] : point) env.emplace(x, NilNumber(q));
  return eval(env, 0);
}

std::vector<NilNumber> SymExpr::interpolate(const std::map<Var, NilNumber>& env, unsigned depth) const {
  // The first child, as a polynomial in x, through n + 1 consecutive
  // integer nodes; the nodes are shifted when one of them hits a pole.
  const SymExpr& f = node_->children[0];
  const Var x = node_->var;
  const int n = f.value().numerator().degree(x);
  for (int offset = 1;; ++offset) {
    std::vector<NilNumber> dd;
    try {
      for (int i = 0; i <= n; ++i) {
        std::map<Var, NilNumber> at = env;
        at[x] = NilNumber(mpq_class(offset + i));
        dd.push_back(f.eval(at, depth));
      }
    } catch (const DivisionByZeroPoly&) {
      if (offset > 2 * n + 8) throw;
      continue;
    }
    // Newton divided differences; nodes are offset + i.
    for (int j = 1; j <= n; ++j) {
      for (int i = n; i >= j; --i) dd[i] = (dd[i] - dd[i - 1]) / NilNumber(mpq_class(j));
    }
    // Expand the Newton form into monomial coefficients.
    std::vector<NilNumber> poly = {dd[n]};
    for (int i = n - 1; i >= 0; --i) {
      const NilNumber node(mpq_class(offset + i));
      std::vector<NilNumber> next(poly.size() + 1);
      for (std::size_t t = 0; t < poly.size(); ++t) {
        next[t + 1] = next[t + 1] + poly[t];
        next[t] = next[t] - node * poly[t];
      }
      next[0] = next[0] + dd[i];
      poly = std::move(next);
    }
    return poly;
  }
}

NilNumber SymExpr::eval(const std::map<Var, NilNumber>& env, unsigned depth) const {
  const auto& ch = node_->children;
  auto lookup = [&](Var x) -> NilNumber {
    const auto it = env.find(x);
    if (it == env.end()) throw InvalidSpec("no numeric value for " + std::string(var_name(x)));
    return it->second;
  };
  switch (node_->kind) {
    case Kind::Literal: return node_->literal.evaluate<NilNumber>(lookup);
    case Kind::Variable: return lookup(node_->var);
    case Kind::Add: return ch[0].eval(env, depth) + ch[1].eval(env, depth);
    case Kind::Sub: return ch[0].eval(env, depth) - ch[1].eval(env, depth);
    case Kind::Mul: return ch[0].eval(env, depth) * ch[1].eval(env, depth);
    case Kind::Div: return ch[0].eval(env, depth) / ch[1].eval(env, depth);
    case Kind::Neg: return -ch[0].eval(env, depth);
    case Kind::Pow: {
      const NilNumber b = ch[0].eval(env, depth);
      const int n = node_->exponent;
      NilNumber r(mpq_class(1));
      for (int i = 0; i < std::abs(n); ++i) r = r * b;
      return n < 0 ? NilNumber(mpq_class(1)) / r : r;
    }
    case Kind::Derive: {
      // Move every variable along its image by an infinitesimal eps_depth
      // and read off the first-order part.
      std::map<Var, NilNumber> moved = env;
      const NilNumber eps = NilNumber::infinitesimal(depth);
      for (const auto& [x, img] : node_->rule->images) {
        if (!env.count(x)) continue;
        moved[x] = env.at(x) + eps * img.eval(env, depth + 1);
      }
      return ch[0].eval(moved, depth + 1).part(depth);
    }
    case Kind::Subst: {
      std::map<Var, NilNumber> inner = env;
      inner[node_->var] = ch[1].eval(env, depth);
      return ch[0].eval(inner, depth);
    }
    case Kind::SubstPower: {
      // Replace x^(jk) by value^j in the interpolated polynomial.
      const int k = node_->exponent;
      const std::vector<NilNumber> coef = interpolate(env, depth);
      const NilNumber val = ch[1].eval(env, depth);
      NilNumber out;
      NilNumber power(mpq_class(1));
      for (std::size_t e = 0; e < coef.size(); ++e) {
        if (e % static_cast<std::size_t>(k) == 0) {
          out = out + coef[e] * power;
          power = power * val;
        } else if (!coef[e].is_zero()) {
          throw NotDivisible("odd power survives numeric substitution");
        }
      }
      return out;
    }
    case Kind::Coefficient: {
      const std::vector<NilNumber> coef = interpolate(env, depth);
      const auto k = static_cast<std::size_t>(node_->exponent);
      return k < coef.size() ? coef[k] : NilNumber();
    }
    case Kind::Solve: {
      std::map<Var, NilNumber> at = env;
      at[node_->var] = NilNumber(mpq_class(0));
      const NilNumber f0 = ch[0].eval(at, depth);
      at[node_->var] = NilNumber(mpq_class(1));
      const NilNumber f1 = ch[0].eval(at, depth);
      return -f0 / (f1 - f0);
    }
    case Kind::DivideBy: return ch[0].eval(env, depth) / ch[1].eval(env, depth);
    case Kind::TryDivide:
      return division_applied() ? ch[0].eval(env, depth) / ch[1].eval(env, depth) : ch[0].eval(env, depth);
  }
  throw InvalidSpec("unknown expression node");
}

namespace {

struct TreeBuilder {
  using Value = SymExpr;
  const std::map<std::string, SymExpr>& macros;

  Value constant(const mpq_class& c) const { return SymExpr(RationalFn(Poly(c))); }
  Value identifier(std::string_view name) const {
    if (const auto it = macros.find(std::string(name)); it != macros.end()) return it->second;
    if (const auto x = var_from_name(name)) return SymExpr::variable(*x);
    throw ParseError("unknown symbol '" + std::string(name) + "'");
  }
  Value add(const Value& a, const Value& b) const { return a + b; }
  Value sub(const Value& a, const Value& b) const { return a - b; }
  Value mul(const Value& a, const Value& b) const { return a * b; }
  Value div(const Value& a, const Value& b) const { return a / b; }
  Value neg(const Value& a) const { return -a; }
  Value pow(const Value& a, int n) const { return a.pow(n); }
};

}  // namespace

SymExpr SymExpr::parse(std::string_view text, const std::map<std::string, SymExpr>& macros) {
  TreeBuilder b{macros};
  return detail::FormulaParser<TreeBuilder>(text, b).parse();
}

}  // namespace gcflab
