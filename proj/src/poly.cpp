#include "gcflab/poly.hpp"

#include <algorithm>
#include <sstream>

#include "gcflab/errors.hpp"
#include "gcflab/formula_parser.hpp"

namespace gcflab {

namespace {

constexpr std::array<std::string_view, kNumVars> kVarNames = {"k1", "k2", "H",   "lam", "alf", "d1", "d2",
                                                              "d11", "d12", "d21", "d22", "mu", "gam", "dmu"};

bool divides(const Monomial& a, const Monomial& b) {
  for (std::size_t i = 0; i < kNumVars; ++i) {
    if (a[i] > b[i]) return false;
  }
  return true;
}

Monomial monomial_product(const Monomial& a, const Monomial& b) {
  Monomial m{};
  for (std::size_t i = 0; i < kNumVars; ++i) m[i] = static_cast<std::uint16_t>(a[i] + b[i]);
  return m;
}

Monomial monomial_quotient(const Monomial& a, const Monomial& b) {
  Monomial m{};
  for (std::size_t i = 0; i < kNumVars; ++i) m[i] = static_cast<std::uint16_t>(a[i] - b[i]);
  return m;
}

bool is_unit_monomial(const Monomial& m) {
  return std::all_of(m.begin(), m.end(), [](std::uint16_t e) { return e == 0; });
}

}  // namespace

std::string_view var_name(Var x) { return kVarNames[static_cast<std::size_t>(x)]; }

std::optional<Var> var_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kNumVars; ++i) {
    if (kVarNames[i] == name) return static_cast<Var>(i);
  }
  return std::nullopt;
}

Poly::Poly(const mpq_class& c) {
  mpq_class q = c;
  q.canonicalize();
  if (q != 0) terms_.emplace(Monomial{}, q);
}

Poly::Poly(long c) : Poly(mpq_class(c)) {}

Poly Poly::variable(Var x) {
  Monomial m{};
  m[static_cast<std::size_t>(x)] = 1;
  return term(m, 1);
}

Poly Poly::term(const Monomial& m, const mpq_class& c) {
  Poly p;
  mpq_class q = c;
  q.canonicalize();
  if (q != 0) p.terms_.emplace(m, q);
  return p;
}

bool Poly::is_constant() const { return terms_.empty() || (terms_.size() == 1 && is_unit_monomial(terms_.begin()->first)); }

mpq_class Poly::constant_value() const {
  const auto it = terms_.find(Monomial{});
  return it == terms_.end() ? mpq_class(0) : it->second;
}

int Poly::degree(Var x) const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max<int>(d, m[static_cast<std::size_t>(x)]);
  return d;
}

std::vector<Var> Poly::variables() const {
  std::vector<Var> vars;
  for (std::size_t i = 0; i < kNumVars; ++i) {
    if (depends_on(static_cast<Var>(i))) vars.push_back(static_cast<Var>(i));
  }
  return vars;
}

Poly& Poly::operator+=(const Poly& b) {
  for (const auto& [m, c] : b.terms_) {
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }
  return *this;
}

Poly& Poly::operator-=(const Poly& b) { return *this += -b; }

Poly& Poly::operator*=(const Poly& b) { return *this = *this * b; }

Poly operator*(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      const Monomial m = monomial_product(ma, mb);
      auto [it, inserted] = out.terms_.emplace(m, ca * cb);
      if (!inserted) {
        it->second += ca * cb;
        if (it->second == 0) out.terms_.erase(it);
      }
    }
  }
  return out;
}

Poly operator-(const Poly& a) {
  Poly out = a;
  for (auto& [m, c] : out.terms_) c = -c;
  return out;
}

Poly Poly::pow(unsigned n) const {
  Poly result(1);
  Poly base = *this;
  while (n > 0) {
    if (n & 1U) result *= base;
    n >>= 1U;
    if (n > 0) base *= base;
  }
  return result;
}

Poly Poly::derivative(Var x) const {
  const auto i = static_cast<std::size_t>(x);
  Poly out;
  for (const auto& [m, c] : terms_) {
    if (m[i] == 0) continue;
    Monomial d = m;
    --d[i];
    out += term(d, c * m[i]);
  }
  return out;
}

Poly Poly::substitute(Var x, const Poly& value) const {
  const auto i = static_cast<std::size_t>(x);
  std::vector<Poly> powers = {Poly(1)};
  Poly out;
  for (const auto& [m, c] : terms_) {
    while (powers.size() <= m[i]) powers.push_back(powers.back() * value);
    Monomial rest = m;
    rest[i] = 0;
    out += term(rest, c) * powers[m[i]];
  }
  return out;
}

Poly Poly::coefficient(Var x, int k) const {
  const auto i = static_cast<std::size_t>(x);
  Poly out;
  for (const auto& [m, c] : terms_) {
    if (m[i] != k) continue;
    Monomial rest = m;
    rest[i] = 0;
    out += term(rest, c);
  }
  return out;
}

Monomial Poly::monomial_content() const {
  if (terms_.empty()) return Monomial{};
  Monomial g = terms_.begin()->first;
  for (const auto& [m, c] : terms_) {
    for (std::size_t i = 0; i < kNumVars; ++i) g[i] = std::min(g[i], m[i]);
  }
  return g;
}

mpq_class Poly::content() const {
  if (terms_.empty()) return 1;
  mpz_class num_gcd = 0;
  mpz_class den_lcm = 1;
  for (const auto& [m, c] : terms_) {
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num_mpz_t());
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den_mpz_t());
  }
  mpq_class g(num_gcd, den_lcm);
  g.canonicalize();
  if (leading_coefficient() < 0) g = -g;
  return g;
}

std::string Poly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [m, c] = *it;
    mpq_class mag = abs(c);
    if (first) {
      if (c < 0) out << "-";
    } else {
      out << (c < 0 ? " - " : " + ");
    }
    first = false;
    const bool unit = is_unit_monomial(m);
    bool need_star = false;
    if (mag != 1 || unit) {
      out << mag.get_str();
      need_star = true;
    }
    for (std::size_t i = 0; i < kNumVars; ++i) {
      if (m[i] == 0) continue;
      if (need_star) out << "*";
      out << kVarNames[i];
      if (m[i] > 1) out << "^" << m[i];
      need_star = true;
    }
  }
  return out.str();
}

std::optional<Poly> divide_exact(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw DivisionByZeroPoly("division by the zero polynomial");
  Poly q;
  Poly r = a;
  const Monomial& lb = b.leading_monomial();
  const mpq_class& cb = b.leading_coefficient();
  while (!r.is_zero()) {
    const Monomial& lr = r.leading_monomial();
    if (!divides(lb, lr)) return std::nullopt;
    const Poly t = Poly::term(monomial_quotient(lr, lb), r.leading_coefficient() / cb);
    q += t;
    r -= t * b;
  }
  return q;
}

// ---------------------------------------------------------------------------

RationalFn::RationalFn(Poly num) : num_(std::move(num)) {}

RationalFn RationalFn::quotient(const Poly& num, const Poly& den) {
  if (den.is_zero()) throw DivisionByZeroPoly("rational function with zero denominator");
  RationalFn r(num);
  r.add_factor(den, 1);
  r.cancel();
  return r;
}

void RationalFn::add_factor(Poly f, int e) {
  if (e == 0) return;
  // Constants and rational content move to the numerator.
  const mpq_class c = f.content();
  if (c != 1) {
    Poly scale(1);
    const mpq_class inv = 1 / c;
    for (int i = 0; i < e; ++i) scale *= Poly(inv);
    num_ *= scale;
    f = *divide_exact(f, Poly(c));
  }
  if (f.is_constant()) return;
  // Monomial content splits into single-variable factors.
  const Monomial mc = f.monomial_content();
  for (std::size_t i = 0; i < kNumVars; ++i) {
    if (mc[i] == 0) continue;
    const Poly x = Poly::variable(static_cast<Var>(i));
    if (!(f == x)) {
      add_factor(x, e * mc[i]);
      Monomial only{};
      only[i] = mc[i];
      f = *divide_exact(f, Poly::term(only, 1));
    }
  }
  if (f.is_constant()) return;
  // Split against factors already present.
  for (auto it = den_.begin(); it != den_.end(); ++it) {
    const Poly g = it->first;
    if (g == f) {
      it->second += e;
      return;
    }
    if (auto q = divide_exact(f, g)) {
      add_factor(g, e);
      add_factor(*q, e);
      return;
    }
    if (auto q = divide_exact(g, f)) {
      const int ge = it->second;
      den_.erase(it);
      add_factor(f, e + ge);
      add_factor(*q, ge);
      return;
    }
  }
  den_.emplace(std::move(f), e);
}

void RationalFn::cancel() {
  if (num_.is_zero()) {
    den_.clear();
    return;
  }
  for (auto it = den_.begin(); it != den_.end();) {
    while (it->second > 0) {
      auto q = divide_exact(num_, it->first);
      if (!q) break;
      num_ = std::move(*q);
      --it->second;
    }
    it = it->second == 0 ? den_.erase(it) : std::next(it);
  }
}

Poly RationalFn::denominator() const {
  Poly d(1);
  for (const auto& [f, e] : den_) d *= f.pow(static_cast<unsigned>(e));
  return d;
}

bool RationalFn::depends_on(Var x) const {
  if (num_.depends_on(x)) return true;
  return std::any_of(den_.begin(), den_.end(), [x](const auto& fe) { return fe.first.depends_on(x); });
}

RationalFn& RationalFn::operator+=(const RationalFn& b) {
  Factors lcm = den_;
  for (const auto& [f, e] : b.den_) lcm[f] = std::max(lcm[f], e);
  auto cofactor = [&](const Factors& own) {
    Poly p(1);
    for (const auto& [f, e] : lcm) {
      const auto it = own.find(f);
      const int have = it == own.end() ? 0 : it->second;
      p *= f.pow(static_cast<unsigned>(e - have));
    }
    return p;
  };
  num_ = num_ * cofactor(den_) + b.num_ * cofactor(b.den_);
  den_ = std::move(lcm);
  cancel();
  return *this;
}

RationalFn& RationalFn::operator-=(const RationalFn& b) { return *this += -b; }

RationalFn& RationalFn::operator*=(const RationalFn& b) {
  num_ *= b.num_;
  for (const auto& [f, e] : b.den_) add_factor(f, e);
  cancel();
  return *this;
}

RationalFn& RationalFn::operator/=(const RationalFn& b) {
  if (b.num_.is_zero()) throw DivisionByZeroPoly("division by the zero rational function");
  Poly top(1);
  for (const auto& [f, e] : b.den_) top *= f.pow(static_cast<unsigned>(e));
  num_ *= top;
  add_factor(b.num_, 1);
  cancel();
  return *this;
}

RationalFn operator-(const RationalFn& a) {
  RationalFn r = a;
  r.num_ = -r.num_;
  return r;
}

bool operator==(const RationalFn& a, const RationalFn& b) {
  return a.num_ * b.denominator() == b.num_ * a.denominator();
}

RationalFn RationalFn::pow(int n) const {
  if (n < 0) return RationalFn(1) / pow(-n);
  RationalFn result(1);
  for (int i = 0; i < n; ++i) result *= *this;
  return result;
}

RationalFn RationalFn::substitute(Var x, const RationalFn& value) const {
  auto subst_poly = [&](const Poly& p) {
    // Horner in x over the remaining variables.
    RationalFn acc(0);
    for (int k = p.degree(x); k >= 0; --k) acc = acc * value + RationalFn(p.coefficient(x, k));
    return acc;
  };
  RationalFn out = subst_poly(num_);
  for (const auto& [f, e] : den_) out /= subst_poly(f).pow(e);
  return out;
}

std::string RationalFn::str() const {
  if (den_.empty()) return num_.str();
  std::string out = "(" + num_.str() + ")/(";
  bool first = true;
  for (const auto& [f, e] : den_) {
    if (!first) out += "*";
    first = false;
    const bool single = f.terms().size() == 1;
    out += single ? f.str() : "(" + f.str() + ")";
    if (e > 1) out += "^" + std::to_string(e);
  }
  return out + ")";
}

namespace {

struct RationalBuilder {
  using Value = RationalFn;
  const std::map<std::string, RationalFn>& macros;

  Value constant(const mpq_class& c) const { return RationalFn(Poly(c)); }
  Value identifier(std::string_view name) const {
    if (const auto it = macros.find(std::string(name)); it != macros.end()) return it->second;
    if (const auto x = var_from_name(name)) return RationalFn(Poly::variable(*x));
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

RationalFn parse_rational_fn(std::string_view text, const std::map<std::string, RationalFn>& macros) {
  RationalBuilder b{macros};
  return detail::FormulaParser<RationalBuilder>(text, b).parse();
}

}  // namespace gcflab
