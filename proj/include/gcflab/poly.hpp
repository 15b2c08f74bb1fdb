#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace gcflab {

/// Indeterminates of the symbolic engine, in lex order (k1 highest).
/// d1, d2 stand for e1(kappa1), e2(kappa1); dij for ei(ej(kappa1));
/// mu, gam for the frame components of the driving field; dmu for e2(mu)
/// while it is still unknown.
enum class Var : std::uint8_t { k1, k2, H, lam, alf, d1, d2, d11, d12, d21, d22, mu, gam, dmu };
inline constexpr std::size_t kNumVars = 14;

std::string_view var_name(Var x);
std::optional<Var> var_from_name(std::string_view name);

using Monomial = std::array<std::uint16_t, kNumVars>;

/// Multivariate polynomial over Q in canonical form (no zero coefficients).
class Poly {
 public:
  using Terms = std::map<Monomial, mpq_class>;

  Poly() = default;
  Poly(const mpq_class& c);  // NOLINT: constants convert implicitly
  Poly(long c);              // NOLINT
  static Poly variable(Var x);
  static Poly term(const Monomial& m, const mpq_class& c);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  mpq_class constant_value() const;  // the constant term
  int degree(Var x) const;
  bool depends_on(Var x) const { return degree(x) > 0; }
  std::vector<Var> variables() const;

  /// Leading term in lex order.
  const Monomial& leading_monomial() const { return terms_.rbegin()->first; }
  const mpq_class& leading_coefficient() const { return terms_.rbegin()->second; }

  Poly& operator+=(const Poly& b);
  Poly& operator-=(const Poly& b);
  Poly& operator*=(const Poly& b);

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a);
  friend bool operator==(const Poly& a, const Poly& b) { return a.terms_ == b.terms_; }
  friend bool operator<(const Poly& a, const Poly& b) { return a.terms_ < b.terms_; }

  Poly pow(unsigned n) const;
  Poly derivative(Var x) const;
  Poly substitute(Var x, const Poly& value) const;
  /// Coefficient of x^k, as a polynomial in the remaining variables.
  Poly coefficient(Var x, int k) const;

  /// Greatest monomial dividing every term.
  Monomial monomial_content() const;
  /// Positive rational c with this / c having coprime integer coefficients
  /// and a positive leading coefficient (sign folded into c).
  mpq_class content() const;

  template <typename T>
  T evaluate(const std::function<T(Var)>& value) const {
    T sum(mpq_class(0));
    for (const auto& [m, c] : terms_) {
      T prod(c);
      for (std::size_t i = 0; i < kNumVars; ++i) {
        if (m[i] == 0) continue;
        const T base = value(static_cast<Var>(i));
        for (unsigned e = 0; e < m[i]; ++e) prod = prod * base;
      }
      sum = sum + prod;
    }
    return sum;
  }

  /// Terms in decreasing lex order, e.g. "3*k1^2 - 6*k1*k2 + 3*lam".
  std::string str() const;

 private:
  Terms terms_;
};

/// q with a = q * b when b divides a exactly, else nullopt.
/// Throws DivisionByZeroPoly when b is zero.
std::optional<Poly> divide_exact(const Poly& a, const Poly& b);

/// Quotient of polynomials. The denominator is kept as a product of
/// primitive factors so that sums use a least common denominator, and
/// factors dividing the numerator are cancelled after every operation.
class RationalFn {
 public:
  using Factors = std::map<Poly, int>;

  RationalFn() = default;
  RationalFn(Poly num);  // NOLINT
  RationalFn(long c) : RationalFn(Poly(c)) {}  // NOLINT
  /// Throws DivisionByZeroPoly when den is zero.
  static RationalFn quotient(const Poly& num, const Poly& den);

  const Poly& numerator() const { return num_; }
  const Factors& denominator_factors() const { return den_; }
  Poly denominator() const;
  bool is_polynomial() const { return den_.empty(); }
  bool is_zero() const { return num_.is_zero(); }
  bool depends_on(Var x) const;

  RationalFn& operator+=(const RationalFn& b);
  RationalFn& operator-=(const RationalFn& b);
  RationalFn& operator*=(const RationalFn& b);
  RationalFn& operator/=(const RationalFn& b);
  friend RationalFn operator+(RationalFn a, const RationalFn& b) { return a += b; }
  friend RationalFn operator-(RationalFn a, const RationalFn& b) { return a -= b; }
  friend RationalFn operator*(RationalFn a, const RationalFn& b) { return a *= b; }
  friend RationalFn operator/(RationalFn a, const RationalFn& b) { return a /= b; }
  friend RationalFn operator-(const RationalFn& a);
  /// Equality by cross-multiplication.
  friend bool operator==(const RationalFn& a, const RationalFn& b);

  RationalFn pow(int n) const;
  RationalFn substitute(Var x, const RationalFn& value) const;

  template <typename T>
  T evaluate(const std::function<T(Var)>& value) const {
    T den(mpq_class(1));
    for (const auto& [f, e] : den_) {
      const T fv = f.template evaluate<T>(value);
      for (int i = 0; i < e; ++i) den = den * fv;
    }
    return num_.template evaluate<T>(value) / den;
  }

  /// "num" or "(num)/(f1^2*(f2))".
  std::string str() const;

 private:
  void add_factor(Poly f, int e);
  void cancel();

  Poly num_;
  Factors den_;
};

/// Parses a formula over the indeterminates with + - * / ^ (integer
/// exponents), parentheses and integer literals; rational literals are
/// written as quotients. `macros` maps extra names (e.g. "K") to values.
RationalFn parse_rational_fn(std::string_view text, const std::map<std::string, RationalFn>& macros = {});

}  // namespace gcflab
