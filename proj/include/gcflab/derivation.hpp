#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gcflab/poly.hpp"

namespace gcflab {

class SymExpr;

enum class Direction { E1, E2 };

/// Formal derivation along e1 or e2: a Leibniz map fixed by the images of
/// the indeterminates. Indeterminates without an image cannot be derived.
struct DerivationRule {
  Direction direction = Direction::E1;
  std::map<Var, RationalFn> images;

  const RationalFn& image(Var x) const;  // throws MissingImage
};

/// Sum over variables x of dp/dx * image(x).
RationalFn derive(const Poly& p, const DerivationRule& rule);
/// Quotient rule on top of the polynomial case.
RationalFn derive(const RationalFn& f, const DerivationRule& rule);

/// Element of Q[eps_0, eps_1, ...] / (eps_i^2): exact numbers carrying one
/// nilpotent infinitesimal per nested derivation. Used to evaluate
/// expression trees numerically, independently of the symbolic engine.
class NilNumber {
 public:
  NilNumber() = default;
  NilNumber(const mpq_class& c);  // NOLINT
  static NilNumber infinitesimal(unsigned slot);

  const std::map<std::uint32_t, mpq_class>& parts() const { return parts_; }
  mpq_class real() const;
  /// Coefficient of eps_slot, as a number in the remaining infinitesimals.
  NilNumber part(unsigned slot) const;
  bool is_zero() const { return parts_.empty(); }

  friend NilNumber operator+(const NilNumber& a, const NilNumber& b);
  friend NilNumber operator-(const NilNumber& a, const NilNumber& b);
  friend NilNumber operator*(const NilNumber& a, const NilNumber& b);
  friend NilNumber operator/(const NilNumber& a, const NilNumber& b);  // throws DivisionByZeroPoly
  friend NilNumber operator-(const NilNumber& a);
  friend bool operator==(const NilNumber& a, const NilNumber& b) { return a.parts_ == b.parts_; }

 private:
  void add(std::uint32_t mask, const mpq_class& c);
  std::map<std::uint32_t, mpq_class> parts_;
};

using NumericPoint = std::map<Var, mpq_class>;

struct TreeRule;

/// Immutable expression tree over the indeterminates. Besides arithmetic it
/// records the replay operations (derivation, substitution, solving,
/// division), so the same tree can be evaluated symbolically (to a
/// RationalFn) or numerically at a rational point (to a NilNumber).
/// Trees cache their symbolic value; a tree must not be evaluated from
/// several threads at once.
class SymExpr {
 public:
  enum class Kind { Literal, Variable, Add, Sub, Mul, Div, Neg, Pow, Derive, Subst, SubstPower, Solve, Coefficient, DivideBy, TryDivide };

  SymExpr();  // literal 0
  SymExpr(const RationalFn& value);  // NOLINT
  SymExpr(long c);                   // NOLINT
  static SymExpr variable(Var x);
  static SymExpr parse(std::string_view text, const std::map<std::string, SymExpr>& macros = {});

  friend SymExpr operator+(const SymExpr& a, const SymExpr& b);
  friend SymExpr operator-(const SymExpr& a, const SymExpr& b);
  friend SymExpr operator*(const SymExpr& a, const SymExpr& b);
  friend SymExpr operator/(const SymExpr& a, const SymExpr& b);
  friend SymExpr operator-(const SymExpr& a);
  SymExpr pow(int n) const;

  /// rule applied to this expression.
  SymExpr derive(std::shared_ptr<const TreeRule> rule) const;
  /// this with x replaced by value.
  SymExpr substitute(Var x, const SymExpr& value) const;
  /// this with x^k replaced by value; every power of x must be a multiple of k.
  SymExpr substitute_power(Var x, int k, const SymExpr& value) const;
  /// Root of this = 0, which must be affine in x.
  SymExpr solve_for(Var x) const;
  /// Coefficient of x^k; the denominator must not involve x.
  SymExpr coefficient(Var x, int k) const;
  /// this / factor, with the reason the factor is nonzero.
  SymExpr divide_by(const SymExpr& factor, std::string justification) const;
  /// this / factor when factor divides the numerator exactly, else this.
  SymExpr try_divide_by(const SymExpr& factor, std::string justification) const;

  Kind kind() const;
  const std::string& justification() const;
  /// For TryDivide nodes after symbolic evaluation: whether it divided.
  bool division_applied() const;
  const SymExpr& child(std::size_t i) const;

  /// Symbolic value (cached). Throws MissingImage, DivisionByZeroPoly,
  /// NotDivisible (substitute_power) or InvalidSpec (solve_for not affine).
  const RationalFn& value() const;
  /// Exact value at a rational point, with derivations carried by
  /// nilpotent infinitesimals. Throws DivisionByZeroPoly on a pole.
  NilNumber evaluate(const NumericPoint& point) const;

  struct Node;  // defined in the implementation file

 private:
  explicit SymExpr(std::shared_ptr<Node> node);
  NilNumber eval(const std::map<Var, NilNumber>& env, unsigned depth) const;
  std::vector<NilNumber> interpolate(const std::map<Var, NilNumber>& env, unsigned depth) const;

  std::shared_ptr<Node> node_;
};

/// Derivation rule whose images are expression trees.
struct TreeRule {
  Direction direction = Direction::E1;
  std::map<Var, SymExpr> images;

  /// The same rule with symbolic images.
  DerivationRule symbolic() const;
};

}  // namespace gcflab
