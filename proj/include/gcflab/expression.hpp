#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "gcflab/errors.hpp"
#include "gcflab/jet.hpp"

namespace gcflab {

/// Compiled scalar expression in the parameters u, v.
///
/// Grammar (lowest to highest precedence):
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := ('-' | '+') unary | power
///   power   := primary ('^' integer)?
///   primary := number | ident | func '(' expr ')' | '(' expr ')'
/// with func in {sin, cos, exp, sqrt, log}. Identifiers are u, v, pi or a
/// named parameter; parameters are folded to constants at parse time.
class Expression {
 public:
  enum class Op { Const, U, V, Add, Sub, Mul, Div, Neg, Pow, Sin, Cos, Exp, Sqrt, Log };

  struct Node {
    Op op;
    double value = 0.0;  // Const
    int exponent = 0;    // Pow
    int lhs = -1;
    int rhs = -1;
  };

  static Expression parse(std::string_view text, const std::map<std::string, double>& params = {});

  template <typename T>
  T eval(const T& u, const T& v) const {
    return eval_node<T>(root_, u, v);
  }

  const std::string& source() const { return source_; }

 private:
  template <typename T>
  T eval_node(int idx, const T& u, const T& v) const {
    using std::cos;
    using std::exp;
    using std::log;
    using std::pow;
    using std::sin;
    using std::sqrt;
    const Node& n = nodes_[static_cast<std::size_t>(idx)];
    switch (n.op) {
      case Op::Const:
        return T(n.value);
      case Op::U:
        return u;
      case Op::V:
        return v;
      case Op::Add:
        return eval_node<T>(n.lhs, u, v) + eval_node<T>(n.rhs, u, v);
      case Op::Sub:
        return eval_node<T>(n.lhs, u, v) - eval_node<T>(n.rhs, u, v);
      case Op::Mul:
        return eval_node<T>(n.lhs, u, v) * eval_node<T>(n.rhs, u, v);
      case Op::Div:
        return eval_node<T>(n.lhs, u, v) / eval_node<T>(n.rhs, u, v);
      case Op::Neg:
        return -eval_node<T>(n.lhs, u, v);
      case Op::Pow:
        return int_pow(eval_node<T>(n.lhs, u, v), n.exponent);
      case Op::Sin:
        return sin(eval_node<T>(n.lhs, u, v));
      case Op::Cos:
        return cos(eval_node<T>(n.lhs, u, v));
      case Op::Exp:
        return exp(eval_node<T>(n.lhs, u, v));
      case Op::Sqrt:
        return sqrt(eval_node<T>(n.lhs, u, v));
      case Op::Log:
        return log(eval_node<T>(n.lhs, u, v));
    }
    return T(0.0);
  }

  static double int_pow(double x, int n) { return std::pow(x, n); }
  static Jet2d int_pow(const Jet2d& x, int n) { return pow(x, n); }

  friend class ExpressionParser;

  std::vector<Node> nodes_;
  int root_ = -1;
  std::string source_;
};

}  // namespace gcflab
