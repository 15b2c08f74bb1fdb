#include "gcflab/expression.hpp"

#include <cctype>
#include <charconv>
#include <numbers>

namespace gcflab {

class ExpressionParser {
 public:
  ExpressionParser(std::string_view text, const std::map<std::string, double>& params)
      : text_(text), params_(params) {}

  Expression run() {
    out_.source_ = std::string(text_);
    out_.root_ = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return std::move(out_);
  }

 private:
  using Op = Expression::Op;

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("expression '" + std::string(text_) + "' at offset " + std::to_string(pos_) + ": " +
                     what);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  int push(Expression::Node n) {
    out_.nodes_.push_back(n);
    return static_cast<int>(out_.nodes_.size()) - 1;
  }

  int parse_expr() {
    int lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = push({Op::Add, 0.0, 0, lhs, parse_term()});
      } else if (accept('-')) {
        lhs = push({Op::Sub, 0.0, 0, lhs, parse_term()});
      } else {
        return lhs;
      }
    }
  }

  int parse_term() {
    int lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = push({Op::Mul, 0.0, 0, lhs, parse_unary()});
      } else if (accept('/')) {
        lhs = push({Op::Div, 0.0, 0, lhs, parse_unary()});
      } else {
        return lhs;
      }
    }
  }

  int parse_unary() {
    if (accept('-')) return push({Op::Neg, 0.0, 0, parse_unary(), -1});
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  int parse_power() {
    const int base = parse_primary();
    if (!accept('^')) return base;
    return push({Op::Pow, 0.0, parse_int_exponent(), base, -1});
  }

  // '^' takes an integer literal, optionally signed or parenthesised.
  int parse_int_exponent() {
    if (accept('(')) {
      const int e = parse_int_exponent();
      if (!accept(')')) fail("expected ')' after exponent");
      return e;
    }
    bool neg = false;
    if (accept('-')) {
      neg = true;
    } else {
      accept('+');
    }
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("exponent must be an integer literal");
    int e = 0;
    const auto res = std::from_chars(text_.data() + start, text_.data() + pos_, e);
    if (res.ec != std::errc{}) fail("exponent out of range");
    return neg ? -e : e;
  }

  int parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (accept('(')) {
      const int inner = parse_expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    fail(std::string("unexpected character '") + c + "'");
  }

  int parse_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    };
    digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      const std::size_t exp_start = pos_;
      digits();
      if (exp_start == pos_) pos_ = save;
    }
    double value = 0.0;
    const auto res = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (res.ec != std::errc{} || res.ptr != text_.data() + pos_) fail("malformed number");
    return push({Op::Const, value, 0, -1, -1});
  }

  int parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string name(text_.substr(start, pos_ - start));

    static const std::map<std::string, Op> functions = {
        {"sin", Op::Sin}, {"cos", Op::Cos}, {"exp", Op::Exp}, {"sqrt", Op::Sqrt}, {"log", Op::Log}};
    if (auto f = functions.find(name); f != functions.end()) {
      if (!accept('(')) fail("expected '(' after " + name);
      const int arg = parse_expr();
      if (!accept(')')) fail("expected ')' closing " + name);
      return push({f->second, 0.0, 0, arg, -1});
    }
    if (name == "u") return push({Op::U, 0.0, 0, -1, -1});
    if (name == "v") return push({Op::V, 0.0, 0, -1, -1});
    if (auto p = params_.find(name); p != params_.end()) return push({Op::Const, p->second, 0, -1, -1});
    if (name == "pi") return push({Op::Const, std::numbers::pi, 0, -1, -1});
    fail("unknown identifier '" + name + "'");
  }

  std::string_view text_;
  const std::map<std::string, double>& params_;
  std::size_t pos_ = 0;
  Expression out_;
};

Expression Expression::parse(std::string_view text, const std::map<std::string, double>& params) {
  return ExpressionParser(text, params).run();
}

}  // namespace gcflab
