#pragma once

#include <cctype>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include "gcflab/errors.hpp"

namespace gcflab::detail {

/// Recursive-descent parser for symbolic formulas:
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := '-' unary | power
///   power   := primary ('^' ['-'] integer)?
///   primary := integer | identifier | '(' expr ')'
/// The Builder supplies the value type and the operations, so the same
/// grammar yields rational functions, expression trees or numbers.
template <typename Builder>
class FormulaParser {
 public:
  using Value = typename Builder::Value;

  FormulaParser(std::string_view text, Builder& builder) : text_(text), b_(builder) {}

  Value parse() {
    Value v = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected character");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + " at offset " + std::to_string(pos_) + " in '" + std::string(text_) + "'");
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Value expr() {
    Value v = term();
    while (true) {
      if (accept('+')) {
        v = b_.add(v, term());
      } else if (accept('-')) {
        v = b_.sub(v, term());
      } else {
        return v;
      }
    }
  }

  Value term() {
    Value v = unary();
    while (true) {
      if (accept('*')) {
        v = b_.mul(v, unary());
      } else if (accept('/')) {
        v = b_.div(v, unary());
      } else {
        return v;
      }
    }
  }

  Value unary() {
    if (accept('-')) return b_.neg(unary());
    return power();
  }

  Value power() {
    Value base = primary();
    if (!accept('^')) return base;
    const bool paren = accept('(');
    const bool negative = accept('-');
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer exponent");
    int n = std::stoi(std::string(text_.substr(start, pos_ - start)));
    if (paren && !accept(')')) fail("expected ')'");
    return b_.pow(base, negative ? -n : n);
  }

  Value primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Value v = expr();
      if (!accept(')')) fail("expected ')'");
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      return b_.constant(mpq_class(std::string(text_.substr(start, pos_ - start))));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      const std::string_view name = text_.substr(start, pos_ - start);
      try {
        return b_.identifier(name);
      } catch (const ParseError& e) {
        pos_ = start;
        fail(e.what());
      }
    }
    fail("unexpected character");
  }

  std::string_view text_;
  Builder& b_;
  std::size_t pos_ = 0;
};

}  // namespace gcflab::detail
