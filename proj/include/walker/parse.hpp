#pragma once

#include <cctype>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>

#include "walker/errors.hpp"
#include "walker/poly4.hpp"
#include "walker/rational.hpp"

namespace walker {

/// Parameter bindings substituted at parse time.
using ParameterMap = std::map<std::string, Rational, std::less<>>;

namespace detail {

// Recursive descent over
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*      divisor must be a nonzero constant
//   factor := base ('^' uint)?
//   base   := int | name | '(' expr ')' | '-' factor
class ExpressionParser {
public:
  ExpressionParser(std::string_view text, const ParameterMap& params) : text_(text), params_(params) {}

  Poly4 parse() {
    Poly4 result = expr();
    skip_ws();
    if (pos_ != text_.size()) {
      throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
    }
    return result;
  }

private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])) != 0) {
      ++pos_;
    }
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Poly4 expr() {
    Poly4 acc = term();
    for (;;) {
      if (accept('+')) {
        acc += term();
      } else if (accept('-')) {
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  Poly4 term() {
    Poly4 acc = factor();
    for (;;) {
      if (accept('*')) {
        acc *= factor();
      } else if (accept('/')) {
        std::size_t at = pos_;
        Poly4 divisor = factor();
        if (!divisor.is_constant()) {
          throw ParseError("division by a non-constant expression", at);
        }
        if (divisor.is_zero()) {
          throw ParseError("division by zero", at);
        }
        acc = (Rational(1) / divisor.constant_term()) * acc;
      } else {
        return acc;
      }
    }
  }

  Poly4 factor() {
    Poly4 b = base();
    if (accept('^')) {
      skip_ws();
      std::size_t at = pos_;
      if (at < text_.size() && text_[at] == '-') {
        throw ParseError("negative exponent", at);
      }
      if (at >= text_.size() || std::isdigit(static_cast<unsigned char>(text_[at])) == 0) {
        throw ParseError("exponent must be a nonnegative integer literal", at);
      }
      std::string digits = read_digits();
      if (pos_ < text_.size() && text_[pos_] == '.') {
        throw ParseError("non-integer exponent", pos_);
      }
      if (digits.size() > 4) {
        throw ParseError("exponent too large", at);
      }
      b = b.pow(static_cast<std::uint32_t>(std::stoul(digits)));
    }
    return b;
  }

  Poly4 base() {
    skip_ws();
    if (pos_ >= text_.size()) {
      throw ParseError("unexpected end of expression", pos_);
    }
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Poly4 inner = expr();
      if (!accept(')')) {
        throw ParseError("expected ')'", pos_);
      }
      return inner;
    }
    if (c == '-') {
      ++pos_;
      return -factor();
    }
    if (std::isdigit(static_cast<unsigned char>(c)) != 0) {
      std::string digits = read_digits();
      if (pos_ < text_.size() && text_[pos_] == '.') {
        throw ParseError("decimal literals are not supported; use p/q", pos_);
      }
      return Poly4(Rational::parse(digits));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) != 0 || text_[pos_] == '_')) {
        ++pos_;
      }
      std::string_view name = text_.substr(start, pos_ - start);
      if (name.size() == 2 && name[0] == 'x' && name[1] >= '1' && name[1] <= '4') {
        return Poly4::variable(name[1] - '0');
      }
      auto it = params_.find(name);
      if (it == params_.end()) {
        throw UnboundParameter(std::string(name));
      }
      return Poly4(it->second);
    }
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  std::string read_digits() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])) != 0) {
      ++pos_;
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string_view text_;
  const ParameterMap& params_;
  std::size_t pos_ = 0;
};

} // namespace detail

/**
 * @brief Parses a polynomial expression in x1..x4, substituting bound parameters.
 *
 * Throws ParseError (with position) on malformed input or illegal division/exponent,
 * and UnboundParameter when a name other than x1..x4 has no binding.
 */
inline Poly4 parse(std::string_view text, const ParameterMap& params = {}) {
  return detail::ExpressionParser(text, params).parse();
}

} // namespace walker
