#pragma once

#include <cctype>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cpgeo/field/rational_function.hpp"

namespace cpgeo {

/// Raised for malformed scalar expressions; `position` is a 0-based offset
/// into the parsed text.
class ScalarSyntaxError : public std::runtime_error {
 public:
  ScalarSyntaxError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

namespace detail {

// Grammar (docs/scalar-grammar.md):
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('+' | '-') unary | power
//   power   := primary ('^' integer)?
//   primary := integer | identifier | '(' expr ')'
class ScalarParser {
 public:
  ScalarParser(std::string_view text, const std::vector<std::string>& vars) : s_(text), vars_(vars) {}

  RationalFunction parse() {
    skip();
    if (pos_ == s_.size()) fail("empty expression");
    RationalFunction r = expr();
    skip();
    if (pos_ != s_.size()) fail(std::string("unexpected character '") + s_[pos_] + "'");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ScalarSyntaxError(msg, pos_); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  RationalFunction expr() {
    RationalFunction acc = term();
    while (true) {
      if (accept('+')) acc += term();
      else if (accept('-')) acc -= term();
      else return acc;
    }
  }

  RationalFunction term() {
    RationalFunction acc = unary();
    while (true) {
      if (accept('*')) {
        acc *= unary();
      } else if (accept('/')) {
        skip();
        const std::size_t at = pos_;
        RationalFunction d = unary();
        if (d.is_zero()) {
          pos_ = at;
          fail("division by zero");
        }
        acc /= d;
      } else {
        return acc;
      }
    }
  }

  RationalFunction unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  RationalFunction power() {
    RationalFunction base = primary();
    if (accept('^')) {
      skip();
      if (pos_ < s_.size() && s_[pos_] == '-') fail("negative exponent");
      const std::size_t at = pos_;
      const std::string digits = integer_digits();
      if (digits.size() > 6) {
        pos_ = at;
        fail("exponent too large");
      }
      base = base.pow(static_cast<unsigned>(std::stoul(digits)));
      skip();
      if (pos_ < s_.size() && s_[pos_] == '^') fail("chained exponent needs parentheses");
    }
    return base;
  }

  std::string integer_digits() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ == start) fail("expected integer");
    return std::string(s_.substr(start, pos_ - start));
  }

  RationalFunction primary() {
    skip();
    if (pos_ == s_.size()) fail("unexpected end of expression");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      RationalFunction r = expr();
      if (!accept(')')) fail("expected ')'");
      return r;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::string digits = integer_digits();
      if (pos_ < s_.size() && s_[pos_] == '.') fail("decimal literals are not part of the grammar");
      return RationalFunction(Q(mpz_class(digits)));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      const std::string name(s_.substr(start, pos_ - start));
      for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i] == name) return RationalFunction::variable(i);
      pos_ = start;
      fail("unknown variable '" + name + "'");
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string_view s_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

inline std::string var_name(const std::vector<std::string>& vars, std::size_t i) {
  return i < vars.size() ? vars[i] : "x" + std::to_string(i);
}

inline std::string monomial_text(const Monomial& m, const std::vector<std::string>& vars) {
  std::string out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] == 0) continue;
    if (!out.empty()) out += '*';
    out += var_name(vars, i);
    if (m[i] > 1) out += '^' + std::to_string(m[i]);
  }
  return out;
}

inline bool is_single_power(const Polynomial& p) {
  if (p.terms().size() != 1 || p.leading().c != 1) return false;
  int vars = 0;
  for (auto e : p.leading().m.exponents()) vars += e > 0;
  return vars == 1;
}

}  // namespace detail

/// Parses an expression into canonical form; `vars` names the chart variables
/// in order. Throws ScalarSyntaxError on anything outside the grammar.
inline RationalFunction parse_scalar(std::string_view text, const std::vector<std::string>& vars = {}) {
  return detail::ScalarParser(text, vars).parse();
}

inline std::string to_string(const Q& q) { return q.get_str(); }

/// Canonical text of a polynomial, terms in descending graded-lex order.
inline std::string to_string(const Polynomial& p, const std::vector<std::string>& vars = {}) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : p.terms()) {
    const bool neg = t.c < 0;
    const Q mag = neg ? Q(-t.c) : t.c;
    if (first) out += neg ? "-" : "";
    else out += neg ? " - " : " + ";
    first = false;
    const std::string mono = detail::monomial_text(t.m, vars);
    if (mono.empty()) out += mag.get_str();
    else if (mag == 1) out += mono;
    else out += mag.get_str() + "*" + mono;
  }
  return out;
}

/// Canonical text in the scalar grammar; parse_scalar(to_string(s)) == s.
inline std::string to_string(const RationalFunction& s, const std::vector<std::string>& vars = {}) {
  if (s.is_polynomial()) return to_string(s.numerator(), vars);
  std::string num = to_string(s.numerator(), vars);
  if (s.numerator().terms().size() > 1) num = "(" + num + ")";
  std::string den = to_string(s.denominator(), vars);
  if (!detail::is_single_power(s.denominator())) den = "(" + den + ")";
  return num + "/" + den;
}

}  // namespace cpgeo
