#pragma once

// Text form of polynomials: "2*x1^2*x2 - 1/3", parentheses and integer
// powers allowed, division only by nonzero constants.

#include "fjpop/polynomial.hpp"

#include <cctype>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace fjpop {

namespace detail {

class PolyParser {
 public:
  PolyParser(std::string_view text, const std::vector<std::string>& vars) : text_(text), vars_(vars) {}

  Polynomial parse() {
    skip_ws();
    if (pos_ == text_.size()) fail("empty polynomial");
    Polynomial p = expr();
    skip_ws();
    if (pos_ != text_.size()) fail(std::string("unexpected '") + text_[pos_] + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError("polynomial: " + msg, line, col);
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

  Polynomial expr() {
    Polynomial acc = term();
    while (true) {
      if (accept('+')) {
        acc += term();
      } else if (accept('-')) {
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  Polynomial term() {
    Polynomial acc = unary();
    while (true) {
      if (accept('*')) {
        acc *= unary();
      } else if (accept('/')) {
        Polynomial d = unary();
        if (d.degree() > 0) fail("division by a non-constant");
        if (d.is_zero()) fail("division by zero");
        acc *= Rational(1) / d.terms().begin()->second;
      } else {
        return acc;
      }
    }
  }

  Polynomial unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Polynomial power() {
    Polynomial base = primary();
    if (accept('^')) {
      skip_ws();
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("expected a non-negative integer exponent");
      unsigned long e = std::stoul(std::string(text_.substr(start, pos_ - start)));
      if (e > 4096) fail("exponent too large");
      base = base.pow(static_cast<unsigned>(e));
    }
    return base;
  }

  Polynomial primary() {
    skip_ws();
    if (pos_ == text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Polynomial p = expr();
      if (!accept(')')) fail("expected ')'");
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
        ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
        std::size_t save = pos_++;
        if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) ++pos_;
        if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
          while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        } else {
          pos_ = save;
        }
      }
      std::string lit(text_.substr(start, pos_ - start));
      try {
        return Polynomial::constant(vars_.size(), parse_rational(lit));
      } catch (const std::invalid_argument&) {
        pos_ = start;
        fail("bad number '" + lit + "'");
      }
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      std::string name(text_.substr(start, pos_ - start));
      for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i] == name) return Polynomial::variable(vars_.size(), i);
      pos_ = start;
      fail("unknown variable '" + name + "'");
    }
    fail(std::string("unexpected '") + c + "'");
  }

  std::string_view text_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Polynomial parse_polynomial(std::string_view text, const std::vector<std::string>& vars) {
  return detail::PolyParser(text, vars).parse();
}

/// Default variable names x1..xn.
inline std::vector<std::string> default_variable_names(std::size_t n) {
  std::vector<std::string> v;
  for (std::size_t i = 1; i <= n; ++i) v.push_back("x" + std::to_string(i));
  return v;
}

inline std::string format_monomial(const Monomial& m, const std::vector<std::string>& vars) {
  std::string out;
  for (std::size_t i = 0; i < m.nvars(); ++i) {
    if (m[i] == 0) continue;
    if (!out.empty()) out += '*';
    out += vars.at(i);
    if (m[i] > 1) out += '^' + std::to_string(m[i]);
  }
  return out.empty() ? "1" : out;
}

/// Terms in decreasing graded-lex order, e.g. "2*x1^2*x2 - 1/3".
inline std::string format_polynomial(const Polynomial& p, const std::vector<std::string>& vars) {
  if (vars.size() != p.nvars()) throw std::invalid_argument("variable name count mismatch");
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    const auto& [m, c] = *it;
    Rational mag = c < 0 ? Rational(-c) : c;
    if (first) {
      if (c < 0) out += '-';
    } else {
      out += c < 0 ? " - " : " + ";
    }
    first = false;
    if (m.degree() == 0) {
      out += to_string(mag);
    } else {
      if (mag != 1) out += to_string(mag) + "*";
      out += format_monomial(m, vars);
    }
  }
  return out;
}

}  // namespace fjpop
