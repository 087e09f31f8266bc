#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fjpop {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Raised for malformed user input (polynomial text, problem files, certificates).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : std::runtime_error(what + " (line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

inline Rational rational_from_double(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("non-finite value");
  if (v == 0.0) return Rational(0);
  int exp = 0;
  double mant = std::frexp(v, &exp);
  // 53 significant bits fit exactly into an int64 after scaling.
  auto scaled = static_cast<std::int64_t>(std::ldexp(mant, 53));
  exp -= 53;
  Rational r(scaled);
  if (exp > 0) {
    r *= Rational(BigInt(1) << exp);
  } else if (exp < 0) {
    r /= Rational(BigInt(1) << (-exp));
  }
  return r;
}

/// Parses "12", "-3/4" or a plain decimal "0.25" / "1e-3" into an exact rational.
inline Rational parse_rational(std::string_view text) {
  auto fail = [&] { throw std::invalid_argument("bad rational literal '" + std::string(text) + "'"); };
  if (text.empty()) fail();
  std::string s(text);
  auto slash = s.find('/');
  auto is_int = [](const std::string& t) {
    if (t.empty()) return false;
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  };
  auto to_int = [&](std::string t) {
    if (!t.empty() && t[0] == '+') t.erase(0, 1);
    return BigInt(t);
  };
  if (slash != std::string::npos) {
    std::string num = s.substr(0, slash), den = s.substr(slash + 1);
    if (!is_int(num) || !is_int(den)) fail();
    BigInt d = to_int(den);
    if (d == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
    return Rational(to_int(num), d);
  }
  if (is_int(s)) return Rational(to_int(s));

  // Decimal with optional exponent, converted exactly (0.1 -> 1/10).
  std::size_t i = 0;
  bool neg = false;
  if (s[i] == '+' || s[i] == '-') neg = s[i++] == '-';
  std::string digits;
  long frac_digits = 0;
  bool seen_dot = false, any = false;
  for (; i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.'); ++i) {
    if (s[i] == '.') {
      if (seen_dot) fail();
      seen_dot = true;
      continue;
    }
    any = true;
    digits.push_back(s[i]);
    if (seen_dot) ++frac_digits;
  }
  if (!any) fail();
  long exp10 = 0;
  if (i < s.size()) {
    if (s[i] != 'e' && s[i] != 'E') fail();
    std::string e = s.substr(i + 1);
    if (!is_int(e)) fail();
    exp10 = std::stol(e);
  }
  exp10 -= frac_digits;
  Rational r{BigInt(digits)};
  BigInt p10 = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(std::labs(exp10)));
  if (exp10 > 0) r *= Rational(p10);
  if (exp10 < 0) r /= Rational(p10);
  return neg ? Rational(-r) : r;
}

inline std::string to_string(const Rational& q) {
  if (boost::multiprecision::denominator(q) == 1) return boost::multiprecision::numerator(q).str();
  return boost::multiprecision::numerator(q).str() + "/" + boost::multiprecision::denominator(q).str();
}

}  // namespace fjpop
