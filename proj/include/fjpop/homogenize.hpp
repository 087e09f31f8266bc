#pragma once

#include "fjpop/polynomial.hpp"

#include <span>
#include <stdexcept>
#include <vector>

namespace fjpop {

/// Element a + b*sqrt(2) of Q[sqrt 2].
struct QSqrt2 {
  Rational a{0};
  Rational b{0};

  QSqrt2() = default;
  QSqrt2(Rational ra, Rational rb = Rational(0)) : a(std::move(ra)), b(std::move(rb)) {}

  static QSqrt2 inv_sqrt2() { return {Rational(0), Rational(1, 2)}; }

  friend QSqrt2 operator+(const QSqrt2& x, const QSqrt2& y) { return {x.a + y.a, x.b + y.b}; }
  friend QSqrt2 operator-(const QSqrt2& x, const QSqrt2& y) { return {x.a - y.a, x.b - y.b}; }
  friend QSqrt2 operator*(const QSqrt2& x, const QSqrt2& y) {
    return {x.a * y.a + 2 * x.b * y.b, x.a * y.b + x.b * y.a};
  }
  bool operator==(const QSqrt2& o) const { return a == o.a && b == o.b; }

  double to_double() const { return fjpop::to_double(a) + fjpop::to_double(b) * 1.4142135623730951; }
};

/// Polynomial over Q[sqrt 2], stored as rational + sqrt2 * irrational parts.
struct SqrtTwoPolynomial {
  Polynomial rational_part;
  Polynomial sqrt2_part;

  std::size_t nvars() const noexcept { return rational_part.nvars(); }

  int degree() const noexcept { return std::max(rational_part.degree(), sqrt2_part.degree()); }

  QSqrt2 evaluate(std::span<const QSqrt2> point) const {
    if (point.size() != nvars()) throw std::invalid_argument("evaluation point has wrong dimension");
    auto eval = [&](const Polynomial& p) {
      QSqrt2 total;
      for (const auto& [m, c] : p.terms()) {
        QSqrt2 t(c);
        for (std::size_t i = 0; i < m.nvars(); ++i)
          for (int k = 0; k < m[i]; ++k) t = t * point[i];
        total = total + t;
      }
      return total;
    };
    return eval(rational_part) + QSqrt2(Rational(0), Rational(1)) * eval(sqrt2_part);
  }
};

/// x0^(2*xi) * p(x / (x0*sqrt 2)) with xi = ceil(deg p / 2); x0 is prepended
/// as variable 0. A term of total degree t picks up 1/2^(t/2) when t is even
/// and sqrt2/2^((t+1)/2) when t is odd.
inline SqrtTwoPolynomial homogenize_scale(const Polynomial& p) {
  if (p.is_zero()) throw std::invalid_argument("homogenize_scale of the zero polynomial");
  const int xi = ceil_half_degree(p);
  const std::size_t n = p.nvars();
  SqrtTwoPolynomial out{Polynomial(n + 1), Polynomial(n + 1)};
  for (const auto& [m, c] : p.terms()) {
    const int t = m.degree();
    std::vector<int> e;
    e.reserve(n + 1);
    e.push_back(2 * xi - t);
    e.insert(e.end(), m.exponents().begin(), m.exponents().end());
    const int halves = (t + 1) / 2;
    Rational coef = c / Rational(BigInt(1) << halves);
    if (t % 2 == 0) {
      out.rational_part.add_term(Monomial(std::move(e)), coef);
    } else {
      out.sqrt2_part.add_term(Monomial(std::move(e)), coef);
    }
  }
  return out;
}

}  // namespace fjpop
