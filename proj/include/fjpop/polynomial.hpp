#pragma once

#include "fjpop/numeric.hpp"

#include <algorithm>
#include <cstddef>
#include <limits>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fjpop {

/// Exponent vector x^a over a fixed number of ambient variables.
///
/// Ordered graded-lexicographically: total degree first, then lexicographic
/// comparison of the exponent vectors. With this order the degree-1
/// monomials over (x1, x2) sort as x2 < x1.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(std::size_t nvars) : exps_(nvars, 0) {}
  explicit Monomial(std::vector<int> exps) : exps_(std::move(exps)) {
    for (int e : exps_)
      if (e < 0) throw std::invalid_argument("negative exponent");
    for (int e : exps_) degree_ += e;
  }

  static Monomial unit(std::size_t nvars, std::size_t var) {
    std::vector<int> e(nvars, 0);
    e.at(var) = 1;
    return Monomial(std::move(e));
  }

  std::size_t nvars() const noexcept { return exps_.size(); }
  int degree() const noexcept { return degree_; }
  int operator[](std::size_t i) const { return exps_[i]; }
  const std::vector<int>& exponents() const noexcept { return exps_; }

  Monomial operator*(const Monomial& o) const {
    check_same(o);
    std::vector<int> e(exps_);
    for (std::size_t i = 0; i < e.size(); ++i) e[i] += o.exps_[i];
    return Monomial(std::move(e));
  }

  /// Graded-lex three-way comparison; throws for different ambient sizes.
  int compare(const Monomial& o) const {
    check_same(o);
    if (degree_ != o.degree_) return degree_ < o.degree_ ? -1 : 1;
    for (std::size_t i = 0; i < exps_.size(); ++i)
      if (exps_[i] != o.exps_[i]) return exps_[i] < o.exps_[i] ? -1 : 1;
    return 0;
  }

  bool operator<(const Monomial& o) const { return compare(o) < 0; }
  bool operator==(const Monomial& o) const { return exps_ == o.exps_; }
  bool operator!=(const Monomial& o) const { return !(*this == o); }

 private:
  void check_same(const Monomial& o) const {
    if (exps_.size() != o.exps_.size())
      throw std::invalid_argument("monomials over different ambient variable counts");
  }

  std::vector<int> exps_;
  int degree_ = 0;
};

/// Degree reported for the zero polynomial; compares below every real degree.
inline constexpr int kZeroPolynomialDegree = std::numeric_limits<int>::min();

/// Sparse multivariate polynomial with exact rational coefficients.
class Polynomial {
 public:
  using Terms = std::map<Monomial, Rational>;

  Polynomial() = default;
  explicit Polynomial(std::size_t nvars) : nvars_(nvars) {}

  static Polynomial constant(std::size_t nvars, const Rational& c) {
    Polynomial p(nvars);
    p.add_term(Monomial(nvars), c);
    return p;
  }
  static Polynomial variable(std::size_t nvars, std::size_t i) {
    if (i >= nvars) throw std::out_of_range("variable index out of range");
    Polynomial p(nvars);
    p.add_term(Monomial::unit(nvars, i), Rational(1));
    return p;
  }
  static Polynomial monomial(const Monomial& m, const Rational& c = Rational(1)) {
    Polynomial p(m.nvars());
    p.add_term(m, c);
    return p;
  }

  std::size_t nvars() const noexcept { return nvars_; }
  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }

  int degree() const noexcept {
    return terms_.empty() ? kZeroPolynomialDegree : terms_.rbegin()->first.degree();
  }

  Rational coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  void add_term(const Monomial& m, const Rational& c) {
    if (m.nvars() != nvars_) throw std::invalid_argument("term has wrong ambient variable count");
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Polynomial& operator+=(const Polynomial& o) {
    check_same(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    check_same(o);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  Polynomial& operator*=(const Rational& s) {
    if (s == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, c] : terms_) c *= s;
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Rational& s) { return a *= s; }
  friend Polynomial operator*(const Rational& s, Polynomial a) { return a *= s; }
  Polynomial operator-() const { return *this * Rational(-1); }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check_same(b);
    Polynomial r(a.nvars_);
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
    return r;
  }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  Polynomial pow(unsigned e) const {
    Polynomial result = constant(nvars_, Rational(1));
    Polynomial base = *this;
    while (e) {
      if (e & 1u) result *= base;
      e >>= 1u;
      if (e) base *= base;
    }
    return result;
  }

  bool operator==(const Polynomial& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }
  bool operator!=(const Polynomial& o) const { return !(*this == o); }

  /// Embeds into a larger ambient space: `before` new variables are placed
  /// ahead of the current ones, `after` behind them.
  Polynomial lift(std::size_t before, std::size_t after) const {
    Polynomial r(before + nvars_ + after);
    for (const auto& [m, c] : terms_) {
      std::vector<int> e(before, 0);
      e.insert(e.end(), m.exponents().begin(), m.exponents().end());
      e.resize(before + nvars_ + after, 0);
      r.terms_.emplace(Monomial(std::move(e)), c);
    }
    return r;
  }

  /// Exact value at a rational point.
  Rational evaluate(std::span<const Rational> point) const {
    if (point.size() != nvars_) throw std::invalid_argument("evaluation point has wrong dimension");
    Rational total(0);
    for (const auto& [m, c] : terms_) {
      Rational t = c;
      for (std::size_t i = 0; i < nvars_; ++i)
        for (int k = 0; k < m[i]; ++k) t *= point[i];
      total += t;
    }
    return total;
  }

  double evaluate(std::span<const double> point) const {
    if (point.size() != nvars_) throw std::invalid_argument("evaluation point has wrong dimension");
    double total = 0.0;
    for (const auto& [m, c] : terms_) {
      double t = to_double(c);
      for (std::size_t i = 0; i < nvars_; ++i)
        for (int k = 0; k < m[i]; ++k) t *= point[i];
      total += t;
    }
    return total;
  }

 private:
  void check_same(const Polynomial& o) const {
    if (nvars_ != o.nvars_) throw std::invalid_argument("polynomials over different ambient variable counts");
  }

  std::size_t nvars_ = 0;
  Terms terms_;
};

inline Polynomial differentiate(const Polynomial& p, std::size_t i) {
  if (i >= p.nvars()) throw std::out_of_range("differentiation index out of range");
  Polynomial r(p.nvars());
  for (const auto& [m, c] : p.terms()) {
    if (m[i] == 0) continue;
    std::vector<int> e = m.exponents();
    Rational k(e[i]);
    --e[i];
    r.add_term(Monomial(std::move(e)), c * k);
  }
  return r;
}

inline std::vector<Polynomial> gradient(const Polynomial& p) {
  std::vector<Polynomial> g;
  g.reserve(p.nvars());
  for (std::size_t i = 0; i < p.nvars(); ++i) g.push_back(differentiate(p, i));
  return g;
}

inline int ceil_half_degree(const Polynomial& p) {
  int d = p.degree();
  return d <= 0 ? 0 : (d + 1) / 2;
}

/// All monomials of degree <= order in `nvars` variables, graded-lex increasing.
class MonomialBasis {
 public:
  MonomialBasis(std::size_t nvars, int order) : nvars_(nvars), order_(order) {
    if (nvars == 0) throw std::invalid_argument("monomial basis needs at least one variable");
    if (order < 0) throw std::invalid_argument("negative basis order");
    std::vector<int> e(nvars, 0);
    for (int deg = 0; deg <= order; ++deg) {
      // Lexicographically increasing exponent vectors of total degree `deg`.
      std::vector<Monomial> layer;
      enumerate(e, 0, deg, layer);
      for (auto& m : layer) elements_.push_back(std::move(m));
    }
    for (std::size_t i = 0; i < elements_.size(); ++i) index_.emplace(elements_[i], i);
  }

  std::size_t nvars() const noexcept { return nvars_; }
  int order() const noexcept { return order_; }
  std::size_t size() const noexcept { return elements_.size(); }
  const Monomial& operator[](std::size_t i) const { return elements_[i]; }
  const std::vector<Monomial>& elements() const noexcept { return elements_; }
  auto begin() const { return elements_.begin(); }
  auto end() const { return elements_.end(); }

  /// Position of `m`, or size() when it is not in the basis.
  std::size_t index_of(const Monomial& m) const {
    auto it = index_.find(m);
    return it == index_.end() ? elements_.size() : it->second;
  }

 private:
  static void enumerate(std::vector<int>& e, std::size_t pos, int remaining, std::vector<Monomial>& out) {
    if (pos + 1 == e.size()) {
      e[pos] = remaining;
      out.emplace_back(e);
      e[pos] = 0;
      return;
    }
    for (int k = 0; k <= remaining; ++k) {
      e[pos] = k;
      enumerate(e, pos + 1, remaining - k, out);
    }
    e[pos] = 0;
  }

  std::size_t nvars_;
  int order_;
  std::vector<Monomial> elements_;
  std::map<Monomial, std::size_t> index_;
};

inline MonomialBasis monomial_basis(std::size_t nvars, int order) { return MonomialBasis(nvars, order); }

/// max |p| over the uniform tensor grid on [-1,1]^n; a lower bound on the sup norm.
inline double max_norm_estimate(const Polynomial& p, int grid_points_per_axis) {
  if (grid_points_per_axis < 2) throw std::invalid_argument("grid needs at least two points per axis");
  const std::size_t n = p.nvars();
  if (n == 0) return p.is_zero() ? 0.0 : std::abs(to_double(p.terms().begin()->second));
  std::vector<double> axis(grid_points_per_axis);
  for (int i = 0; i < grid_points_per_axis; ++i)
    axis[i] = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(grid_points_per_axis - 1);
  std::vector<int> idx(n, 0);
  std::vector<double> pt(n);
  double best = 0.0;
  while (true) {
    for (std::size_t i = 0; i < n; ++i) pt[i] = axis[idx[i]];
    best = std::max(best, std::abs(p.evaluate(std::span<const double>(pt))));
    std::size_t k = 0;
    while (k < n && ++idx[k] == grid_points_per_axis) idx[k++] = 0;
    if (k == n) break;
  }
  return best;
}

}  // namespace fjpop
