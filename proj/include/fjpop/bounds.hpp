#pragma once

// Degree-bound arithmetic: bit(d), c(n,d,s), b(n,d,s), the representation
// bounds w and the relaxation orders r built from them.
//
// Values like b(n,d,s) = 2^2^E are far beyond any big integer, so they are
// held as TowerBound expression trees. A node evaluates to an exact integer
// whenever the result has at most kExactBitCap bits; otherwise it keeps its
// structure and carries a level-index magnitude interval
// [exp2^k(lo), exp2^k(hi)] used for ordering.

#include "fjpop/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <compare>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fjpop {

inline constexpr std::size_t kExactBitCap = std::size_t{1} << 20;

namespace li {

// A point exp2^level(v). Canonical form: smallest level with v <= 2^1000.
struct Point {
  int level = 0;
  long double v = 0.0L;
};

inline const long double kLimit = std::ldexp(1.0L, 1000);
inline constexpr long double kLogLimit = 1000.0L;
inline constexpr long double kSlack = 1e-16L;

inline long double nudge(long double v, int dir) {
  if (v == 0.0L || !std::isfinite(v)) return v;
  return v + static_cast<long double>(dir) * std::fabs(v) * kSlack;
}

inline Point canon(Point p) {
  if (std::isnan(p.v)) throw std::domain_error("magnitude is not a number");
  if (std::isinf(p.v)) return {p.level + 1, p.v};
  while (p.v > kLimit) {
    p.v = std::log2(p.v);
    ++p.level;
  }
  while (p.level > 0 && p.v <= kLogLimit) {
    p.v = std::exp2(p.v);
    --p.level;
  }
  return p;
}

inline int cmp(const Point& a, const Point& b) {
  if (a.level != b.level) return a.level < b.level ? -1 : 1;
  if (a.v == b.v) return 0;
  return a.v < b.v ? -1 : 1;
}

/// log2 applied `level - p.level` times (or exp2 when negative), as a plain number.
inline long double coord(const Point& p, int level) {
  long double v = p.v;
  for (int k = p.level; k < level; ++k) {
    if (v <= 0.0L) return -INFINITY;
    v = std::log2(v);
  }
  for (int k = p.level; k > level; --k) {
    if (v > 16000.0L) return INFINITY;
    v = std::exp2(v);
  }
  return v;
}

inline Point from_long_double(long double x, int dir) { return canon({0, nudge(x, dir)}); }

inline Point from_bigint(const BigInt& e, int dir) {
  if (e <= 0) return {0, 0.0L};
  const std::size_t bits = boost::multiprecision::msb(e) + 1;
  if (bits <= 1000) return from_long_double(e.convert_to<long double>(), dir);
  const std::size_t shift = bits - 64;
  BigInt top = e >> shift;
  long double m = top.convert_to<long double>();
  return canon({1, nudge(static_cast<long double>(shift) + std::log2(m), dir)});
}

/// A nonnegative rational, rounded down (dir < 0) or up.
inline Point from_rational(const Rational& q, int dir) {
  if (q <= 0) return {0, 0.0L};
  const BigInt num = boost::multiprecision::numerator(q), den = boost::multiprecision::denominator(q);
  if (boost::multiprecision::msb(num) < 1000 && boost::multiprecision::msb(den) < 1000)
    return from_long_double(q.convert_to<long double>(), dir);
  const BigInt fl = num / den;
  return from_bigint(dir < 0 ? fl : BigInt(fl + 1), dir);
}

inline Point pow2(Point a) {
  if (a.level == 0) {
    if (a.v <= kLogLimit) return canon({0, std::exp2(a.v)});
    return canon({1, a.v});
  }
  return canon({a.level + 1, a.v});
}

inline Point log2(Point a) {
  if (a.level >= 1) return canon({a.level - 1, a.v});
  if (a.v <= 0.0L) return {0, 0.0L};
  return canon({0, std::log2(a.v)});
}

inline Point add(Point a, Point b, int dir) {
  if (cmp(a, b) < 0) std::swap(a, b);
  if (b.level == 0 && b.v == 0.0L) return a;
  if (a.level == 0) return canon({0, nudge(a.v + b.v, dir)});
  if (a.level == 1) {
    long double bb = coord(b, 1);
    return canon({1, nudge(a.v + std::log2(1.0L + std::exp2(bb - a.v)), dir)});
  }
  return canon({a.level, nudge(a.v, dir)});
}

inline Point mul(Point a, Point b, int dir) {
  if ((a.level == 0 && a.v == 0.0L) || (b.level == 0 && b.v == 0.0L)) return {0, 0.0L};
  if (cmp(a, b) < 0) std::swap(a, b);
  if (a.level == 0) return canon({0, nudge(a.v * b.v, dir)});
  if (a.level == 1) return canon({1, nudge(a.v + coord(b, 1), dir)});
  if (a.level == 2) {
    long double lb = coord(b, 1);
    if (b.level <= 1) {
      long double la = coord(a, 1);
      long double ratio = std::isfinite(la) ? lb / la : 0.0L;
      return canon({2, nudge(a.v + std::log2(1.0L + ratio), dir)});
    }
    return canon({2, nudge(a.v + std::log2(1.0L + std::exp2(b.v - a.v)), dir)});
  }
  return canon({a.level, nudge(a.v, dir)});
}

inline Point half(Point a, int dir) {
  if (a.level == 0) return canon({0, a.v / 2.0L});
  if (a.level == 1) return canon({1, nudge(a.v - 1.0L, dir)});
  return canon({a.level, nudge(a.v, dir)});
}

struct Interval {
  Point lo;
  Point hi;
};

}  // namespace li

/// Nonnegative integer-valued bound expression.
class TowerBound {
 public:
  enum class Kind { exact, pow2, sum, half, product, power, bit_length };

  TowerBound() : TowerBound(BigInt(0)) {}
  TowerBound(BigInt v) : node_(make_exact(std::move(v))) {}  // NOLINT: implicit from integers
  TowerBound(long long v) : TowerBound(BigInt(v)) {}         // NOLINT

  static TowerBound exact(BigInt v) { return TowerBound(std::move(v)); }

  /// 2^x
  static TowerBound pow2(const TowerBound& x) {
    if (auto e = x.exact_value(); e && *e < BigInt(kExactBitCap)) return TowerBound(BigInt(1) << e->convert_to<std::size_t>());
    Node n{Kind::pow2, {}, {x}};
    return finish(std::move(n));
  }

  /// 2^2^...^top with `height` twos.
  static TowerBound tower(int height, const BigInt& top) {
    if (height < 0) throw std::invalid_argument("negative tower height");
    TowerBound t(top);
    for (int i = 0; i < height; ++i) t = pow2(t);
    return t;
  }

  static TowerBound sum(std::vector<TowerBound> terms) {
    std::vector<TowerBound> flat;
    BigInt constant = 0;
    for (auto& t : terms) {
      if (t.kind() == Kind::sum) {
        for (const auto& c : t.children()) flat.push_back(c);
      } else {
        flat.push_back(std::move(t));
      }
    }
    std::vector<TowerBound> symbolic;
    for (auto& t : flat) {
      if (auto e = t.exact_value()) {
        constant += *e;
      } else {
        symbolic.push_back(std::move(t));
      }
    }
    if (symbolic.empty() && bit_length_of(constant) <= kExactBitCap) return TowerBound(constant);
    if (constant != 0) symbolic.push_back(TowerBound(constant));
    if (symbolic.size() == 1) return symbolic.front();
    return finish(Node{Kind::sum, {}, std::move(symbolic)});
  }

  static TowerBound product(std::vector<TowerBound> factors) {
    BigInt constant = 1;
    std::vector<TowerBound> symbolic;
    for (auto& f : factors) {
      if (auto e = f.exact_value()) {
        if (*e == 0) return TowerBound(0);
        constant *= *e;
      } else {
        symbolic.push_back(std::move(f));
      }
      if (bit_length_of(constant) > kExactBitCap) throw std::overflow_error("product constant exceeds exact cap");
    }
    if (symbolic.empty()) return TowerBound(constant);
    if (constant != 1) symbolic.insert(symbolic.begin(), TowerBound(constant));
    if (symbolic.size() == 1) return symbolic.front();
    return finish(Node{Kind::product, {}, std::move(symbolic)});
  }

  /// x / 2, kept symbolic unless x is an even exact integer.
  static TowerBound half(const TowerBound& x) {
    if (auto e = x.exact_value(); e && (*e % 2) == 0) return TowerBound(*e / 2);
    return finish(Node{Kind::half, {}, {x}});
  }

  /// base^exponent
  static TowerBound power(const TowerBound& base, const TowerBound& exponent) {
    auto b = base.exact_value();
    auto e = exponent.exact_value();
    if (e && *e == 0) return TowerBound(1);
    if (b && (*b == 0 || *b == 1)) return base;
    if (b && e) {
      BigInt est = *e * BigInt(bit_length_of(*b));
      if (est <= BigInt(kExactBitCap) + 64) {
        BigInt v = boost::multiprecision::pow(*b, e->convert_to<unsigned>());
        if (bit_length_of(v) <= kExactBitCap) return TowerBound(v);
      }
    }
    if (b && *b == 2) return pow2(exponent);
    return finish(Node{Kind::power, {}, {base, exponent}});
  }

  /// Number of bits, with bit(0) = 1.
  static TowerBound bit_length(const TowerBound& x) {
    if (auto e = x.exact_value()) return TowerBound(BigInt(*e == 0 ? 1 : bit_length_of(*e)));
    if (x.kind() == Kind::pow2) return sum({x.children().front(), TowerBound(1)});
    return finish(Node{Kind::bit_length, {}, {x}});
  }

  Kind kind() const noexcept { return node_->kind; }
  const std::vector<TowerBound>& children() const noexcept { return node_->kids; }
  std::optional<BigInt> exact_value() const {
    if (node_->kind == Kind::exact) return node_->value;
    return std::nullopt;
  }
  bool is_exact() const noexcept { return node_->kind == Kind::exact; }
  const li::Interval& magnitude() const noexcept { return node_->mag; }

  /// log2 log2 of the value when it has the form 2^2^E with E an exact integer.
  std::optional<BigInt> log2log2() const {
    if (auto e = exact_value()) {
      if (*e < 2) return std::nullopt;
      auto l = exact_log2(*e);
      if (!l) return std::nullopt;
      return exact_log2(*l);
    }
    if (kind() != Kind::pow2) return std::nullopt;
    const TowerBound& inner = children().front();
    if (auto e = inner.exact_value()) return exact_log2(*e);
    if (inner.kind() == Kind::pow2) return inner.children().front().exact_value();
    return std::nullopt;
  }

  /// Human-readable structural form; long integers are abbreviated.
  std::string to_string() const {
    switch (kind()) {
      case Kind::exact: return abbreviate(node_->value);
      case Kind::pow2: {
        const TowerBound& x = children().front();
        if (auto e = x.exact_value(); e && *e > 1) {
          if (auto l = exact_log2(*e)) return "2^2^" + abbreviate(*l);
        }
        std::string inner = x.to_string();
        bool atomic = x.is_exact() || x.kind() == Kind::pow2;
        return "2^" + (atomic ? inner : "(" + inner + ")");
      }
      case Kind::sum: {
        std::string s;
        for (std::size_t i = 0; i < children().size(); ++i) s += (i ? " + " : "") + children()[i].to_string();
        return s;
      }
      case Kind::half: return "1/2*(" + children().front().to_string() + ")";
      case Kind::product: {
        std::string s;
        for (std::size_t i = 0; i < children().size(); ++i) s += (i ? "*" : "") + paren(children()[i]);
        return s;
      }
      case Kind::power: return paren(children()[0]) + "^" + paren(children()[1]);
      case Kind::bit_length: return "bit(" + children().front().to_string() + ")";
    }
    return "?";
  }

  bool structurally_equal(const TowerBound& o) const {
    if (node_ == o.node_) return true;
    if (kind() != o.kind()) return false;
    if (kind() == Kind::exact) return node_->value == o.node_->value;
    if (children().size() != o.children().size()) return false;
    for (std::size_t i = 0; i < children().size(); ++i)
      if (!children()[i].structurally_equal(o.children()[i])) return false;
    return true;
  }

  static std::size_t bit_length_of(const BigInt& v) {
    if (v == 0) return 0;
    return boost::multiprecision::msb(v < 0 ? BigInt(-v) : v) + 1;
  }

 private:
  struct Node {
    Kind kind;
    BigInt value;
    std::vector<TowerBound> kids;
    li::Interval mag{};
  };

  explicit TowerBound(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static std::shared_ptr<const Node> make_exact(BigInt v) {
    if (v < 0) throw std::invalid_argument("TowerBound values are nonnegative");
    if (bit_length_of(v) > kExactBitCap) throw std::overflow_error("exact value exceeds the 2^20-bit cap");
    auto n = std::make_shared<Node>(Node{Kind::exact, std::move(v), {}});
    n->mag = {li::from_bigint(n->value, -1), li::from_bigint(n->value, +1)};
    return n;
  }

  static TowerBound finish(Node n) {
    using namespace li;
    const auto& k = n.kids;
    switch (n.kind) {
      case Kind::pow2:
        n.mag = {li::pow2(k[0].magnitude().lo), li::pow2(k[0].magnitude().hi)};
        break;
      case Kind::sum: {
        Interval m = k[0].magnitude();
        for (std::size_t i = 1; i < k.size(); ++i) {
          m.lo = add(m.lo, k[i].magnitude().lo, -1);
          m.hi = add(m.hi, k[i].magnitude().hi, +1);
        }
        n.mag = m;
        break;
      }
      case Kind::half:
        n.mag = {li::half(k[0].magnitude().lo, -1), li::half(k[0].magnitude().hi, +1)};
        break;
      case Kind::product: {
        Interval m = k[0].magnitude();
        for (std::size_t i = 1; i < k.size(); ++i) {
          m.lo = mul(m.lo, k[i].magnitude().lo, -1);
          m.hi = mul(m.hi, k[i].magnitude().hi, +1);
        }
        n.mag = m;
        break;
      }
      case Kind::power: {
        // b^e = 2^(e * log2 b)
        const Interval& b = k[0].magnitude();
        const Interval& e = k[1].magnitude();
        n.mag = {li::pow2(mul(e.lo, li::log2(b.lo), -1)), li::pow2(mul(e.hi, li::log2(b.hi), +1))};
        break;
      }
      case Kind::bit_length: {
        const Interval& x = k[0].magnitude();
        Point lo = li::log2(x.lo);
        if (cmp(lo, Point{0, 1.0L}) < 0) lo = {0, 1.0L};
        n.mag = {lo, add(li::log2(x.hi), Point{0, 1.0L}, +1)};
        break;
      }
      case Kind::exact: break;
    }
    return TowerBound(std::make_shared<const Node>(std::move(n)));
  }

  static std::optional<BigInt> exact_log2(const BigInt& v) {
    if (v <= 0) return std::nullopt;
    std::size_t bits = boost::multiprecision::msb(v);
    if (v != (BigInt(1) << bits)) return std::nullopt;
    return BigInt(bits);
  }

  static std::string abbreviate(const BigInt& v) {
    const std::size_t bits = bit_length_of(v);
    if (bits <= 4096) {
      std::string s = v.str();
      if (s.size() <= 60) return s;
      return s.substr(0, 12) + "...(" + std::to_string(s.size()) + " digits)";
    }
    // Decimal conversion is quadratic; leading digits and length come from log10.
    const std::size_t shift = bits - 64;
    const long double l10 = std::log10((v >> shift).convert_to<long double>()) +
                            static_cast<long double>(shift) * std::log10(2.0L);
    const auto digits = static_cast<std::size_t>(std::floor(l10)) + 1;
    const long double lead = std::pow(10.0L, l10 - std::floor(l10) + 11);
    return std::to_string(static_cast<unsigned long long>(lead)) + "...(" + std::to_string(digits) + " digits)";
  }

  static std::string paren(const TowerBound& x) {
    bool atomic = x.is_exact() || x.kind() == Kind::bit_length;
    return atomic ? x.to_string() : "(" + x.to_string() + ")";
  }

  std::shared_ptr<const Node> node_;
};

namespace detail {

// value = sum coef_i * atom_i (+ constant), atoms being non-sum, non-half nodes.
struct LinearForm {
  Rational constant{0};
  std::vector<std::pair<Rational, TowerBound>> terms;
};

inline void linearize(const TowerBound& x, const Rational& scale, LinearForm& out) {
  using K = TowerBound::Kind;
  if (auto e = x.exact_value()) {
    out.constant += scale * Rational(*e);
    return;
  }
  if (x.kind() == K::sum) {
    for (const auto& c : x.children()) linearize(c, scale, out);
    return;
  }
  if (x.kind() == K::half) {
    linearize(x.children().front(), scale / 2, out);
    return;
  }
  if (x.kind() == K::product && x.children().front().is_exact()) {
    Rational s = scale * Rational(*x.children().front().exact_value());
    std::vector<TowerBound> rest(x.children().begin() + 1, x.children().end());
    linearize(TowerBound::product(std::move(rest)), s, out);
    return;
  }
  for (auto& [c, atom] : out.terms) {
    if (atom.structurally_equal(x)) {
      c += scale;
      return;
    }
  }
  out.terms.emplace_back(scale, x);
}

inline li::Interval form_magnitude(const LinearForm& f) {
  using namespace li;
  Interval m{{0, 0.0L}, {0, 0.0L}};
  if (f.constant > 0) m = {from_rational(f.constant, -1), from_rational(f.constant, +1)};
  for (const auto& [c, atom] : f.terms) {
    Interval a = atom.magnitude();
    m.lo = add(m.lo, mul(from_rational(c, -1), a.lo, -1), -1);
    m.hi = add(m.hi, mul(from_rational(c, +1), a.hi, +1), +1);
  }
  return m;
}

inline std::strong_ordering compare_magnitudes(const li::Interval& a, const li::Interval& b, bool& decided) {
  decided = true;
  if (li::cmp(a.hi, b.lo) < 0) return std::strong_ordering::less;
  if (li::cmp(b.hi, a.lo) < 0) return std::strong_ordering::greater;
  decided = false;
  return std::strong_ordering::equal;
}

}  // namespace detail

namespace detail {
template <class T>
std::strong_ordering three_way(const T& a, const T& b) {
  if (a < b) return std::strong_ordering::less;
  if (b < a) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

}  // namespace detail

/// Total order on bound values.
///
/// Exact integers compare exactly; 2^x against 2^y or against an exact
/// integer descends exactly through the logarithm. Otherwise both sides are
/// written as rational combinations of structural atoms, shared terms are
/// cancelled, and the remainders are ordered by their magnitude intervals.
/// When those overlap the order falls back to the interval lower ends and
/// then to the printed form, which keeps the relation total.
inline std::strong_ordering compare(const TowerBound& a, const TowerBound& b) {
  using K = TowerBound::Kind;
  auto ea = a.exact_value();
  auto eb = b.exact_value();
  if (ea && eb) return detail::three_way(*ea, *eb);
  if (a.structurally_equal(b)) return std::strong_ordering::equal;

  if (a.kind() == K::pow2 && b.kind() == K::pow2) return compare(a.children().front(), b.children().front());
  auto pow2_vs_exact = [](const TowerBound& p, const BigInt& e) {
    // 2^x vs e: with k = floor(log2 e), 2^x > e iff x > k, 2^x == e iff x == k and e == 2^k.
    if (e == 0) return std::strong_ordering::greater;
    BigInt k(boost::multiprecision::msb(e));
    auto c = compare(p.children().front(), TowerBound(k));
    if (c != std::strong_ordering::equal) return c;
    return e == (BigInt(1) << k.convert_to<std::size_t>()) ? std::strong_ordering::equal : std::strong_ordering::less;
  };
  if (a.kind() == K::pow2 && eb) return pow2_vs_exact(a, *eb);
  if (b.kind() == K::pow2 && ea) return 0 <=> pow2_vs_exact(b, *ea);

  bool decided = false;
  auto ord = detail::compare_magnitudes(a.magnitude(), b.magnitude(), decided);
  if (decided) return ord;

  detail::LinearForm fa, fb;
  detail::linearize(a, Rational(1), fa);
  detail::linearize(b, Rational(1), fb);
  // Cancel what both sides share.
  Rational common_const = std::min(fa.constant, fb.constant);
  fa.constant -= common_const;
  fb.constant -= common_const;
  for (auto& [ca, atom_a] : fa.terms) {
    for (auto& [cb, atom_b] : fb.terms) {
      if (cb != 0 && atom_a.structurally_equal(atom_b)) {
        Rational c = std::min(ca, cb);
        ca -= c;
        cb -= c;
      }
    }
  }
  auto prune = [](detail::LinearForm& f) {
    std::erase_if(f.terms, [](const auto& t) { return t.first == 0; });
  };
  prune(fa);
  prune(fb);
  const bool a_empty = fa.terms.empty() && fa.constant == 0;
  const bool b_empty = fb.terms.empty() && fb.constant == 0;
  if (a_empty && b_empty) return std::strong_ordering::equal;
  if (a_empty) return std::strong_ordering::less;
  if (b_empty) return std::strong_ordering::greater;
  if (fa.terms.empty() && fb.terms.empty()) return detail::three_way(fa.constant, fb.constant);
  if (fa.terms.size() == 1 && fb.terms.size() == 1 && fa.constant == 0 && fb.constant == 0 &&
      fa.terms[0].first == fb.terms[0].first) {
    return compare(fa.terms[0].second, fb.terms[0].second);
  }

  ord = detail::compare_magnitudes(detail::form_magnitude(fa), detail::form_magnitude(fb), decided);
  if (decided) return ord;
  int c = li::cmp(a.magnitude().lo, b.magnitude().lo);
  if (c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  return a.to_string() <=> b.to_string();
}

inline bool operator<(const TowerBound& a, const TowerBound& b) { return compare(a, b) < 0; }
inline bool operator>(const TowerBound& a, const TowerBound& b) { return compare(a, b) > 0; }

/// log2 log2 a when a = 2^2^E with E exact, otherwise empty.
inline std::optional<BigInt> digits_log2log2(const TowerBound& a) { return a.log2log2(); }

// ---------------------------------------------------------------------------
// Formulas

/// Number of bits of d, with bit(0) = 1.
inline int bit(long long d) {
  if (d < 0) throw std::invalid_argument("bit(d) needs d >= 0");
  if (d == 0) return 1;
  int k = 0;
  while (d > 0) {
    d >>= 1;
    ++k;
  }
  return k;
}

/// c(n,d,s) = d (2d-1)^(n+s-1)
inline BigInt bound_c(long long n, long long d, long long s) {
  if (n < 1 || d < 1 || s < 1) throw std::invalid_argument("bound_c needs n, d, s >= 1");
  return BigInt(d) * boost::multiprecision::pow(BigInt(2 * d - 1), static_cast<unsigned>(n + s - 1));
}

/// E = 2^(D^(4^n)) + s^(2^n) * D^(16^n * bit(d)) with D = max(2, d), so that b = 2^2^E.
inline TowerBound bound_b_exponent(long long n, const TowerBound& d, long long s) {
  if (n < 1 || s < 1) throw std::invalid_argument("bound_b needs n, s >= 1");
  const TowerBound D = compare(d, TowerBound(2)) < 0 ? TowerBound(2) : d;
  const BigInt four_n = boost::multiprecision::pow(BigInt(4), static_cast<unsigned>(n));
  const BigInt sixteen_n = boost::multiprecision::pow(BigInt(16), static_cast<unsigned>(n));
  const BigInt two_n = boost::multiprecision::pow(BigInt(2), static_cast<unsigned>(n));
  TowerBound x = TowerBound::pow2(TowerBound::power(D, TowerBound(four_n)));
  TowerBound y = TowerBound::product({TowerBound::power(TowerBound(BigInt(s)), TowerBound(two_n)),
                                      TowerBound::power(D, TowerBound::product({TowerBound(sixteen_n),
                                                                                TowerBound::bit_length(d)}))});
  return TowerBound::sum({x, y});
}

inline TowerBound bound_b(long long n, const TowerBound& d, long long s) {
  return TowerBound::pow2(TowerBound::pow2(bound_b_exponent(n, d, s)));
}
inline TowerBound bound_b(long long n, long long d, long long s) {
  if (d < 0) throw std::invalid_argument("bound_b needs d >= 0");
  return bound_b(n, TowerBound(BigInt(d)), s);
}

/// Which representation theorem a bound instantiates.
enum class BoundVariant { fj, fj_sos, fj_plus, fj_plus_sos, fj_deno, kkt, kkt_plus };

inline constexpr BoundVariant kAllBoundVariants[] = {BoundVariant::fj,          BoundVariant::fj_sos,
                                                     BoundVariant::fj_plus,     BoundVariant::fj_plus_sos,
                                                     BoundVariant::fj_deno,     BoundVariant::kkt,
                                                     BoundVariant::kkt_plus};

inline std::string_view to_string(BoundVariant v) {
  switch (v) {
    case BoundVariant::fj: return "fj";
    case BoundVariant::fj_sos: return "fj-sos";
    case BoundVariant::fj_plus: return "fj+";
    case BoundVariant::fj_plus_sos: return "fj+-sos";
    case BoundVariant::fj_deno: return "fj-deno";
    case BoundVariant::kkt: return "kkt";
    case BoundVariant::kkt_plus: return "kkt+";
  }
  return "?";
}

inline BoundVariant parse_bound_variant(std::string_view s) {
  for (BoundVariant v : kAllBoundVariants)
    if (to_string(v) == s) return v;
  throw std::invalid_argument("unknown bound variant '" + std::string(s) + "'");
}

/// Degree bound w of the representation theorem for `variant`.
inline TowerBound theorem_w(BoundVariant variant, long long n, long long m, long long d) {
  if (n < 1 || m < 1 || d < 1) throw std::invalid_argument("theorem_w needs n, m, d >= 1");
  const TowerBound dd(BigInt{d});
  auto half_b = [](long long nn, long long deg, long long s) { return TowerBound::half(bound_b(nn, deg, s)); };
  switch (variant) {
    case BoundVariant::fj:
      return TowerBound::sum({half_b(n + m + 1, d + 1, 2 * m + n + 3), BigInt(d) * bound_c(n + m + 1, d + 1, n + m + 1)});
    case BoundVariant::fj_sos:
      return TowerBound(BigInt(d) * (bound_c(n + m + 1, d + 1, n + 2 * m + 1) - 1));
    case BoundVariant::fj_plus:
      return TowerBound::sum({half_b(n + m + 1, d + 2, 2 * m + n + 3), BigInt(d) * bound_c(n + m + 1, d + 2, n + m + 1)});
    case BoundVariant::fj_plus_sos:
      return TowerBound(BigInt(d) * (bound_c(n + m + 1, d + 2, n + 2 * m + 1) - 1));
    case BoundVariant::fj_deno:
      return TowerBound::sum(
          {half_b(n + m + 1, d + 1, 2 * m + n + 3), BigInt(2 * d) * bound_c(n + m + 1, d + 1, n + m + 1)});
    case BoundVariant::kkt:
      return TowerBound::sum({half_b(n + m, d + 1, 2 * m + n + 1), BigInt(d) * bound_c(n + m, d + 1, n + m)});
    case BoundVariant::kkt_plus:
      return TowerBound::sum({half_b(n + m, d + 1, 2 * m + n + 1), BigInt(d) * bound_c(n + m, d + 2, n + m)});
  }
  throw std::invalid_argument("unknown bound variant");
}

/// Relaxation order r at which the hierarchy is exact, given w.
inline TowerBound relaxation_order(BoundVariant variant, long long n, long long m, const TowerBound& w) {
  const TowerBound two_w = TowerBound::product({TowerBound(2), w});
  switch (variant) {
    case BoundVariant::fj:
    case BoundVariant::fj_sos:
    case BoundVariant::fj_plus:
    case BoundVariant::fj_plus_sos:
    case BoundVariant::kkt_plus:
      return TowerBound::half(bound_b(n + m + 1, two_w, m + n + 2));
    case BoundVariant::fj_deno:
      return TowerBound::half(
          bound_b(n + m + 1, TowerBound::product({TowerBound(2), TowerBound::sum({w, TowerBound(1)})}), m + n + 2));
    case BoundVariant::kkt:
      return TowerBound::half(bound_b(n + m, two_w, m + n + 1));
  }
  throw std::invalid_argument("unknown bound variant");
}

struct BoundReport {
  BoundVariant variant = BoundVariant::fj;
  long long n = 0, m = 0, d = 0;
  TowerBound w;
  TowerBound r;

  /// Exact part d*c(...) of w (the whole of w for the pure-c variants).
  BigInt c_part() const {
    if (auto e = w.exact_value()) return *e;
    detail::LinearForm f;
    detail::linearize(w, Rational(1), f);
    return boost::multiprecision::numerator(f.constant);
  }

  /// The b(...)/2 part of w, absent for the pure-c variants.
  std::optional<TowerBound> b_part() const {
    if (w.is_exact()) return std::nullopt;
    for (const auto& t : w.children())
      if (t.kind() == TowerBound::Kind::half) return t.children().front();
    return std::nullopt;
  }
};

inline BoundReport bound_report(BoundVariant variant, long long n, long long m, long long d) {
  BoundReport rep{variant, n, m, d, theorem_w(variant, n, m, d), {}};
  rep.r = relaxation_order(variant, n, m, rep.w);
  return rep;
}

}  // namespace fjpop
