#pragma once

// Moment and SOS semidefinite relaxations of a PopProblem, with and without
// a denominator. The moment side is assembled from moment/localizing
// matrices; the SOS side from Gram bases and ideal multipliers by exact
// coefficient matching. Neither is derived from the other.

#include "fjpop/fjkkt.hpp"
#include "fjpop/pop.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fjpop {

/// Sparse linear functional sum c_i y_i over moment indices, sorted by index.
struct LinearFunctional {
  std::vector<std::pair<std::size_t, Rational>> terms;

  void add(std::size_t index, const Rational& c) {
    if (c == 0) return;
    auto it = std::lower_bound(terms.begin(), terms.end(), index,
                               [](const auto& t, std::size_t i) { return t.first < i; });
    if (it != terms.end() && it->first == index) {
      it->second += c;
      if (it->second == 0) terms.erase(it);
    } else {
      terms.insert(it, {index, c});
    }
  }

  double evaluate(std::span<const double> y) const {
    double s = 0.0;
    for (const auto& [i, c] : terms) s += to_double(c) * y[i];
    return s;
  }

  bool operator==(const LinearFunctional& o) const { return terms == o.terms; }
};

/// y-index of alpha+beta for every pair of the order-k basis.
struct MomentStructure {
  MonomialBasis rows;
  MonomialBasis moments;
  std::vector<std::vector<std::size_t>> index;
};

inline MomentStructure moment_structure(std::size_t n, int k) {
  MomentStructure s{MonomialBasis(n, k), MonomialBasis(n, 2 * k), {}};
  s.index.assign(s.rows.size(), std::vector<std::size_t>(s.rows.size()));
  for (std::size_t a = 0; a < s.rows.size(); ++a)
    for (std::size_t b = 0; b < s.rows.size(); ++b) s.index[a][b] = s.moments.index_of(s.rows[a] * s.rows[b]);
  return s;
}

/// L_y(p * x^gamma) as a functional over `ybasis`.
inline LinearFunctional riesz(const Polynomial& p, const Monomial& shift, const MonomialBasis& ybasis) {
  LinearFunctional lf;
  for (const auto& [m, c] : p.terms()) {
    std::size_t idx = ybasis.index_of(m * shift);
    if (idx == ybasis.size()) throw std::logic_error("moment index outside the y basis");
    lf.add(idx, c);
  }
  return lf;
}

/// Localizing matrix of order k for p: entry (a,b) is sum_g p_g y_{a+b+g}.
inline std::vector<std::vector<LinearFunctional>> localizing_structure(const Polynomial& p, int k,
                                                                      const MonomialBasis& ybasis) {
  MonomialBasis rows(p.nvars(), k);
  std::vector<std::vector<LinearFunctional>> M(rows.size(), std::vector<LinearFunctional>(rows.size()));
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = a; b < rows.size(); ++b) {
      M[a][b] = riesz(p, rows[a] * rows[b], ybasis);
      if (b != a) M[b][a] = M[a][b];
    }
  return M;
}

inline std::vector<std::vector<LinearFunctional>> localizing_structure(const Polynomial& p, std::size_t n, int k) {
  if (p.nvars() != n) throw std::invalid_argument("localizing_structure: ambient mismatch");
  return localizing_structure(p, k, MonomialBasis(n, 2 * k + std::max(p.degree(), 0)));
}

/// Moment vector of the Dirac measure at `point`, indexed by `ybasis`.
inline std::vector<double> point_moments(const MonomialBasis& ybasis, std::span<const double> point) {
  std::vector<double> y(ybasis.size());
  for (std::size_t i = 0; i < ybasis.size(); ++i) {
    double v = 1.0;
    for (std::size_t j = 0; j < point.size(); ++j)
      for (int e = 0; e < ybasis[i][j]; ++e) v *= point[j];
    y[i] = v;
  }
  return y;
}

class OrderTooSmall : public std::invalid_argument {
 public:
  OrderTooSmall(int requested, int minimal)
      : std::invalid_argument("relaxation order " + std::to_string(requested) + " is below the minimal admissible order " +
                              std::to_string(minimal)),
        minimal_order(minimal) {}
  int minimal_order;
};

/// max(ceil(deg f / 2), ceil(deg g_j / 2), ceil(deg h_t / 2)).
inline int minimal_order(const PopProblem& pop) {
  int k = ceil_half_degree(pop.f);
  for (const auto& g : pop.g) k = std::max(k, ceil_half_degree(g));
  for (const auto& h : pop.h) k = std::max(k, ceil_half_degree(h));
  return k;
}

/// Lifts pop to (x, multipliers): g becomes Pi g when use_products, h the
/// chosen optimality system. Without a variant only the product step applies.
inline PopProblem augment_problem(const PopProblem& pop, std::optional<Augmentation> variant, bool use_products,
                                  std::size_t cap = kDefaultProductCap) {
  std::vector<Polynomial> g = use_products ? products(pop.g, cap) : pop.g;
  if (!variant) return PopProblem(pop.f, std::move(g), pop.h, pop.theta, pop.var_names);
  if (!pop.h.empty())
    throw std::invalid_argument("optimality-system augmentation is defined for inequality constraints only");
  AugmentedSystem sys = build_augmented_system(pop, *variant);
  const std::size_t L = sys.multiplier_count;
  std::vector<Polynomial> lifted_g;
  for (const auto& p : g) lifted_g.push_back(p.lift(0, L));
  std::optional<Polynomial> theta;
  if (pop.theta) theta = pop.theta->lift(0, L);
  return PopProblem(pop.f.lift(0, L), std::move(lifted_g), std::move(sys.polynomials), std::move(theta),
                    std::move(sys.var_names));
}

// ---------------------------------------------------------------------------
// Moment side

struct SdpBlock {
  enum class Kind { psd, zero };
  std::string label;
  Kind kind = Kind::psd;
  std::vector<std::vector<LinearFunctional>> entries;

  std::size_t size() const noexcept { return entries.size(); }
};

/// inf L(objective) s.t. psd blocks >= 0, equalities = 0, L(normalization) = 1.
struct SdpProblem {
  std::size_t nvars = 0;
  int order = 0;
  std::vector<std::string> var_names;
  MonomialBasis ybasis{1, 0};
  std::vector<SdpBlock> blocks;
  LinearFunctional objective;
  LinearFunctional normalization;
  /// One functional per distinct entry of every zero block.
  std::vector<LinearFunctional> equalities;

  std::size_t psd_dimension() const {
    std::size_t s = 0;
    for (const auto& b : blocks)
      if (b.kind == SdpBlock::Kind::psd) s += b.size();
    return s;
  }

  std::vector<Eigen::MatrixXd> evaluate_blocks(std::span<const double> y) const {
    std::vector<Eigen::MatrixXd> out;
    for (const auto& b : blocks) {
      const auto n = static_cast<Eigen::Index>(b.size());
      Eigen::MatrixXd M(n, n);
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) M(i, j) = b.entries[i][j].evaluate(y);
      out.push_back(std::move(M));
    }
    return out;
  }
};

namespace detail {

inline SdpProblem assemble_moment(const PopProblem& pop, int k, const Polynomial& objective,
                                  const Polynomial& normalization) {
  const int kmin = minimal_order(pop);
  if (k < kmin) throw OrderTooSmall(k, kmin);
  const std::size_t n = pop.nvars();
  SdpProblem sdp;
  sdp.nvars = n;
  sdp.order = k;
  sdp.var_names = pop.var_names;
  sdp.ybasis = MonomialBasis(n, 2 * k);

  const Polynomial one = Polynomial::constant(n, Rational(1));
  sdp.blocks.push_back({"M" + std::to_string(k), SdpBlock::Kind::psd, localizing_structure(one, k, sdp.ybasis)});
  for (std::size_t j = 0; j < pop.g.size(); ++j) {
    int kj = k - ceil_half_degree(pop.g[j]);
    sdp.blocks.push_back({"M" + std::to_string(kj) + "(g" + std::to_string(j + 1) + ")", SdpBlock::Kind::psd,
                          localizing_structure(pop.g[j], kj, sdp.ybasis)});
  }
  for (std::size_t t = 0; t < pop.h.size(); ++t) {
    int kt = k - ceil_half_degree(pop.h[t]);
    sdp.blocks.push_back({"M" + std::to_string(kt) + "(h" + std::to_string(t + 1) + ")", SdpBlock::Kind::zero,
                          localizing_structure(pop.h[t], kt, sdp.ybasis)});
    // Entry (a,b) depends on a+b only, so one equality per monomial of degree <= 2 kt.
    for (const auto& gamma : MonomialBasis(n, 2 * kt)) sdp.equalities.push_back(riesz(pop.h[t], gamma, sdp.ybasis));
  }
  sdp.objective = riesz(objective, Monomial(n), sdp.ybasis);
  sdp.normalization = riesz(normalization, Monomial(n), sdp.ybasis);
  return sdp;
}

}  // namespace detail

inline SdpProblem build_moment_sdp(const PopProblem& pop, int k) {
  const std::size_t n = pop.nvars();
  return detail::assemble_moment(pop, k, pop.f, Polynomial::constant(n, Rational(1)));
}

// ---------------------------------------------------------------------------
// SOS side

struct GramBlock {
  std::string label;
  Polynomial generator;
  MonomialBasis basis;
};

struct IdealBlock {
  Polynomial h;
  MonomialBasis basis;
  std::size_t offset = 0;  // first multiplier variable
};

/// Coefficient of monomial alpha in target - xi*xi_multiplier - sum gen*v'Gv - sum h*u = 0.
struct SosEquation {
  struct GramTerm {
    std::size_t block, i, j;  // i <= j; the coefficient already includes the factor 2 off the diagonal
    Rational coef;
  };
  Monomial alpha;
  std::vector<GramTerm> gram;
  std::vector<std::pair<std::size_t, Rational>> multipliers;
  Rational xi_coef{0};
  Rational rhs{0};
};

/// sup xi s.t. target - xi * xi_multiplier = sum_j gen_j v'G_j v + sum_t h_t u_t'v, G_j >= 0.
struct SosProgram {
  std::size_t nvars = 0;
  int order = 0;
  std::vector<std::string> var_names;
  std::vector<GramBlock> gram_blocks;
  std::vector<IdealBlock> ideal_blocks;
  std::size_t multiplier_count = 0;
  Polynomial target;
  Polynomial xi_multiplier;
  MonomialBasis equation_basis{1, 0};
  std::vector<SosEquation> equations;
};

namespace detail {

inline SosProgram assemble_sos(const PopProblem& pop, int k, const Polynomial& target, const Polynomial& xi_mult) {
  const int kmin = minimal_order(pop);
  if (k < kmin) throw OrderTooSmall(k, kmin);
  const std::size_t n = pop.nvars();
  SosProgram sos;
  sos.nvars = n;
  sos.order = k;
  sos.var_names = pop.var_names;
  sos.target = target;
  sos.xi_multiplier = xi_mult;
  sos.equation_basis = MonomialBasis(n, 2 * k);

  sos.gram_blocks.push_back({"sigma0", Polynomial::constant(n, Rational(1)), MonomialBasis(n, k)});
  for (std::size_t j = 0; j < pop.g.size(); ++j)
    sos.gram_blocks.push_back(
        {"sigma" + std::to_string(j + 1), pop.g[j], MonomialBasis(n, k - ceil_half_degree(pop.g[j]))});
  for (const auto& h : pop.h) {
    sos.ideal_blocks.push_back({h, MonomialBasis(n, 2 * (k - ceil_half_degree(h))), sos.multiplier_count});
    sos.multiplier_count += sos.ideal_blocks.back().basis.size();
  }

  sos.equations.resize(sos.equation_basis.size());
  for (std::size_t a = 0; a < sos.equation_basis.size(); ++a) sos.equations[a].alpha = sos.equation_basis[a];
  auto row = [&](const Monomial& m) -> SosEquation& {
    std::size_t idx = sos.equation_basis.index_of(m);
    if (idx == sos.equation_basis.size()) throw std::logic_error("SOS identity term above degree 2k");
    return sos.equations[idx];
  };

  for (const auto& [m, c] : target.terms()) row(m).rhs += c;
  for (const auto& [m, c] : xi_mult.terms()) row(m).xi_coef += c;
  for (std::size_t b = 0; b < sos.gram_blocks.size(); ++b) {
    const auto& blk = sos.gram_blocks[b];
    for (std::size_t i = 0; i < blk.basis.size(); ++i)
      for (std::size_t j = i; j < blk.basis.size(); ++j) {
        Polynomial term = blk.generator * Polynomial::monomial(blk.basis[i] * blk.basis[j]);
        Rational twice = i == j ? Rational(1) : Rational(2);
        for (const auto& [m, c] : term.terms()) row(m).gram.push_back({b, i, j, twice * c});
      }
  }
  for (const auto& blk : sos.ideal_blocks)
    for (std::size_t i = 0; i < blk.basis.size(); ++i) {
      Polynomial term = blk.h * Polynomial::monomial(blk.basis[i]);
      for (const auto& [m, c] : term.terms()) row(m).multipliers.emplace_back(blk.offset + i, c);
    }
  return sos;
}

}  // namespace detail

inline SosProgram build_sos_sdp(const PopProblem& pop, int k) {
  const std::size_t n = pop.nvars();
  return detail::assemble_sos(pop, k, pop.f, Polynomial::constant(n, Rational(1)));
}

// ---------------------------------------------------------------------------
// Denominator variants

/// eta = 2 floor((2k - deg f) / (2 deg theta)); 0 for a constant theta.
inline int eta(int k, const Polynomial& f, const Polynomial& theta) {
  if (theta.is_zero()) throw std::invalid_argument("eta: theta must be nonzero");
  const int df = std::max(f.degree(), 0);
  if (2 * k < df) throw std::invalid_argument("eta: 2k < deg f");
  const int dt = theta.degree();
  if (dt == 0) return 0;
  return 2 * ((2 * k - df) / (2 * dt));
}

struct DenominatorRelaxation {
  int eta = 0;
  SdpProblem moment;
  SosProgram sos;
};

/// inf L(theta^eta f) s.t. ..., L(theta^eta) = 1  and  sup xi s.t. theta^eta (f - xi) in Q_k(g) + I_k(h).
inline DenominatorRelaxation build_denominator_sdp(const PopProblem& pop, int k) {
  if (!pop.theta) throw std::invalid_argument("denominator relaxation needs a theta polynomial");
  const int e = eta(k, pop.f, *pop.theta);
  const Polynomial te = pop.theta->pow(static_cast<unsigned>(e));
  return {e, detail::assemble_moment(pop, k, te * pop.f, te), detail::assemble_sos(pop, k, te * pop.f, te)};
}

}  // namespace fjpop
