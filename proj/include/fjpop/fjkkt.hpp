#pragma once

// Fritz John / KKT augmented systems, product vectors and critical-set tests.

#include "fjpop/nnls.hpp"
#include "fjpop/pop.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fjpop {

enum class Augmentation { fj, fj_plus, kkt, kkt_plus };

inline std::string_view to_string(Augmentation a) {
  switch (a) {
    case Augmentation::fj: return "fj";
    case Augmentation::fj_plus: return "fj+";
    case Augmentation::kkt: return "kkt";
    case Augmentation::kkt_plus: return "kkt+";
  }
  return "?";
}

inline bool has_lambda0(Augmentation a) { return a == Augmentation::fj || a == Augmentation::fj_plus; }
inline bool squares_multipliers(Augmentation a) {
  return a == Augmentation::fj_plus || a == Augmentation::kkt_plus;
}

/// Optimality system over (x, multipliers). Multipliers follow the original
/// variables: lambda0..lambdam for the FJ variants, lambda1..lambdam for KKT.
struct AugmentedSystem {
  Augmentation variant = Augmentation::fj;
  std::vector<Polynomial> polynomials;
  std::size_t nx = 0;
  std::size_t multiplier_count = 0;
  std::vector<std::string> var_names;

  std::size_t nvars() const noexcept { return nx + multiplier_count; }
};

namespace detail {

inline std::vector<std::string> multiplier_names(const std::vector<std::string>& xs, std::size_t first,
                                                 std::size_t count) {
  std::vector<std::string> names = xs;
  for (std::size_t j = 0; j < count; ++j) {
    std::string base = "lambda" + std::to_string(first + j);
    while (std::find(names.begin(), names.end(), base) != names.end()) base += "_";
    names.push_back(base);
  }
  return names;
}

inline AugmentedSystem build_augmented(const PopProblem& pop, Augmentation variant) {
  const std::size_t n = pop.nvars();
  const std::size_t m = pop.m();
  const bool fj = has_lambda0(variant);
  const bool sq = squares_multipliers(variant);
  const std::size_t L = fj ? m + 1 : m;
  const std::size_t N = n + L;

  AugmentedSystem sys;
  sys.variant = variant;
  sys.nx = n;
  sys.multiplier_count = L;
  sys.var_names = multiplier_names(pop.var_names, fj ? 0 : 1, L);

  // weight(j) is lambda_j or lambda_j^2 in the lifted ring; j = 0 is the objective multiplier.
  auto lambda = [&](std::size_t j) { return Polynomial::variable(N, n + (fj ? j : j - 1)); };
  auto weight = [&](std::size_t j) {
    Polynomial l = lambda(j);
    return sq ? l * l : l;
  };

  const auto grad_f = gradient(pop.f);
  std::vector<std::vector<Polynomial>> grad_g;
  for (const auto& gj : pop.g) grad_g.push_back(gradient(gj));

  for (std::size_t i = 0; i < n; ++i) {
    Polynomial row = grad_f[i].lift(0, L);
    if (fj) row = weight(0) * row;
    for (std::size_t j = 1; j <= m; ++j) row -= weight(j) * grad_g[j - 1][i].lift(0, L);
    sys.polynomials.push_back(std::move(row));
  }
  for (std::size_t j = 1; j <= m; ++j) sys.polynomials.push_back(weight(j) * pop.g[j - 1].lift(0, L));
  if (fj) {
    Polynomial norm = Polynomial::constant(N, Rational(1));
    for (std::size_t j = 0; j <= m; ++j) norm -= lambda(j) * lambda(j);
    sys.polynomials.push_back(std::move(norm));
  }
  return sys;
}

}  // namespace detail

/// (lambda0*grad f - sum lambda_j grad g_j, lambda_j g_j, 1 - sum lambda_j^2)
inline AugmentedSystem build_fj(const PopProblem& pop) { return detail::build_augmented(pop, Augmentation::fj); }
/// As build_fj with every lambda_j replaced by lambda_j^2 except in the normalization row.
inline AugmentedSystem build_fj_plus(const PopProblem& pop) {
  return detail::build_augmented(pop, Augmentation::fj_plus);
}
inline AugmentedSystem build_kkt(const PopProblem& pop) { return detail::build_augmented(pop, Augmentation::kkt); }
inline AugmentedSystem build_kkt_plus(const PopProblem& pop) {
  return detail::build_augmented(pop, Augmentation::kkt_plus);
}
inline AugmentedSystem build_augmented_system(const PopProblem& pop, Augmentation variant) {
  return detail::build_augmented(pop, variant);
}

inline constexpr std::size_t kDefaultProductCap = 12;

/// Pi g = (g^a) for a in {0,1}^m \ {0}, ordered by a read as a binary number
/// with g_1 as the least significant bit.
inline std::vector<Polynomial> products(const std::vector<Polynomial>& g, std::size_t cap = kDefaultProductCap) {
  const std::size_t m = g.size();
  if (m > cap) throw std::invalid_argument("product vector cap exceeded (m=" + std::to_string(m) + ")");
  std::vector<Polynomial> out;
  if (m == 0) return out;
  out.reserve((std::size_t{1} << m) - 1);
  for (std::uint64_t a = 1; a < (std::uint64_t{1} << m); ++a) {
    // Extend the product for a without its highest bit, which is already listed.
    std::size_t top = 63 - static_cast<std::size_t>(__builtin_clzll(a));
    std::uint64_t rest = a & ~(std::uint64_t{1} << top);
    out.push_back(rest == 0 ? g[top] : out[rest - 1] * g[top]);
  }
  return out;
}

/// [grad g_1(x) ... grad g_m(x); diag(g(x))], size (n+m) x m.
inline Eigen::MatrixXd phi_matrix(const std::vector<Polynomial>& g, std::span<const double> x) {
  const std::size_t m = g.size();
  const std::size_t n = x.size();
  Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n + m), static_cast<Eigen::Index>(m));
  for (std::size_t j = 0; j < m; ++j) {
    if (g[j].nvars() != n) throw std::invalid_argument("phi_matrix: point dimension mismatch");
    for (std::size_t i = 0; i < n; ++i)
      phi(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = differentiate(g[j], i).evaluate(x);
    phi(static_cast<Eigen::Index>(n + j), static_cast<Eigen::Index>(j)) = g[j].evaluate(x);
  }
  return phi;
}

inline constexpr double kDefaultRankTol = 1e-9;
inline constexpr double kDefaultClassifyTol = 1e-7;

/// Number of singular values above tol * (largest singular value).
inline int numerical_rank(const Eigen::MatrixXd& A, double tol = kDefaultRankTol) {
  if (A.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > tol * s[0]) ++r;
  return r;
}

/// Decides 0 ∈ conv{columns} with one NNLS solve on the system
/// [A; w 1^T] mu = [0; w], mu >= 0, which is solvable exactly when some
/// convex combination of the columns vanishes.
inline bool zero_in_convex_hull(const Eigen::MatrixXd& cols, double tol = kDefaultRankTol) {
  if (cols.cols() == 0) return false;
  const double w = std::max(1.0, cols.cwiseAbs().maxCoeff());
  Eigen::MatrixXd A(cols.rows() + 1, cols.cols());
  A.topRows(cols.rows()) = cols;
  A.row(cols.rows()).setConstant(w);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(cols.rows() + 1);
  b[cols.rows()] = w;
  return nnls(A, b).residual_norm <= tol * w;
}

/// Largest number of columns whose convex hull avoids the origin (exhaustive).
inline int rank_plus(const Eigen::MatrixXd& A, double tol = kDefaultRankTol, std::size_t cap = kDefaultProductCap) {
  const auto m = static_cast<std::size_t>(A.cols());
  if (m > cap) throw std::invalid_argument("rank+ enumeration cap exceeded");
  for (std::size_t size = m; size >= 1; --size) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
      if (static_cast<std::size_t>(__builtin_popcountll(mask)) != size) continue;
      Eigen::MatrixXd sub(A.rows(), static_cast<Eigen::Index>(size));
      Eigen::Index c = 0;
      for (std::size_t j = 0; j < m; ++j)
        if (mask & (std::uint64_t{1} << j)) sub.col(c++) = A.col(static_cast<Eigen::Index>(j));
      if (!zero_in_convex_hull(sub, tol)) return static_cast<int>(size);
    }
  }
  return 0;
}

inline bool in_critical_set(const std::vector<Polynomial>& g, std::span<const double> x, double tol = kDefaultRankTol) {
  if (tol <= 0.0) throw std::invalid_argument("tolerance must be positive");
  return numerical_rank(phi_matrix(g, x), tol) < static_cast<int>(g.size());
}

inline bool in_critical_set_plus(const std::vector<Polynomial>& g, std::span<const double> x,
                                 double tol = kDefaultRankTol, std::size_t cap = kDefaultProductCap) {
  if (tol <= 0.0) throw std::invalid_argument("tolerance must be positive");
  return rank_plus(phi_matrix(g, x), tol, cap) < static_cast<int>(g.size());
}

struct PointClassification {
  bool fj_holds = false;
  bool kkt_holds = false;
  bool in_W = false;
  /// (lambda0..lambdam), unit 2-norm; present iff fj_holds.
  std::optional<std::vector<double>> fj_multipliers;
  /// (lambda1..lambdam); present iff kkt_holds.
  std::optional<std::vector<double>> kkt_multipliers;
  double fj_residual = 0.0;
  double kkt_residual = 0.0;
};

/// Checks the FJ and KKT conditions at a feasible point.
///
/// Multipliers of constraints with g_j(x) > tol are fixed to zero. KKT is a
/// single NNLS solve. For FJ every nonzero nonnegative solution can be scaled
/// so that one chosen multiplier equals 1, so one NNLS solve per candidate
/// index decides it; index 0 is the KKT system itself.
inline PointClassification classify_point(const PopProblem& pop, std::span<const double> x,
                                          double tol = kDefaultClassifyTol) {
  const std::size_t n = pop.nvars();
  const std::size_t m = pop.m();
  if (x.size() != n) throw std::invalid_argument("classify_point: point dimension mismatch");
  if (tol <= 0.0) throw std::invalid_argument("tolerance must be positive");

  std::vector<std::size_t> active;
  for (std::size_t j = 0; j < m; ++j) {
    double v = pop.g[j].evaluate(x);
    if (v < -tol) throw std::invalid_argument("classify_point: point is infeasible (g" + std::to_string(j + 1) + " < 0)");
    if (v <= tol) active.push_back(j);
  }

  auto grad_at = [&](const Polynomial& p) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) v[static_cast<Eigen::Index>(i)] = differentiate(p, i).evaluate(x);
    return v;
  };
  // cols[0] = grad f, cols[k] = -grad g_{active[k-1]}: FJ is  sum mu_k cols[k] = 0.
  std::vector<Eigen::VectorXd> cols;
  cols.push_back(grad_at(pop.f));
  for (std::size_t j : active) cols.push_back(-grad_at(pop.g[j]));

  PointClassification out;

  auto solve_pinned = [&](std::size_t pinned, Eigen::VectorXd& mu) {
    const Eigen::Index k = static_cast<Eigen::Index>(cols.size()) - 1;
    Eigen::MatrixXd A(static_cast<Eigen::Index>(n), k);
    Eigen::Index c = 0;
    for (std::size_t i = 0; i < cols.size(); ++i)
      if (i != pinned) A.col(c++) = cols[i];
    NnlsResult r = nnls(A, -cols[pinned]);
    mu = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(cols.size()));
    c = 0;
    for (std::size_t i = 0; i < cols.size(); ++i)
      mu[static_cast<Eigen::Index>(i)] = (i == pinned) ? 1.0 : r.x[c++];
    return r.residual_norm;
  };

  Eigen::VectorXd mu;
  out.kkt_residual = solve_pinned(0, mu);
  out.kkt_holds = out.kkt_residual <= tol;
  if (out.kkt_holds) {
    std::vector<double> lam(m, 0.0);
    for (std::size_t k = 0; k < active.size(); ++k) lam[active[k]] = mu[static_cast<Eigen::Index>(k + 1)];
    out.kkt_multipliers = lam;
  }

  double best = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_mu;
  for (std::size_t pinned = 0; pinned < cols.size(); ++pinned) {
    Eigen::VectorXd cand;
    double r = solve_pinned(pinned, cand);
    double normalized = r / cand.norm();
    if (normalized < best) {
      best = normalized;
      best_mu = cand / cand.norm();
    }
    if (best <= tol) break;
  }
  out.fj_residual = best;
  out.fj_holds = best <= tol;
  if (out.fj_holds) {
    std::vector<double> lam(m + 1, 0.0);
    lam[0] = best_mu[0];
    for (std::size_t k = 0; k < active.size(); ++k) lam[active[k] + 1] = best_mu[static_cast<Eigen::Index>(k + 1)];
    out.fj_multipliers = lam;
  }
  out.in_W = out.fj_holds && !out.kkt_holds;
  return out;
}

}  // namespace fjpop
