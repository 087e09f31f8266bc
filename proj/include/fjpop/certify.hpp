#pragma once

#include "fjpop/polytext.hpp"
#include "fjpop/sdp.hpp"

#include <Eigen/Eigenvalues>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fjpop {

/// p_j = prod_{i != j} (f - t_i) / (t_j - t_i).
inline std::vector<Polynomial> lagrange_basis(const Polynomial& f, const std::vector<Rational>& values) {
  if (values.empty()) throw std::invalid_argument("lagrange_basis: no values");
  for (std::size_t i = 0; i < values.size(); ++i)
    for (std::size_t j = i + 1; j < values.size(); ++j)
      if (values[i] == values[j]) throw std::invalid_argument("lagrange_basis: duplicate value " + to_string(values[i]));
  const std::size_t n = f.nvars();
  std::vector<Polynomial> out;
  for (std::size_t j = 0; j < values.size(); ++j) {
    Polynomial p = Polynomial::constant(n, Rational(1));
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i == j) continue;
      p *= (f - Polynomial::constant(n, values[i])) * (Rational(1) / (values[j] - values[i]));
    }
    out.push_back(std::move(p));
  }
  return out;
}

/// q = sum t_i p_i^2 for nonnegative levels t_i.
inline Polynomial build_certificate_q(const Polynomial& f, const std::vector<Rational>& values) {
  for (const auto& t : values)
    if (t < 0) throw std::invalid_argument("build_certificate_q: negative level " + to_string(t));
  const auto p = lagrange_basis(f, values);
  Polynomial q(f.nvars());
  for (std::size_t i = 0; i < values.size(); ++i) q += values[i] * p[i].pow(2);
  return q;
}

/// |p(u)| <= tol (1 + ||u||^deg p) at every point.
inline bool verify_vanishing(const Polynomial& p, const std::vector<std::vector<double>>& points, double tol) {
  const int deg = std::max(p.degree(), 0);
  for (const auto& u : points) {
    if (u.size() != p.nvars()) throw std::invalid_argument("verify_vanishing: point dimension mismatch");
    double norm = 0.0;
    for (double v : u) norm += v * v;
    norm = std::sqrt(norm);
    if (std::abs(p.evaluate(std::span<const double>(u))) > tol * (1.0 + std::pow(norm, deg))) return false;
  }
  return true;
}

using RationalMatrix = std::vector<std::vector<Rational>>;

/// target - xi * xi_multiplier = sum_j gen_j v_j' G_j v_j + sum_t h_t mult_t.
struct Certificate {
  struct Gram {
    Polynomial generator;
    std::vector<Monomial> basis;
    RationalMatrix matrix;
  };
  struct Ideal {
    Polynomial h;
    Polynomial multiplier;
  };
  std::vector<std::string> var_names;
  Rational xi{0};
  std::vector<Gram> gram;
  std::vector<Ideal> ideal;
  Polynomial target;
  std::optional<Polynomial> xi_multiplier;
};

struct CertificateReport {
  std::vector<double> min_eigenvalues;
  double min_eigenvalue = 0.0;
  /// Coefficient infinity norm of the identity defect, computed exactly.
  Rational residual_exact{0};
  double residual = 0.0;
  std::optional<Monomial> worst_monomial;
  double asymmetry = 0.0;
  bool pass = false;
};

inline Polynomial certificate_defect(const Certificate& c) {
  const std::size_t n = c.target.nvars();
  Polynomial r = c.target;
  r -= c.xi_multiplier ? c.xi * *c.xi_multiplier : Polynomial::constant(n, c.xi);
  for (const auto& g : c.gram) {
    const std::size_t s = g.basis.size();
    Polynomial quad(n);
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t j = i; j < s; ++j) {
        const Rational e = i == j ? g.matrix[i][i] : g.matrix[i][j] + g.matrix[j][i];
        if (e != 0) quad.add_term(g.basis[i] * g.basis[j], e);
      }
    r -= g.generator * quad;
  }
  for (const auto& t : c.ideal) r -= t.h * t.multiplier;
  return r;
}

/// Minimum eigenvalue per Gram block plus the exact coefficient residual.
/// Passes iff every block has min eig >= -tol, asymmetry <= tol and residual <= tol.
inline CertificateReport verify_certificate(const Certificate& c, double tol) {
  const std::size_t n = c.target.nvars();
  auto check_poly = [&](const Polynomial& p, const char* what) {
    if (p.nvars() != n) throw std::invalid_argument(std::string("certificate: ") + what + " has the wrong variable count");
  };
  if (c.xi_multiplier) check_poly(*c.xi_multiplier, "xi multiplier");
  CertificateReport rep;
  rep.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (const auto& g : c.gram) {
    check_poly(g.generator, "generator");
    const std::size_t s = g.basis.size();
    if (g.matrix.size() != s) throw std::invalid_argument("certificate: Gram matrix does not match its basis");
    for (const auto& row : g.matrix)
      if (row.size() != s) throw std::invalid_argument("certificate: Gram matrix is not square");
    for (const auto& m : g.basis)
      if (m.nvars() != n) throw std::invalid_argument("certificate: basis monomial has the wrong variable count");
    Eigen::MatrixXd G(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s));
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t j = 0; j < s; ++j) {
        G(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = to_double(g.matrix[i][j]);
        rep.asymmetry = std::max(rep.asymmetry, std::abs(to_double(g.matrix[i][j] - g.matrix[j][i])));
      }
    double eig = std::numeric_limits<double>::infinity();
    if (s > 0) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (G + G.transpose()), Eigen::EigenvaluesOnly);
      eig = es.eigenvalues().minCoeff();
    }
    rep.min_eigenvalues.push_back(eig);
    rep.min_eigenvalue = std::min(rep.min_eigenvalue, eig);
  }
  for (const auto& t : c.ideal) {
    check_poly(t.h, "ideal generator");
    check_poly(t.multiplier, "ideal multiplier");
  }
  const Polynomial defect = certificate_defect(c);
  for (const auto& [m, v] : defect.terms()) {
    const Rational a = v < 0 ? Rational(-v) : v;
    if (a > rep.residual_exact) {
      rep.residual_exact = a;
      rep.worst_monomial = m;
    }
  }
  rep.residual = to_double(rep.residual_exact);
  rep.pass = rep.min_eigenvalue >= -tol && rep.asymmetry <= tol && rep.residual <= tol;
  return rep;
}

/// Certificate read off an SOS solution: Gram blocks from X, ideal multipliers
/// and xi from u.
inline Certificate extract_certificate(const SosProgram& sos, const SdpSolution& sol) {
  if (sol.X.size() != sos.gram_blocks.size() || static_cast<std::size_t>(sol.u.size()) != sos.multiplier_count + 1)
    throw std::invalid_argument("extract_certificate: solution does not match the program");
  Certificate c;
  c.var_names = sos.var_names;
  c.target = sos.target;
  c.xi = rational_from_double(sol.u[static_cast<Eigen::Index>(sos.multiplier_count)]);
  const std::size_t n = sos.nvars;
  if (sos.xi_multiplier != Polynomial::constant(n, Rational(1))) c.xi_multiplier = sos.xi_multiplier;
  for (std::size_t b = 0; b < sos.gram_blocks.size(); ++b) {
    const auto& blk = sos.gram_blocks[b];
    Certificate::Gram g{blk.generator, blk.basis.elements(), {}};
    const std::size_t s = blk.basis.size();
    g.matrix.assign(s, std::vector<Rational>(s));
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t j = 0; j < s; ++j)
        g.matrix[i][j] = rational_from_double(sol.X[b](static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    c.gram.push_back(std::move(g));
  }
  for (const auto& blk : sos.ideal_blocks) {
    Polynomial mult(n);
    for (std::size_t i = 0; i < blk.basis.size(); ++i)
      mult.add_term(blk.basis[i], rational_from_double(sol.u[static_cast<Eigen::Index>(blk.offset + i)]));
    c.ideal.push_back({blk.h, std::move(mult)});
  }
  return c;
}

// ---------------------------------------------------------------------------
// JSON
//
// { "variables": [names], "xi": num, "target": poly, "xi_multiplier": poly,
//   "gram": [{"generator": poly, "basis": [monomial], "matrix": [[num]]}],
//   "ideal": [{"h": poly, "multiplier": poly}] }
//
// Numbers are JSON numbers or strings holding an exact rational ("1/2").
// "variables", "target" and "xi_multiplier" are optional when a problem
// supplies them.

namespace detail {

inline Rational json_rational(const nlohmann::json& v, const char* what) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long long>());
  if (v.is_number()) return rational_from_double(v.get<double>());
  throw std::invalid_argument(std::string("certificate: ") + what + " must be a number or a rational string");
}

inline nlohmann::ordered_json rational_json(const Rational& q) {
  if (boost::multiprecision::denominator(q) == 1 && boost::multiprecision::abs(q) < Rational(BigInt(1) << 53))
    return boost::multiprecision::numerator(q).convert_to<long long>();
  if (boost::multiprecision::denominator(q) <= (BigInt(1) << 20)) return to_string(q);
  return to_double(q);
}

inline void reject_unknown(const nlohmann::json& obj, std::initializer_list<const char*> keys, const char* what) {
  if (!obj.is_object()) throw std::invalid_argument(std::string(what) + " must be a JSON object");
  for (const auto& [k, v] : obj.items()) {
    bool ok = false;
    for (const char* key : keys) ok = ok || k == key;
    if (!ok) throw std::invalid_argument(std::string(what) + ": unknown key '" + k + "'");
  }
}

inline Monomial parse_monomial(const std::string& text, const std::vector<std::string>& vars) {
  Polynomial p = parse_polynomial(text, vars);
  if (p.size() != 1 || p.terms().begin()->second != 1) throw std::invalid_argument("not a monomial: '" + text + "'");
  return p.terms().begin()->first;
}

}  // namespace detail

/// Parses a certificate. Missing variables / target default to the given ones.
inline Certificate certificate_from_json(const nlohmann::json& j, std::vector<std::string> vars = {},
                                         const std::optional<Polynomial>& default_target = std::nullopt) {
  detail::reject_unknown(j, {"variables", "xi", "target", "xi_multiplier", "gram", "ideal"}, "certificate");
  Certificate c;
  if (j.contains("variables")) vars = j.at("variables").get<std::vector<std::string>>();
  if (vars.empty()) throw std::invalid_argument("certificate: no variables");
  c.var_names = vars;
  const std::size_t n = vars.size();
  c.xi = j.contains("xi") ? detail::json_rational(j.at("xi"), "xi") : Rational(0);
  if (j.contains("target")) {
    c.target = parse_polynomial(j.at("target").get<std::string>(), vars);
  } else if (default_target) {
    if (default_target->nvars() > n) throw std::invalid_argument("certificate: fewer variables than the problem");
    c.target = default_target->lift(0, n - default_target->nvars());
  } else {
    throw std::invalid_argument("certificate: no target polynomial");
  }
  if (j.contains("xi_multiplier")) c.xi_multiplier = parse_polynomial(j.at("xi_multiplier").get<std::string>(), vars);
  if (j.contains("gram"))
    for (const auto& g : j.at("gram")) {
      detail::reject_unknown(g, {"generator", "basis", "matrix"}, "gram block");
      Certificate::Gram blk{g.contains("generator") ? parse_polynomial(g.at("generator").get<std::string>(), vars)
                                                    : Polynomial::constant(n, Rational(1)),
                            {},
                            {}};
      for (const auto& m : g.at("basis")) blk.basis.push_back(detail::parse_monomial(m.get<std::string>(), vars));
      for (const auto& row : g.at("matrix")) {
        std::vector<Rational> r;
        for (const auto& v : row) r.push_back(detail::json_rational(v, "Gram entry"));
        blk.matrix.push_back(std::move(r));
      }
      c.gram.push_back(std::move(blk));
    }
  if (j.contains("ideal"))
    for (const auto& t : j.at("ideal")) {
      detail::reject_unknown(t, {"h", "multiplier"}, "ideal term");
      c.ideal.push_back({parse_polynomial(t.at("h").get<std::string>(), vars),
                         parse_polynomial(t.at("multiplier").get<std::string>(), vars)});
    }
  return c;
}

inline nlohmann::ordered_json certificate_to_json(const Certificate& c) {
  nlohmann::ordered_json j;
  j["variables"] = c.var_names;
  j["xi"] = detail::rational_json(c.xi);
  j["target"] = format_polynomial(c.target, c.var_names);
  if (c.xi_multiplier) j["xi_multiplier"] = format_polynomial(*c.xi_multiplier, c.var_names);
  j["gram"] = nlohmann::ordered_json::array();
  for (const auto& g : c.gram) {
    nlohmann::ordered_json blk;
    blk["generator"] = format_polynomial(g.generator, c.var_names);
    blk["basis"] = nlohmann::ordered_json::array();
    for (const auto& m : g.basis) blk["basis"].push_back(format_monomial(m, c.var_names));
    blk["matrix"] = nlohmann::ordered_json::array();
    for (const auto& row : g.matrix) {
      nlohmann::ordered_json r = nlohmann::ordered_json::array();
      for (const auto& v : row) r.push_back(detail::rational_json(v));
      blk["matrix"].push_back(std::move(r));
    }
    j["gram"].push_back(std::move(blk));
  }
  j["ideal"] = nlohmann::ordered_json::array();
  for (const auto& t : c.ideal)
    j["ideal"].push_back({{"h", format_polynomial(t.h, c.var_names)},
                          {"multiplier", format_polynomial(t.multiplier, c.var_names)}});
  return j;
}

inline nlohmann::ordered_json report_to_json(const CertificateReport& r, const std::vector<std::string>& vars) {
  nlohmann::ordered_json j;
  j["pass"] = r.pass;
  j["min_eigenvalues"] = r.min_eigenvalues;
  j["residual"] = r.residual;
  j["asymmetry"] = r.asymmetry;
  if (r.worst_monomial) j["worst_monomial"] = format_monomial(*r.worst_monomial, vars);
  return j;
}

}  // namespace fjpop
