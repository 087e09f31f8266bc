#pragma once

// Problem files.
//
// {
//   "variables": ["x1", "x2"],
//   "objective": "x1",                        // or [{"coeff": "1", "exps": [1, 0]}]
//   "inequalities": ["1 - x1^2 - x2^2"],
//   "equalities": [],                         // optional
//   "denominator": "1 + x1^2",                // optional
//   "options": {"variant": "fj", "use_products": true, "k_min": 2, "k_max": 4,
//               "tolerances": {"sdp": 1e-8, "stagnation": 1e-6, "classify": 1e-7}}
// }
//
// Unknown keys are rejected at every level.

#include "fjpop/pop.hpp"
#include "fjpop/polytext.hpp"
#include "fjpop/relax.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fjpop {

inline std::optional<Augmentation> parse_variant(std::string_view s) {
  if (s == "none") return std::nullopt;
  if (s == "fj") return Augmentation::fj;
  if (s == "fj+") return Augmentation::fj_plus;
  if (s == "kkt") return Augmentation::kkt;
  if (s == "kkt+") return Augmentation::kkt_plus;
  throw std::invalid_argument("unknown variant '" + std::string(s) + "' (none, fj, fj+, kkt, kkt+)");
}

inline std::string variant_name(const std::optional<Augmentation>& v) {
  return v ? std::string(to_string(*v)) : std::string("none");
}

struct ProblemOptions {
  std::optional<Augmentation> variant;
  bool use_products = false;
  std::optional<int> k_min, k_max;
  std::optional<double> sdp_tol, stagnation_tol, classify_tol;

  bool operator==(const ProblemOptions&) const = default;
};

struct ProblemFile {
  PopProblem pop;
  ProblemOptions options;
};

namespace detail {

inline void check_keys(const nlohmann::json& obj, std::initializer_list<std::string_view> keys, const std::string& where) {
  if (!obj.is_object()) throw std::invalid_argument(where + " must be a JSON object");
  for (const auto& [k, v] : obj.items()) {
    bool ok = false;
    for (auto key : keys) ok = ok || k == key;
    if (!ok) throw std::invalid_argument(where + ": unknown key '" + k + "'");
  }
}

inline Polynomial json_polynomial(const nlohmann::json& v, const std::vector<std::string>& vars, const std::string& where) {
  if (v.is_string()) return parse_polynomial(v.get<std::string>(), vars);
  if (!v.is_array()) throw std::invalid_argument(where + ": expected polynomial text or a term list");
  Polynomial p(vars.size());
  for (const auto& t : v) {
    check_keys(t, {"coeff", "exps"}, where + " term");
    if (!t.contains("coeff") || !t.contains("exps")) throw std::invalid_argument(where + ": terms need coeff and exps");
    const auto& c = t.at("coeff");
    Rational coeff = c.is_string()           ? parse_rational(c.get<std::string>())
                     : c.is_number_integer() ? Rational(c.get<long long>())
                                             : rational_from_double(c.get<double>());
    auto exps = t.at("exps").get<std::vector<int>>();
    if (exps.size() != vars.size()) throw std::invalid_argument(where + ": exponent vector has the wrong length");
    p.add_term(Monomial(std::move(exps)), coeff);
  }
  return p;
}

inline std::size_t line_of(const std::string& text, std::size_t byte, std::size_t& column) {
  std::size_t line = 1, start = 0;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i)
    if (text[i] == '\n') {
      ++line;
      start = i + 1;
    }
  column = byte >= start ? byte - start + 1 : 1;
  return line;
}

}  // namespace detail

inline ProblemFile problem_from_json(const nlohmann::json& j) {
  detail::check_keys(j, {"variables", "objective", "inequalities", "equalities", "denominator", "options"}, "problem");
  if (!j.contains("variables") || !j.contains("objective"))
    throw std::invalid_argument("problem: 'variables' and 'objective' are required");
  const auto vars = j.at("variables").get<std::vector<std::string>>();
  for (std::size_t i = 0; i < vars.size(); ++i)
    for (std::size_t k = i + 1; k < vars.size(); ++k)
      if (vars[i] == vars[k]) throw std::invalid_argument("problem: duplicate variable '" + vars[i] + "'");
  ProblemFile pf;
  Polynomial f = detail::json_polynomial(j.at("objective"), vars, "objective");
  std::vector<Polynomial> g, h;
  if (j.contains("inequalities"))
    for (const auto& p : j.at("inequalities")) g.push_back(detail::json_polynomial(p, vars, "inequality"));
  if (j.contains("equalities"))
    for (const auto& p : j.at("equalities")) h.push_back(detail::json_polynomial(p, vars, "equality"));
  std::optional<Polynomial> theta;
  if (j.contains("denominator")) theta = detail::json_polynomial(j.at("denominator"), vars, "denominator");
  pf.pop = PopProblem(std::move(f), std::move(g), std::move(h), std::move(theta), vars);

  if (j.contains("options")) {
    const auto& o = j.at("options");
    detail::check_keys(o, {"variant", "use_products", "k_min", "k_max", "tolerances"}, "options");
    if (o.contains("variant")) pf.options.variant = parse_variant(o.at("variant").get<std::string>());
    if (o.contains("use_products")) pf.options.use_products = o.at("use_products").get<bool>();
    if (o.contains("k_min")) pf.options.k_min = o.at("k_min").get<int>();
    if (o.contains("k_max")) pf.options.k_max = o.at("k_max").get<int>();
    if (o.contains("tolerances")) {
      const auto& t = o.at("tolerances");
      detail::check_keys(t, {"sdp", "stagnation", "classify"}, "tolerances");
      if (t.contains("sdp")) pf.options.sdp_tol = t.at("sdp").get<double>();
      if (t.contains("stagnation")) pf.options.stagnation_tol = t.at("stagnation").get<double>();
      if (t.contains("classify")) pf.options.classify_tol = t.at("classify").get<double>();
    }
  }
  return pf;
}

/// Parses problem text; JSON syntax errors carry line and column.
inline ProblemFile parse_problem(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t col = 1;
    const std::size_t line = detail::line_of(text, e.byte > 0 ? e.byte - 1 : 0, col);
    throw ParseError("problem file is not valid JSON", line, col);
  }
  return problem_from_json(j);
}

inline ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_problem(ss.str());
}

inline nlohmann::ordered_json problem_to_json(const ProblemFile& pf) {
  const auto& vars = pf.pop.var_names;
  nlohmann::ordered_json j;
  j["variables"] = vars;
  j["objective"] = format_polynomial(pf.pop.f, vars);
  j["inequalities"] = nlohmann::ordered_json::array();
  for (const auto& p : pf.pop.g) j["inequalities"].push_back(format_polynomial(p, vars));
  if (!pf.pop.h.empty()) {
    j["equalities"] = nlohmann::ordered_json::array();
    for (const auto& p : pf.pop.h) j["equalities"].push_back(format_polynomial(p, vars));
  }
  if (pf.pop.theta) j["denominator"] = format_polynomial(*pf.pop.theta, vars);
  nlohmann::ordered_json o;
  o["variant"] = variant_name(pf.options.variant);
  o["use_products"] = pf.options.use_products;
  if (pf.options.k_min) o["k_min"] = *pf.options.k_min;
  if (pf.options.k_max) o["k_max"] = *pf.options.k_max;
  nlohmann::ordered_json t = nlohmann::ordered_json::object();
  if (pf.options.sdp_tol) t["sdp"] = *pf.options.sdp_tol;
  if (pf.options.stagnation_tol) t["stagnation"] = *pf.options.stagnation_tol;
  if (pf.options.classify_tol) t["classify"] = *pf.options.classify_tol;
  if (!t.empty()) o["tolerances"] = t;
  j["options"] = o;
  return j;
}

}  // namespace fjpop
