#pragma once

#include "fjpop/polynomial.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fjpop {

/// minimize f over S(g) ∩ V(h), optionally with a denominator polynomial theta.
struct PopProblem {
  Polynomial f;
  std::vector<Polynomial> g;
  std::vector<Polynomial> h;
  std::optional<Polynomial> theta;
  std::vector<std::string> var_names;

  PopProblem() = default;
  PopProblem(Polynomial objective, std::vector<Polynomial> ineq, std::vector<Polynomial> eq,
             std::optional<Polynomial> denominator, std::vector<std::string> names)
      : f(std::move(objective)),
        g(std::move(ineq)),
        h(std::move(eq)),
        theta(std::move(denominator)),
        var_names(std::move(names)) {
    validate();
  }

  std::size_t nvars() const noexcept { return var_names.size(); }
  std::size_t m() const noexcept { return g.size(); }

  /// max degree over f and every g_j (at least 0).
  int d() const {
    int deg = std::max(f.degree(), 0);
    for (const auto& gj : g) deg = std::max(deg, gj.degree());
    return deg;
  }

  void validate() const {
    if (var_names.empty()) throw std::invalid_argument("problem needs at least one variable");
    auto check = [&](const Polynomial& p, const char* what) {
      if (p.nvars() != var_names.size())
        throw std::invalid_argument(std::string(what) + " is over the wrong number of variables");
    };
    check(f, "objective");
    for (const auto& p : g) check(p, "inequality");
    for (const auto& p : h) check(p, "equality");
    if (theta) check(*theta, "denominator");
  }

  bool operator==(const PopProblem& o) const {
    return f == o.f && g == o.g && h == o.h && theta == o.theta && var_names == o.var_names;
  }
};

}  // namespace fjpop
