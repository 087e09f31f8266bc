#pragma once

// Small problems with known feasible points.

#include "fjpop/fjpop.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace desk {

struct Problem {
  std::string name;
  fjpop::PopProblem pop;  // already augmented where applicable
  int k;
  std::function<std::vector<double>(std::mt19937&)> sample;
};

inline fjpop::Polynomial P(const std::string& text, const std::vector<std::string>& vars) {
  return fjpop::parse_polynomial(text, vars);
}

inline fjpop::PopProblem ball() {
  const std::vector<std::string> v{"x1", "x2"};
  return fjpop::PopProblem(P("x1", v), {P("1 - x1^2 - x2^2", v)}, {}, std::nullopt, v);
}

inline fjpop::PopProblem cube() {
  const std::vector<std::string> v{"x"};
  return fjpop::PopProblem(P("x", v), {P("x^3", v)}, {}, std::nullopt, v);
}

inline fjpop::PopProblem interval() {
  const std::vector<std::string> v{"x"};
  return fjpop::PopProblem(P("1 + x", v), {P("1 - x^2", v)}, {}, std::nullopt, v);
}

/// min y1 s.t. [[1, y1], [y1, 1]] >= 0, written as max -y1.
inline fjpop::SdpInstance two_by_two() {
  fjpop::SdpInstance inst;
  inst.block_sizes = {2};
  inst.C = {{0, 0, 0, 1.0}, {0, 1, 1, 1.0}};
  inst.A = {{{0, 0, 1, -1.0}}};
  inst.b = Eigen::VectorXd::Constant(1, -1.0);
  inst.cf = Eigen::VectorXd(0);
  return inst;
}

/// min c'x s.t. x >= 0 and a'x >= r for each row, as a diagonal block.
inline fjpop::SdpInstance lp2(const std::array<double, 2>& c, const std::vector<std::array<double, 3>>& rows) {
  fjpop::SdpInstance inst;
  const int n = static_cast<int>(rows.size());
  inst.block_sizes = {-(n + 2)};
  inst.A.resize(2);
  for (int v = 0; v < 2; ++v) inst.A[v].push_back({0, v, v, -1.0});
  for (int r = 0; r < n; ++r) {
    inst.C.push_back({0, r + 2, r + 2, -rows[r][2]});
    for (int v = 0; v < 2; ++v)
      if (rows[r][v] != 0) inst.A[v].push_back({0, r + 2, r + 2, -rows[r][v]});
  }
  inst.b = Eigen::Vector2d(-c[0], -c[1]);
  inst.cf = Eigen::VectorXd(0);
  return inst;
}

inline std::vector<Problem> problems() {
  std::vector<Problem> out;
  auto uni = [](std::mt19937& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };

  out.push_back({"disk", ball(), 2, [uni](std::mt19937& rng) {
                   const double r = std::sqrt(uni(rng, 0, 1)), t = uni(rng, 0, 2 * M_PI);
                   return std::vector<double>{r * std::cos(t), r * std::sin(t)};
                 }});
  out.push_back({"interval", interval(), 2, [uni](std::mt19937& rng) { return std::vector<double>{uni(rng, -1, 1)}; }});
  {
    const std::vector<std::string> v{"x1", "x2"};
    fjpop::PopProblem box(P("x1*x2 + x1", v), {P("1 - x1^2", v), P("1 - x2^2", v)}, {}, std::nullopt, v);
    out.push_back({"box", fjpop::augment_problem(box, std::nullopt, true), 3, [uni](std::mt19937& rng) {
                     return std::vector<double>{uni(rng, -1, 1), uni(rng, -1, 1)};
                   }});
  }
  {
    const std::vector<std::string> v{"x1", "x2"};
    fjpop::PopProblem circle(P("x1*x2", v), {P("x1", v)}, {P("x1^2 + x2^2 - 1", v)}, std::nullopt, v);
    out.push_back({"half-circle", circle, 2, [uni](std::mt19937& rng) {
                     const double t = uni(rng, -M_PI / 2, M_PI / 2);
                     return std::vector<double>{std::cos(t), std::sin(t)};
                   }});
  }
  {
    const std::vector<std::string> v{"x1", "x2"};
    fjpop::PopProblem sq(P("x1^2 + x2^2", v), {P("1 - x1^2 - x2^2", v)}, {}, std::nullopt, v);
    // FJ points: the unit circle with lambda0 = -lambda1 = +-1/sqrt2, and the origin with lambda = (+-1, 0).
    out.push_back({"fj-sphere", fjpop::augment_problem(sq, fjpop::Augmentation::fj, true), 2,
                   [uni](std::mt19937& rng) {
                     const double s = uni(rng, 0, 1) < 0.5 ? 1.0 : -1.0;
                     if (uni(rng, 0, 1) < 0.2) return std::vector<double>{0.0, 0.0, s, 0.0};
                     const double t = uni(rng, 0, 2 * M_PI);
                     return std::vector<double>{std::cos(t), std::sin(t), s / std::sqrt(2.0), -s / std::sqrt(2.0)};
                   }});
  }
  return out;
}

}  // namespace desk
