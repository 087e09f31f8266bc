#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace fjpop;

namespace {

const char* kBall = R"({
  "variables": ["x1", "x2"],
  "objective": "x1",
  "inequalities": ["1 - x1^2 - x2^2"],
  "options": {"variant": "fj", "use_products": true, "k_min": 2, "k_max": 4,
              "tolerances": {"sdp": 1e-8, "stagnation": 1e-6}}
})";

}  // namespace

TEST(ProblemFile, ParsesOptions) {
  const ProblemFile pf = parse_problem(kBall);
  EXPECT_EQ(pf.pop.var_names, (std::vector<std::string>{"x1", "x2"}));
  EXPECT_EQ(pf.pop.f, parse_polynomial("x1", pf.pop.var_names));
  ASSERT_EQ(pf.pop.g.size(), 1u);
  EXPECT_TRUE(pf.pop.h.empty());
  EXPECT_EQ(pf.options.variant, Augmentation::fj);
  EXPECT_TRUE(pf.options.use_products);
  EXPECT_EQ(pf.options.k_min, 2);
  EXPECT_EQ(pf.options.k_max, 4);
  EXPECT_EQ(pf.options.sdp_tol, 1e-8);
  EXPECT_FALSE(pf.options.classify_tol);
}

TEST(ProblemFile, TermLists) {
  const ProblemFile pf = parse_problem(R"({
    "variables": ["x1", "x2"],
    "objective": [{"coeff": "2", "exps": [2, 1]}, {"coeff": "-1/3", "exps": [0, 0]}, {"coeff": 0.5, "exps": [0, 1]}],
    "inequalities": [[{"coeff": 1, "exps": [1, 0]}]]
  })");
  EXPECT_EQ(pf.pop.f, parse_polynomial("2*x1^2*x2 - 1/3 + 1/2*x2", pf.pop.var_names));
  EXPECT_EQ(pf.pop.g[0], parse_polynomial("x1", pf.pop.var_names));
  EXPECT_THROW(parse_problem(R"({"variables": ["x"], "objective": [{"coeff": 1, "exps": [1, 2]}]})"),
               std::invalid_argument);
  EXPECT_THROW(parse_problem(R"({"variables": ["x"], "objective": [{"coeff": 1, "exps": [1], "z": 0}]})"),
               std::invalid_argument);
}

TEST(ProblemFile, RejectsUnknownKeys) {
  EXPECT_THROW(parse_problem(R"({"variables": ["x"], "objective": "x", "extra": 1})"), std::invalid_argument);
  EXPECT_THROW(parse_problem(R"({"variables": ["x"], "objective": "x", "options": {"order": 2}})"), std::invalid_argument);
  EXPECT_THROW(parse_problem(R"({"variables": ["x"], "objective": "x", "options": {"tolerances": {"gap": 1}}})"),
               std::invalid_argument);
  EXPECT_THROW(parse_problem(R"({"variables": ["x", "x"], "objective": "x"})"), std::invalid_argument);
  EXPECT_THROW(parse_problem(R"({"variables": ["x"]})"), std::invalid_argument);
  EXPECT_THROW(parse_problem(R"({"variables": ["x"], "objective": "x", "options": {"variant": "fj++"}})"),
               std::invalid_argument);
  EXPECT_THROW(parse_problem(R"({"variables": ["x"], "objective": "y"})"), ParseError);
}

TEST(ProblemFile, SyntaxErrorsCarryLineAndColumn) {
  try {
    (void)parse_problem("{\n  \"variables\": [\"x\"],\n  \"objective\": \"x\" \"oops\"\n}");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_GT(e.column(), 1u);
  }
}

TEST(ProblemFile, EchoRoundTrip) {
  std::vector<ProblemFile> files{parse_problem(kBall)};
  files.push_back(parse_problem(R"({
    "variables": ["a", "b"],
    "objective": "a*b - 7/2",
    "inequalities": ["a", "1 - b^2"],
    "equalities": ["a^2 + b^2 - 1"],
    "denominator": "1 + a^2",
    "options": {"variant": "kkt+", "tolerances": {"classify": 1e-5}}
  })"));
  std::mt19937 rng(12);
  for (int t = 0; t < 10; ++t) {
    const std::size_t n = 1 + t % 3;
    std::vector<Polynomial> g{oracle::random_polynomial(rng, n, 3)};
    files.push_back({PopProblem(oracle::random_polynomial(rng, n, 4), g, {}, std::nullopt, default_variable_names(n)), {}});
  }
  for (const auto& pf : files) {
    const ProblemFile back = parse_problem(problem_to_json(pf).dump(2));
    EXPECT_EQ(back.pop, pf.pop);
    EXPECT_EQ(back.options, pf.options);
  }
}

TEST(Variants, Names) {
  for (const char* v : {"none", "fj", "fj+", "kkt", "kkt+"}) EXPECT_EQ(variant_name(parse_variant(v)), v);
  EXPECT_THROW(parse_variant("FJ"), std::invalid_argument);
}
