#include "desk.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace fjpop;

namespace {

const std::vector<std::string> X1{"x"};

Polynomial P(const std::string& s, const std::vector<std::string>& v) { return parse_polynomial(s, v); }

LinearFunctional lf(std::initializer_list<std::pair<std::size_t, int>> t) {
  LinearFunctional out;
  for (auto [i, c] : t) out.add(i, Rational(c));
  return out;
}

double min_eig(const Eigen::MatrixXd& M) {
  if (M.size() == 0) return 0.0;
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(M, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

}  // namespace

TEST(MomentStructure, Examples) {
  const auto s = moment_structure(1, 1);
  EXPECT_EQ(s.index, (std::vector<std::vector<std::size_t>>{{0, 1}, {1, 2}}));

  const auto s2 = moment_structure(2, 1);
  ASSERT_EQ(s2.rows.size(), 3u);
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b) {
      EXPECT_EQ(s2.index[a][b], s2.index[b][a]);
      EXPECT_EQ(s2.moments[s2.index[a][b]], s2.rows[a] * s2.rows[b]);
    }

  const double u[] = {2.0};
  const auto y = point_moments(s.moments, u);
  Eigen::Matrix2d M;
  M << y[s.index[0][0]], y[s.index[0][1]], y[s.index[1][0]], y[s.index[1][1]];
  EXPECT_EQ(M, (Eigen::Matrix2d() << 1, 2, 2, 4).finished());
  EXPECT_NEAR(min_eig(M), 0.0, 1e-12);
}

TEST(LocalizingStructure, Examples) {
  const auto one = localizing_structure(Polynomial::constant(2, Rational(1)), 2, 1);
  const auto s = moment_structure(2, 1);
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b) EXPECT_EQ(one[a][b], lf({{s.index[a][b], 1}}));

  const auto loc = localizing_structure(P("1 - x^2", X1), 1, 0);
  ASSERT_EQ(loc.size(), 1u);
  EXPECT_EQ(loc[0][0], lf({{0, 1}, {2, -1}}));

  // At a point mass the localizing matrix is p(u) v(u) v(u)'.
  const Polynomial p = P("1 - x^2", X1);
  const MonomialBasis yb(1, 2 * 2 + 2);
  const auto L = localizing_structure(p, 2, yb);
  const double u[] = {0.5};
  const auto y = point_moments(yb, u);
  const double pu = p.evaluate(std::span<const double>(u));
  const double v[] = {1.0, 0.5, 0.25};
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b) EXPECT_NEAR(L[a][b].evaluate(y), pu * v[a] * v[b], 1e-15);
}

TEST(BuildMoment, IntervalExample) {
  const PopProblem pop(P("x", X1), {P("1 - x^2", X1)}, {}, std::nullopt, X1);
  const SdpProblem sdp = build_moment_sdp(pop, 1);
  ASSERT_EQ(sdp.blocks.size(), 2u);
  EXPECT_EQ(sdp.blocks[0].size(), 2u);
  EXPECT_EQ(sdp.blocks[1].size(), 1u);
  EXPECT_EQ(sdp.blocks[1].entries[0][0], lf({{0, 1}, {2, -1}}));
  EXPECT_EQ(sdp.objective, lf({{1, 1}}));
  EXPECT_EQ(sdp.normalization, lf({{0, 1}}));
  EXPECT_TRUE(sdp.equalities.empty());

  const PopProblem with_h(P("x", X1), {P("1 - x^2", X1)}, {P("x", X1)}, std::nullopt, X1);
  const SdpProblem z = build_moment_sdp(with_h, 1);
  ASSERT_EQ(z.blocks.size(), 3u);
  EXPECT_EQ(z.blocks[2].kind, SdpBlock::Kind::zero);
  EXPECT_EQ(z.blocks[2].entries[0][0], lf({{1, 1}}));
  ASSERT_EQ(z.equalities.size(), 1u);
  EXPECT_EQ(z.equalities[0], lf({{1, 1}}));
  EXPECT_EQ(z.psd_dimension(), 3u);
}

TEST(BuildMoment, OrderTooSmall) {
  const PopProblem pop(P("x^4", X1), {P("1 - x^2", X1)}, {}, std::nullopt, X1);
  try {
    (void)build_moment_sdp(pop, 1);
    FAIL() << "expected OrderTooSmall";
  } catch (const OrderTooSmall& e) {
    EXPECT_EQ(e.minimal_order, 2);
  }
  EXPECT_THROW(build_sos_sdp(pop, 1), OrderTooSmall);
  EXPECT_NO_THROW(build_moment_sdp(pop, 2));
}

TEST(BuildSos, HandCertificateSatisfiesEquations) {
  const PopProblem pop = desk::interval();
  const SosProgram sos = build_sos_sdp(pop, 1);
  ASSERT_EQ(sos.gram_blocks.size(), 2u);
  EXPECT_EQ(sos.equations.size(), 3u);
  // xi = 0, G0 = 1/2 [[1,1],[1,1]], G1 = [1/2].
  const std::vector<std::vector<std::vector<Rational>>> G{{{Rational(1, 2), Rational(1, 2)}, {Rational(1, 2), Rational(1, 2)}},
                                                          {{Rational(1, 2)}}};
  const Rational xi(0);
  for (const auto& eq : sos.equations) {
    Rational lhs = xi * eq.xi_coef;
    for (const auto& t : eq.gram) lhs += t.coef * G[t.block][t.i][t.j];
    EXPECT_EQ(lhs, eq.rhs) << "alpha degree " << eq.alpha.degree();
  }
}

TEST(BuildSos, SquareAndCounts) {
  const PopProblem sq(P("x^2", X1), {}, {}, std::nullopt, X1);
  const SosProgram sos = build_sos_sdp(sq, 1);
  ASSERT_EQ(sos.gram_blocks.size(), 1u);
  const std::vector<std::vector<Rational>> G{{Rational(0), Rational(0)}, {Rational(0), Rational(1)}};
  for (const auto& eq : sos.equations) {
    Rational lhs(0);
    for (const auto& t : eq.gram) lhs += t.coef * G[t.i][t.j];
    EXPECT_EQ(lhs, eq.rhs);
  }
  EXPECT_EQ(build_sos_sdp(sq, 2).equations.size(), 5u);
  const auto val = solve_sdp(sos);
  EXPECT_EQ(val.status, SdpStatus::optimal);
  EXPECT_NEAR(val.value, 0.0, 1e-7);

  const PopProblem with_h(P("x", X1), {}, {P("x^3", X1)}, std::nullopt, X1);
  const SosProgram s2 = build_sos_sdp(with_h, 2);
  ASSERT_EQ(s2.ideal_blocks.size(), 1u);
  EXPECT_EQ(s2.ideal_blocks[0].basis.size(), 1u);
  EXPECT_EQ(s2.multiplier_count, 1u);
  for (std::size_t k = 2; k <= 4; ++k)
    for (std::size_t n = 1; n <= 3; ++n) {
      const PopProblem p(Polynomial::constant(n, Rational(0)), {}, {}, std::nullopt, default_variable_names(n));
      EXPECT_EQ(build_sos_sdp(p, static_cast<int>(k)).equations.size(), oracle::binomial(n + 2 * k, 2 * k));
    }
}

TEST(Eta, Examples) {
  const std::vector<std::string> v{"x", "t"};
  const Polynomial f = P("x^2", v), theta = P("t", v);
  EXPECT_EQ(eta(3, f, theta), 4);
  EXPECT_EQ(eta(1, f, theta), 0);
  EXPECT_EQ(eta(4, f, P("t^2 + 1", v)), 2);
  EXPECT_EQ(eta(5, f, P("7", v)), 0);
  EXPECT_THROW(eta(0, f, theta), std::invalid_argument);
  EXPECT_THROW(eta(2, f, Polynomial(2)), std::invalid_argument);
}

TEST(Eta, DenominatorDegreeContract) {
  std::mt19937 rng(8);
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 1 + t % 3;
    Polynomial f = oracle::random_polynomial(rng, n, 4);
    Polynomial th = oracle::random_polynomial(rng, n, 3);
    if (th.is_zero()) th = Polynomial::constant(n, Rational(1));
    const int df = std::max(f.degree(), 0);
    for (int k = (df + 1) / 2; k <= 5; ++k) {
      const int e = eta(k, f, th);
      EXPECT_EQ(e % 2, 0);
      const Polynomial id = th.pow(static_cast<unsigned>(e)) * (f - Polynomial::constant(n, Rational(1)));
      EXPECT_LE(id.degree(), 2 * k);
    }
  }
}

TEST(Denominator, LambdaZeroObjective) {
  const PopProblem aug = hierarchy_problem(desk::ball(), Augmentation::fj, true, true);
  ASSERT_TRUE(aug.theta);
  EXPECT_EQ(*aug.theta, Polynomial::variable(4, 2));
  const auto rel = build_denominator_sdp(aug, 3);
  EXPECT_EQ(rel.eta, 4);
  const Polynomial obj = aug.theta->pow(4) * aug.f;
  EXPECT_EQ(rel.moment.objective, riesz(obj, Monomial(4), rel.moment.ybasis));
  EXPECT_EQ(rel.moment.normalization, riesz(aug.theta->pow(4), Monomial(4), rel.moment.ybasis));
  EXPECT_EQ(rel.sos.target, obj);
  EXPECT_THROW(build_denominator_sdp(desk::ball(), 1), std::invalid_argument);
  EXPECT_EQ(build_denominator_sdp(aug, 2).eta, 2);
}

TEST(Augment, StructuralExamples) {
  const PopProblem a = augment_problem(desk::cube(), Augmentation::fj, true);
  EXPECT_EQ(a.var_names, (std::vector<std::string>{"x", "lambda0", "lambda1"}));
  ASSERT_EQ(a.g.size(), 1u);
  EXPECT_EQ(a.g[0], P("x^3", a.var_names));
  EXPECT_EQ(a.h.size(), 3u);

  const std::vector<std::string> v{"x1", "x2"};
  const PopProblem two(P("x1", v), {P("x1", v), P("x2", v)}, {}, std::nullopt, v);
  EXPECT_EQ(augment_problem(two, std::nullopt, true).g.size(), 3u);
  const PopProblem k = augment_problem(two, Augmentation::kkt, false);
  EXPECT_EQ(k.nvars(), 4u);
  EXPECT_EQ(k.h.size(), 4u);
  EXPECT_THROW(augment_problem(two, Augmentation::fj, true, 1), std::invalid_argument);
  const PopProblem with_h(P("x1", v), {}, {P("x2", v)}, std::nullopt, v);
  EXPECT_THROW(augment_problem(with_h, Augmentation::fj, false), std::invalid_argument);
}

TEST(Soundness, PointMassSatisfiesEveryBlock) {
  std::mt19937 rng(123);
  for (const auto& dp : desk::problems()) {
    const SdpProblem sdp = build_moment_sdp(dp.pop, dp.k);
    for (int t = 0; t < 10; ++t) {
      const auto u = dp.sample(rng);
      const auto y = point_moments(sdp.ybasis, u);
      const auto blocks = sdp.evaluate_blocks(y);
      for (std::size_t b = 0; b < blocks.size(); ++b) {
        if (sdp.blocks[b].kind == SdpBlock::Kind::psd)
          EXPECT_GE(min_eig(blocks[b]), -1e-10) << dp.name << " " << sdp.blocks[b].label;
        else
          EXPECT_LE(blocks[b].cwiseAbs().maxCoeff(), 1e-10) << dp.name << " " << sdp.blocks[b].label;
      }
      for (const auto& e : sdp.equalities) EXPECT_LE(std::abs(e.evaluate(y)), 1e-10) << dp.name;
      EXPECT_NEAR(sdp.objective.evaluate(y), dp.pop.f.evaluate(std::span<const double>(u)), 1e-12) << dp.name;
      EXPECT_DOUBLE_EQ(sdp.normalization.evaluate(y), 1.0);
    }
  }
}

TEST(Soundness, SosValueBelowFeasibleValues) {
  std::mt19937 rng(77);
  for (const auto& dp : desk::problems()) {
    const auto sol = solve_sdp(build_sos_sdp(dp.pop, dp.k));
    ASSERT_EQ(sol.status, SdpStatus::optimal) << dp.name;
    for (int t = 0; t < 10; ++t) {
      const auto u = dp.sample(rng);
      EXPECT_LE(sol.value, dp.pop.f.evaluate(std::span<const double>(u)) + 1e-6) << dp.name;
    }
  }
}
