#include "desk.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace fjpop;

namespace {

const std::vector<std::string> X1{"x"};

Polynomial P(const std::string& s, const std::vector<std::string>& v = X1) { return parse_polynomial(s, v); }

Certificate hand_certificate() {
  // 1 + x = 1/2 (1 + x)^2 + 1/2 (1 - x^2)
  Certificate c;
  c.var_names = X1;
  c.target = P("1 + x");
  const Monomial one(std::vector<int>{0}), x(std::vector<int>{1});
  const Rational h(1, 2);
  c.gram.push_back({P("1"), {one, x}, {{h, h}, {h, h}}});
  c.gram.push_back({P("1 - x^2"), {one}, {{h}}});
  return c;
}

}  // namespace

TEST(Lagrange, Examples) {
  EXPECT_EQ(lagrange_basis(P("x"), {Rational(3)}), std::vector<Polynomial>{P("1")});
  const auto b = lagrange_basis(P("x"), {Rational(0), Rational(1)});
  EXPECT_EQ(b[0], P("1 - x"));
  EXPECT_EQ(b[1], P("x"));
  const auto b2 = lagrange_basis(P("x^2"), {Rational(0), Rational(1)});
  EXPECT_EQ(b2[1], P("x^2"));
  const Rational m1[] = {Rational(-1)};
  EXPECT_EQ(b2[1].evaluate(std::span<const Rational>(m1)), Rational(1));
  EXPECT_EQ(b2[0].evaluate(std::span<const Rational>(m1)), Rational(0));
  EXPECT_THROW(lagrange_basis(P("x"), {Rational(1), Rational(1)}), std::invalid_argument);
  EXPECT_THROW(lagrange_basis(P("x"), {}), std::invalid_argument);
}

TEST(Lagrange, DeltaPropertyAndDegreeCap) {
  // f = a x + c takes every value t at the rational point (t - c) / a.
  std::mt19937 rng(14);
  std::uniform_int_distribution<int> small(-6, 6), count(1, 4);
  for (int trial = 0; trial < 20; ++trial) {
    Rational a(small(rng));
    if (a == 0) a = 1;
    const Rational c(small(rng), 3);
    const Polynomial f = Polynomial::constant(1, c) + a * P("x");
    const int r = count(rng);
    std::vector<Rational> t;
    while (static_cast<int>(t.size()) < r) {
      const Rational v(small(rng), 2);
      if (std::find(t.begin(), t.end(), v) == t.end()) t.push_back(v);
    }
    const auto p = lagrange_basis(f, t);
    for (std::size_t j = 0; j < p.size(); ++j) {
      EXPECT_LE(std::max(p[j].degree(), 0), f.degree() * (r - 1));
      for (std::size_t i = 0; i < t.size(); ++i) {
        const Rational u[] = {(t[i] - c) / a};
        EXPECT_EQ(p[j].evaluate(std::span<const Rational>(u)), Rational(i == j ? 1 : 0));
      }
    }
  }
  // Two variables: f = x1 x2 at points on each level set.
  const std::vector<std::string> v{"x1", "x2"};
  const std::vector<Rational> t{Rational(0), Rational(2), Rational(-3, 2)};
  const auto p = lagrange_basis(P("x1*x2", v), t);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const Rational u[] = {Rational(2), t[i] / 2};
    for (std::size_t j = 0; j < t.size(); ++j)
      EXPECT_EQ(p[j].evaluate(std::span<const Rational>(u)), Rational(i == j ? 1 : 0));
    EXPECT_LE(p[i].degree(), 2 * 2);
  }
}

TEST(CertificateQ, Examples) {
  EXPECT_EQ(build_certificate_q(P("x^2"), {Rational(0), Rational(1)}), P("x^4"));
  EXPECT_EQ(build_certificate_q(P("x"), {Rational(5)}), P("5"));
  const Polynomial q = build_certificate_q(P("x"), {Rational(0), Rational(2)});
  EXPECT_EQ(q, P("1/2*x^2"));
  const Polynomial d = P("x") - q;
  for (int x : {0, 2}) {
    const Rational u[] = {Rational(x)};
    EXPECT_EQ(d.evaluate(std::span<const Rational>(u)), Rational(0));
  }
  EXPECT_THROW(build_certificate_q(P("x"), {Rational(-1), Rational(1)}), std::invalid_argument);
}

TEST(CertificateQ, NonnegativeAndVanishingOnLevelSets) {
  std::mt19937 rng(6);
  const std::vector<std::string> v{"x1", "x2"};
  const Polynomial f = P("x1^2 + x1*x2", v);
  const std::vector<Rational> t{Rational(0), Rational(1), Rational(7, 2)};
  const Polynomial q = build_certificate_q(f, t);
  EXPECT_LE(q.degree(), 2 * f.degree() * 2);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int i = 0; i < 50; ++i) {
    const double pt[] = {u(rng), u(rng)};
    EXPECT_GE(q.evaluate(std::span<const double>(pt)), 0.0);
  }
  // x2 = (t - x1^2) / x1 lands on the level set f = t.
  std::vector<std::vector<double>> level;
  for (const auto& ti : t)
    for (double x1 : {0.5, 1.0, -2.0}) level.push_back({x1, (to_double(ti) - x1 * x1) / x1});
  EXPECT_TRUE(verify_vanishing(f - q, level, 1e-9));
  EXPECT_FALSE(verify_vanishing(f - q, {{0.3, 0.3}}, 1e-9));
}

TEST(VerifyVanishing, Examples) {
  EXPECT_FALSE(verify_vanishing(P("1"), {{0.0}}, 1e-6));
  EXPECT_TRUE(verify_vanishing(P("x^2*(1 - x^2)"), {{0.0}, {1.0}, {-1.0}}, 1e-12));
  EXPECT_TRUE(verify_vanishing(P("1"), {}, 1e-12));
  EXPECT_THROW(verify_vanishing(P("x"), {{1.0, 2.0}}, 1e-6), std::invalid_argument);
}

TEST(VerifyCertificate, HandIdentity) {
  const auto rep = verify_certificate(hand_certificate(), 1e-12);
  EXPECT_TRUE(rep.pass);
  EXPECT_EQ(rep.residual_exact, Rational(0));
  EXPECT_GE(rep.min_eigenvalue, -1e-15);
  ASSERT_EQ(rep.min_eigenvalues.size(), 2u);

  Certificate bad = hand_certificate();
  bad.gram[0].matrix[0][0] += Rational(1, 1000);
  const auto r2 = verify_certificate(bad, 1e-6);
  EXPECT_FALSE(r2.pass);
  EXPECT_EQ(r2.residual_exact, Rational(1, 1000));
  ASSERT_TRUE(r2.worst_monomial);
  EXPECT_EQ(r2.worst_monomial->degree(), 0);

  Certificate asym = hand_certificate();
  asym.gram[0].matrix[0][1] += Rational(1, 10);
  asym.gram[0].matrix[1][0] -= Rational(1, 10);
  const auto r3 = verify_certificate(asym, 1e-6);
  EXPECT_EQ(r3.residual_exact, Rational(0));
  EXPECT_FALSE(r3.pass);

  Certificate wrong = hand_certificate();
  wrong.gram[1].matrix = {{Rational(1)}, {Rational(1)}};
  EXPECT_THROW(verify_certificate(wrong, 1e-6), std::invalid_argument);
}

TEST(VerifyCertificate, IdealTermsAndXiMultiplier) {
  // x = x * 1 on V(x); then x - 3 * (1/3) = (-1) + x * 1 with a negative Gram block.
  Certificate c;
  c.var_names = X1;
  c.target = P("x");
  c.ideal.push_back({P("x"), P("1")});
  EXPECT_TRUE(verify_certificate(c, 1e-12).pass);
  c.xi = Rational(1, 3);
  c.xi_multiplier = P("3");
  c.gram.push_back({P("1"), {Monomial(std::vector<int>{0})}, {{Rational(-1)}}});
  const auto rep = verify_certificate(c, 1e-12);
  EXPECT_EQ(rep.residual_exact, Rational(0));
  EXPECT_FALSE(rep.pass);  // the Gram block is negative
}

TEST(ExtractCertificate, BallPassesAndIsSound) {
  const PopProblem aug = augment_problem(desk::ball(), Augmentation::fj, true);
  const SosProgram sos = build_sos_sdp(aug, 2);
  const auto sol = solve_sdp(sos);
  ASSERT_EQ(sol.status, SdpStatus::optimal);
  const Certificate cert = extract_certificate(sos, sol);
  const auto rep = verify_certificate(cert, 1e-6);
  EXPECT_TRUE(rep.pass) << "residual " << rep.residual << " min eig " << rep.min_eigenvalue;
  EXPECT_NEAR(to_double(cert.xi), -1.0, 1e-6);

  // Soundness: target(u) - xi >= -tol on feasible points of the lifted problem.
  std::mt19937 rng(19);
  std::uniform_real_distribution<double> ang(0, 2 * M_PI), rad(0, 1);
  for (int t = 0; t < 20; ++t) {
    const double r = std::sqrt(rad(rng)), th = ang(rng);
    const double pt[] = {r * std::cos(th), r * std::sin(th), 0.3, -0.2};
    EXPECT_GE(cert.target.evaluate(std::span<const double>(pt)) - to_double(cert.xi), -1e-6);
  }
}

TEST(CertificateJson, RoundTrip) {
  const Certificate c = hand_certificate();
  const auto j = certificate_to_json(c);
  EXPECT_EQ(j["gram"][0]["matrix"][0][0], "1/2");
  const Certificate back = certificate_from_json(nlohmann::json::parse(j.dump()));
  EXPECT_EQ(back.target, c.target);
  EXPECT_EQ(back.xi, c.xi);
  ASSERT_EQ(back.gram.size(), 2u);
  EXPECT_EQ(back.gram[0].matrix, c.gram[0].matrix);
  EXPECT_EQ(back.gram[1].generator, c.gram[1].generator);
  EXPECT_EQ(back.gram[0].basis, c.gram[0].basis);
  EXPECT_TRUE(verify_certificate(back, 0.0).pass);

  EXPECT_THROW(certificate_from_json(nlohmann::json::parse(R"({"variables":["x"],"target":"x","bogus":1})")),
               std::invalid_argument);
  EXPECT_THROW(certificate_from_json(nlohmann::json::parse(R"({"variables":["x"]})")), std::invalid_argument);
  const auto lifted = certificate_from_json(nlohmann::json::parse(R"({"variables":["x","lambda0"],"xi":0.5})"),
                                            {}, P("x"));
  EXPECT_EQ(lifted.target, P("x", {"x", "lambda0"}));
  EXPECT_EQ(lifted.xi, Rational(1, 2));
}
