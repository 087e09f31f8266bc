#include "desk.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace fjpop;

namespace {

void expect_residuals_within(const SdpSolution& s, double tol) {
  EXPECT_LE(s.residuals.primal, tol);
  EXPECT_LE(s.residuals.dual, tol);
  EXPECT_LE(s.residuals.gap, tol);
}

}  // namespace

TEST(SolveSdp, TwoByTwo) {
  const auto s = solve_sdp(desk::two_by_two());
  ASSERT_EQ(s.status, SdpStatus::optimal);
  EXPECT_NEAR(-s.dual_value, -1.0, 1e-8);
  EXPECT_NEAR(-s.primal_value, -1.0, 1e-8);
  EXPECT_NEAR(s.y[0], -1.0, 1e-6);
  expect_residuals_within(s, 1e-8);
}

TEST(SolveSdp, DiagonalLp) {
  const std::vector<std::array<double, 3>> rows{{1, 1, 1}};
  const auto s = solve_sdp(desk::lp2({1, 1}, rows));
  ASSERT_EQ(s.status, SdpStatus::optimal);
  EXPECT_NEAR(-s.dual_value, 1.0, 1e-9);

  std::mt19937 rng(31);
  std::uniform_real_distribution<double> pos(0.2, 3.0);
  SdpOptions tight;
  tight.tol = 1e-10;
  for (int t = 0; t < 10; ++t) {
    const std::array<double, 2> c{pos(rng), pos(rng)};
    std::vector<std::array<double, 3>> r;
    for (int i = 0; i < 3; ++i) r.push_back({pos(rng), pos(rng), pos(rng)});
    std::vector<std::array<double, 3>> all = r;
    all.push_back({1, 0, 0});
    all.push_back({0, 1, 0});
    const auto sol = solve_sdp(desk::lp2(c, r), tight);
    ASSERT_EQ(sol.status, SdpStatus::optimal);
    EXPECT_NEAR(-sol.dual_value, oracle::lp2_vertex_min(c, all), 1e-9);
  }
}

TEST(SolveSdp, IntervalFirstOrder) {
  const auto rho = solve_sdp(build_sos_sdp(desk::interval(), 1));
  ASSERT_EQ(rho.status, SdpStatus::optimal);
  EXPECT_NEAR(rho.value, 0.0, 1e-7);
  const auto tau = solve_sdp(build_moment_sdp(desk::interval(), 1));
  ASSERT_EQ(tau.status, SdpStatus::optimal);
  EXPECT_NEAR(tau.value, 0.0, 1e-7);
}

TEST(SolveSdp, DeskProblemsBothSides) {
  for (const auto& dp : desk::problems()) {
    const auto sos = solve_sdp(build_sos_sdp(dp.pop, dp.k));
    const auto mom = solve_sdp(build_moment_sdp(dp.pop, dp.k));
    ASSERT_EQ(sos.status, SdpStatus::optimal) << dp.name;
    ASSERT_EQ(mom.status, SdpStatus::optimal) << dp.name;
    expect_residuals_within(sos, 1e-7);
    expect_residuals_within(mom, 1e-7);
    EXPECT_NEAR(sos.value, mom.value, 1e-5) << dp.name;
    EXPECT_LE(sos.value, mom.value + 1e-6) << dp.name;
  }
}

TEST(SolveSdp, DiskMatchesGridMinimum) {
  const auto s = solve_sdp(build_sos_sdp(desk::ball(), 1));
  ASSERT_EQ(s.status, SdpStatus::optimal);
  EXPECT_NEAR(s.value, oracle::disk_grid_min([](double x, double) { return x; }), 1e-6);
}

TEST(SolveSdp, ObjectiveScaling) {
  for (const auto& dp : desk::problems()) {
    PopProblem scaled = dp.pop;
    scaled.f *= Rational(10);
    const auto a = solve_sdp(build_sos_sdp(dp.pop, dp.k));
    const auto b = solve_sdp(build_sos_sdp(scaled, dp.k));
    ASSERT_EQ(b.status, SdpStatus::optimal) << dp.name;
    EXPECT_LE(std::abs(b.value - 10 * a.value), 1e-6 * std::max(1.0, std::abs(b.value))) << dp.name;
  }
}

TEST(SolveSdp, DimensionCap) {
  SdpOptions o;
  o.dimension_cap = 2;
  EXPECT_NO_THROW(solve_sdp(desk::two_by_two(), o));
  EXPECT_THROW(solve_sdp(build_moment_sdp(desk::ball(), 2), o), SdpError);
}

TEST(SolveSdp, MonotoneInOrder) {
  for (const auto& dp : desk::problems()) {
    if (dp.name == "box") continue;  // order 4 is above the default cap
    std::optional<double> prev;
    for (int k = dp.k; k <= dp.k + 1; ++k) {
      const auto sos = solve_sdp(build_sos_sdp(dp.pop, k));
      const auto mom = solve_sdp(build_moment_sdp(dp.pop, k));
      ASSERT_EQ(sos.status, SdpStatus::optimal) << dp.name << " k=" << k;
      ASSERT_EQ(mom.status, SdpStatus::optimal) << dp.name << " k=" << k;
      EXPECT_LE(sos.value, mom.value + 1e-6);
      if (prev) EXPECT_LE(*prev, sos.value + 1e-6);
      prev = sos.value;
    }
  }
}

TEST(Hierarchy, BallRowsOrderedWhateverTheJobs) {
  HierarchyOptions o;
  o.jobs = 2;
  const auto r = run_hierarchy(desk::ball(), Augmentation::fj, true, 2, 3, false, o);
  ASSERT_EQ(r.rows.size(), 2u);
  EXPECT_EQ(r.rows[0].k, 2);
  EXPECT_EQ(r.rows[1].k, 3);
  EXPECT_TRUE(r.all_optimal());
  EXPECT_TRUE(r.monotone);
  for (const auto& row : r.rows) EXPECT_NEAR(row.rho, -1.0, 1e-6);
  EXPECT_EQ(r.stagnation_order, 3);
  EXPECT_THROW(run_hierarchy(desk::ball(), Augmentation::fj, true, 1, 2, false), OrderTooSmall);
  EXPECT_THROW(run_hierarchy(desk::ball(), std::nullopt, false, 1, 2, true), std::invalid_argument);
}

TEST(Hierarchy, ErrorsAreRecordedPerOrder) {
  HierarchyOptions o;
  o.sdp.dimension_cap = 12;
  const auto r = run_hierarchy(desk::ball(), std::nullopt, false, 1, 3, false, o);
  ASSERT_EQ(r.rows.size(), 3u);
  EXPECT_FALSE(r.rows[0].error);
  EXPECT_TRUE(r.rows[2].error);
  EXPECT_FALSE(r.all_optimal());
}
