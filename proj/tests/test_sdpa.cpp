#include "desk.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

using namespace fjpop;

namespace {

std::string read_golden(const std::string& name) {
  std::ifstream in(std::string(FJPOP_GOLDEN_DIR) + "/" + name, std::ios::binary);
  if (!in) throw std::runtime_error("missing golden file " + name);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

SdpProblem interval_k1() {
  const std::vector<std::string> x{"x"};
  const PopProblem pop(parse_polynomial("x", x), {parse_polynomial("1 - x^2", x)}, {}, std::nullopt, x);
  return build_moment_sdp(pop, 1);
}

}  // namespace

TEST(Sdpa, GoldenFiles) {
  EXPECT_EQ(export_sdpa(desk::two_by_two()), read_golden("two_by_two.dat-s"));
  EXPECT_EQ(export_sdpa(desk::lp2({1, 1}, {{1, 1, 1}})), read_golden("diagonal_lp.dat-s"));
  EXPECT_EQ(export_sdpa(interval_k1()), read_golden("interval_k1.dat-s"));
}

TEST(Sdpa, ExportParseExportIsIdempotent) {
  std::vector<std::string> texts{export_sdpa(desk::two_by_two()), export_sdpa(desk::lp2({1, 2}, {{1, 1, 1}, {3, 1, 2}})),
                                 export_sdpa(interval_k1())};
  for (const auto& dp : desk::problems()) texts.push_back(export_sdpa(build_moment_sdp(dp.pop, dp.k)));
  for (const auto& t : texts) EXPECT_EQ(write_sdpa(parse_sdpa(t)), t);
}

TEST(Sdpa, EmptyObjectiveLine) {
  SdpInstance inst = desk::two_by_two();
  inst.b.setZero();
  const std::string text = export_sdpa(inst);
  std::istringstream in(text);
  std::string line;
  for (int i = 0; i < 4; ++i) std::getline(in, line);
  EXPECT_EQ(line, "0");

  SdpaData d;
  d.mdim = 3;
  d.block_struct = {1};
  d.c = {0.0, -0.0, 0.0};
  std::istringstream in2(write_sdpa(d));
  for (int i = 0; i < 4; ++i) std::getline(in2, line);
  EXPECT_EQ(line, "0 0 0");
}

TEST(Sdpa, SolvesWhatItExports) {
  const auto a = solve_sdpa(parse_sdpa(export_sdpa(desk::two_by_two())));
  ASSERT_EQ(a.status, SdpStatus::optimal);
  EXPECT_NEAR(a.value, -1.0, 1e-8);

  // Moment export: the SDPA optimum plus the recorded offset is tau.
  for (const auto& dp : desk::problems()) {
    const SdpProblem sdp = build_moment_sdp(dp.pop, dp.k);
    const SdpaData d = parse_sdpa(export_sdpa(sdp));
    const auto direct = solve_sdp(sdp);
    const auto exported = solve_sdpa(d);
    ASSERT_EQ(exported.status, SdpStatus::optimal) << dp.name;
    EXPECT_NEAR(exported.value + sdpa_offset(d), direct.value, 1e-5) << dp.name;
  }
}

TEST(Sdpa, ParserErrors) {
  auto line_of = [](const std::string& text) {
    try {
      (void)parse_sdpa(text);
    } catch (const ParseError& e) {
      return static_cast<int>(e.line());
    }
    return -1;
  };
  EXPECT_EQ(line_of("1\n1\n2\n1\n1 1 1 3 1\n"), 5);
  EXPECT_EQ(line_of("1\n1\n-2\n1\n1 1 1 2 1\n"), 5);
  EXPECT_EQ(line_of("* c\n1\n1\n2\nx\n"), 5);
  EXPECT_EQ(line_of("1\n1\n2\n1\n2 1 1 1 1\n"), 5);
  EXPECT_EQ(line_of("1\n1\n2\n1\n1 1 1\n"), 5);
  EXPECT_NE(line_of("1\n"), -1);
  EXPECT_EQ(line_of("\"quoted\n1\n1\n{2}\n(1)\n1,1,1,2,1\n"), -1);
}

TEST(Sdpa, FreeVariablesAreNotExportedAsInstance) {
  const SdpInstance inst = moment_instance(interval_k1());
  EXPECT_THROW(export_sdpa(inst), std::invalid_argument);
}

TEST(Sdpa, NumberFormatting) {
  EXPECT_EQ(format_number(0.0), "0");
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(-2.0), "-2");
  EXPECT_EQ(std::stod(format_number(1.0 / 3.0)), 1.0 / 3.0);
}
