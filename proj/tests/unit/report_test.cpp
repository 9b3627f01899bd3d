#include <gtest/gtest.h>

#include <fstream>
#include <regex>
#include <sstream>

#include "fixtures.hpp"
#include "shiftgate/errors.hpp"
#include "shiftgate/report.hpp"

namespace shiftgate {
namespace {

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

PairTable sample_table() {
  PairTable t;
  t.metric = Metric::kDb;
  t.shifts = {-40, 0, 40};
  t.rows.push_back({3, 9, {0.1, 0.0, std::nullopt}});
  t.rows.push_back({9, 3, {0.123456789, 1.0 / 3.0, 2.5}});
  return t;
}

TEST(SweepCsvTest, FormatAndRoundTrip) {
  const auto rows = sweep(testing::uniform_block_image(), -255, 255, 85);
  std::stringstream a, b;
  write_sweep_csv(a, rows);
  write_sweep_csv(b, rows);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str().rfind("shift,space,hi,kl,db\n-255,rgb,0,", 0), 0u);
  EXPECT_NE(a.str().find(",inf\n"), std::string::npos);
  EXPECT_EQ(a.str().find('\r'), std::string::npos);
  EXPECT_EQ(read_sweep_csv(a), rows);
}

TEST(SweepCsvTest, RejectsWrongHeader) {
  std::istringstream in("shift,hi\n0,1\n");
  EXPECT_THROW(read_sweep_csv(in), Error);
}

TEST(PairTableCsvTest, RoundTripAndLayout) {
  const auto t = sample_table();
  std::stringstream csv;
  write_pair_table_csv(csv, t);
  EXPECT_EQ(csv.str(), "ID1,ID2,-40,0,40\n3,9,0.1,0,inf\n9,3,0.123456789,0.3333333333333333,2.5\n");
  EXPECT_EQ(read_pair_table_csv(csv, Metric::kDb, ColorSpace::kRgb), t);
}

TEST(PairTableCsvTest, FormattedTwoDecimals) {
  const auto text = format_pair_table(sample_table());
  EXPECT_NE(text.find("0.12"), std::string::npos);
  EXPECT_NE(text.find("0.33"), std::string::npos);
  EXPECT_EQ(text.find("0.123"), std::string::npos);
  EXPECT_NE(text.find("inf"), std::string::npos);
  EXPECT_EQ(count(text, "\n"), 3u);
}

TEST(ResidualsCsvTest, RoundTrip) {
  const std::vector<Residual> rows{{1, 0.5, 0.4, 0.5 - 0.4}, {2, -1.0, 0.0, -1.0}};
  std::stringstream csv;
  write_residuals_csv(csv, rows);
  EXPECT_EQ(csv.str().rfind("frame,truth,prediction,residual\n", 0), 0u);
  EXPECT_EQ(read_residuals_csv(csv), rows);
}

TEST(SvgTest, SweepHasThreeSeriesAndSafeLimits) {
  std::ostringstream out;
  write_sweep_svg(out, sweep(testing::uniform_block_image(), -120, 120, 10));
  const std::string svg = out.str();
  EXPECT_EQ(svg.rfind("<?xml", 0), 0u);
  EXPECT_EQ(count(svg, "class=\"series\""), 3u);
  EXPECT_EQ(count(svg, "class=\"safe-limit\""), 2u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
}

TEST(SvgTest, SafeLimitsAtConfiguredShift) {
  // With the x range spanning -100..100, +-50 lie at one and three quarters.
  std::vector<SweepResult> rows{{-100, 1, 0, 0.0}, {100, 1, 0, 0.0}};
  SvgOptions opt;
  opt.safe_shift = 50;
  opt.width = 800;
  std::ostringstream out;
  write_sweep_svg(out, rows, opt);
  const double plot_w = 800 - 60 - 140;
  std::regex line_re("class=\"safe-limit\" x1=\"([0-9.]+)\"");
  std::vector<double> xs;
  const std::string svg = out.str();
  for (std::sregex_iterator it(svg.begin(), svg.end(), line_re), end; it != end; ++it) {
    xs.push_back(std::stod((*it)[1]));
  }
  ASSERT_EQ(xs.size(), 2u);
  EXPECT_NEAR(xs[0], 60 + plot_w * 0.25, 0.01);
  EXPECT_NEAR(xs[1], 60 + plot_w * 0.75, 0.01);

  opt.safe_shift = 0;
  std::ostringstream none;
  write_sweep_svg(none, rows, opt);
  EXPECT_EQ(count(none.str(), "safe-limit"), 0u);
}

TEST(SvgTest, SingleRowPairTable) {
  auto t = sample_table();
  t.rows.resize(1);
  std::ostringstream out;
  write_pair_table_svg(out, t);
  EXPECT_EQ(count(out.str(), "class=\"series\""), 1u);
  EXPECT_NE(out.str().find("data-label=\"3/9\""), std::string::npos);
}

TEST(SvgTest, EscapesTitle) {
  SvgOptions opt;
  opt.title = "a<b & c";
  std::ostringstream out;
  write_residuals_svg(out, {{1, 0, 0, 0}}, opt);
  EXPECT_NE(out.str().find("a&lt;b &amp; c"), std::string::npos);
}

TEST(EmitReportTest, WritesFiles) {
  testing::TempDir dir;
  const auto rows = sweep(testing::uniform_block_image(), -40, 40, 40);
  emit_report(rows, ReportFormat::kCsv, dir / "s.csv");
  emit_report(rows, ReportFormat::kSvg, dir / "s.svg");
  std::ifstream in(dir / "s.csv");
  EXPECT_EQ(read_sweep_csv(in), rows);
  EXPECT_TRUE(std::filesystem::file_size(dir / "s.svg") > 0);

  ErrorEvaluation ev;
  ev.shift = 40;
  ev.residuals = {{1, 0.5, 0.25, 0.25}};
  ev.summary.mae = 0.25;
  emit_report(ev, ReportFormat::kSvg, dir / "r.svg");
  std::ifstream svg(dir / "r.svg");
  std::stringstream text;
  text << svg.rdbuf();
  EXPECT_NE(text.str().find("0.2500"), std::string::npos);
}

TEST(EmitReportTest, Errors) {
  testing::TempDir dir;
  const auto expect_code = [](auto&& fn, ErrorCode code) {
    try {
      fn();
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), code);
    }
  };
  expect_code([&] { emit_report(std::vector<SweepResult>{}, ReportFormat::kCsv, dir / "x.csv"); },
              ErrorCode::kEmptyResults);
  expect_code([&] { emit_report(PairTable{}, ReportFormat::kSvg, dir / "x.svg"); },
              ErrorCode::kEmptyResults);
  expect_code([&] { emit_report(ErrorEvaluation{}, ReportFormat::kCsv, dir / "x.csv"); },
              ErrorCode::kEmptyResults);
  const std::vector<SweepResult> rows{{0, 1, 0, 0.0}};
  expect_code([&] { emit_report(rows, ReportFormat::kCsv, dir / "no" / "such" / "x.csv"); },
              ErrorCode::kUnwritablePath);
  expect_code([&] { emit_report(sample_table(), ReportFormat::kCsv, dir.path()); },
              ErrorCode::kUnwritablePath);
}

}  // namespace
}  // namespace shiftgate
