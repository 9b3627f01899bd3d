#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "fixtures.hpp"
#include "shiftgate/histogram.hpp"
#include "shiftgate/image_io.hpp"
#include "shiftgate/safety_gate.hpp"

#ifndef SHIFTGATE_CLI_PATH
#error "SHIFTGATE_CLI_PATH must name the CLI binary"
#endif

namespace shiftgate {
namespace {

struct RunResult {
  int status = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string("\"") + SHIFTGATE_CLI_PATH + "\" " + args + " 2>/dev/null";
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string q(const std::filesystem::path& p) { return "\"" + p.string() + "\""; }

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    base_ = testing::uniform_block_image(160, 120);
    save_image(base_, dir_ / "ref.png");
    save_image(shift_image(base_, ShiftAmount(80)), dir_ / "far.png");
    std::filesystem::create_directories(dir_ / "ds");
    for (int i = 0; i < 4; ++i) {
      testing::write_frame(dir_ / "ds", 10 + i, shift_image(base_, ShiftAmount(5 * i)), 0.1 * i);
    }
  }

  testing::TempDir dir_;
  Image base_;
};

TEST_F(CliTest, HelpAndUsageErrors) {
  EXPECT_EQ(run("--help").status, 0);
  EXPECT_EQ(run("").status, 1);
  EXPECT_EQ(run("bogus").status, 1);
  EXPECT_EQ(run("shift --in " + q(dir_ / "ref.png") + " --shift 300 --out " + q(dir_ / "x.png")).status, 1);
  EXPECT_EQ(run("dist --ref " + q(dir_ / "missing.png") + " --query " + q(dir_ / "ref.png")).status, 1);
}

TEST_F(CliTest, ShiftAcceptsNegativeValues) {
  ASSERT_EQ(run("shift --in " + q(dir_ / "ref.png") + " --shift -40 --out " + q(dir_ / "neg.png")).status, 0);
  EXPECT_EQ(load_image(dir_ / "neg.png"), shift_image(base_, ShiftAmount(-40)));
}

TEST_F(CliTest, DistCsvAndJson) {
  const auto csv = run("dist --ref " + q(dir_ / "ref.png") + " --query " + q(dir_ / "ref.png"));
  ASSERT_EQ(csv.status, 0);
  EXPECT_EQ(csv.out, "space,hi,kl,db,epsilon\nrgb,1,0,0,1\n");
  const auto json = run("dist --format json --ref " + q(dir_ / "ref.png") + " --query " + q(dir_ / "far.png"));
  ASSERT_EQ(json.status, 0);
  EXPECT_NE(json.out.find("\"hi\":0.375"), std::string::npos) << json.out;
}

TEST_F(CliTest, HistWritesCsv) {
  const auto r = run("hist --in " + q(dir_ / "ref.png"));
  ASSERT_EQ(r.status, 0);
  std::istringstream in(r.out);
  EXPECT_EQ(read_histogram_csv(in), build_histogram(base_));
  EXPECT_EQ(run("hist --channel 1 --in " + q(dir_ / "ref.png")).status, 0);
}

TEST_F(CliTest, PreprocessDefaults) {
  Image big = Image::filled(320, 120, 9, 9, 9);
  save_image(big, dir_ / "big.png");
  ASSERT_EQ(run("preprocess --in " + q(dir_ / "big.png") + " --out " + q(dir_ / "small.png")).status, 0);
  const Image small = load_image(dir_ / "small.png");
  EXPECT_EQ(small.width(), 200);
  EXPECT_EQ(small.height(), 66);
}

TEST_F(CliTest, PairsDeterministicPerSeed) {
  const std::string args = "pairs --dataset " + q(dir_ / "ds") + " --n 6 --metric kl";
  const auto a = run("--seed 7 --out " + q(dir_ / "a.csv") + " " + args);
  const auto b = run("--seed 7 --out " + q(dir_ / "b.csv") + " " + args);
  ASSERT_EQ(a.status, 0);
  ASSERT_EQ(b.status, 0);
  EXPECT_EQ(slurp(dir_ / "a.csv"), slurp(dir_ / "b.csv"));
  EXPECT_EQ(slurp(dir_ / "a.csv").rfind("ID1,ID2,-120,-80,-40,0,40,80,120\n", 0), 0u);
  const auto c = run("--seed 8 " + args);
  EXPECT_EQ(c.status, 0);
  EXPECT_NE(c.out, slurp(dir_ / "a.csv"));
}

TEST_F(CliTest, CalibrateThenGate) {
  ASSERT_EQ(run("calibrate --sr 40 --refs " + q(dir_ / "ref.png") + " --out " + q(dir_ / "t.json")).status, 0);
  const auto t = load_thresholds(dir_ / "t.json");
  EXPECT_EQ(t.hi_min, 0.6875);

  const std::string gate = "gate --thresholds " + q(dir_ / "t.json") + " --ref " + q(dir_ / "ref.png");
  EXPECT_EQ(run(gate + " --query " + q(dir_ / "ref.png")).status, 0);
  const auto unsafe = run(gate + " --query " + q(dir_ / "ref.png") + " " + q(dir_ / "far.png"));
  EXPECT_EQ(unsafe.status, 2);
  std::istringstream rows(unsafe.out);
  const auto decisions = read_decisions_csv(rows);
  ASSERT_EQ(decisions.size(), 2u);
  EXPECT_TRUE(decisions[0].safe);
  EXPECT_FALSE(decisions[1].safe);

  EXPECT_EQ(run(gate + " --shift -39 --query " + q(dir_ / "ref.png")).status, 0);
  EXPECT_EQ(run(gate + " --shift 40 --query " + q(dir_ / "ref.png")).status, 2);
  EXPECT_EQ(run("gate --hi-min 0.1 --kl-max 5 --db-max 5 --ref " + q(dir_ / "ref.png") + " --query " +
                q(dir_ / "far.png")).status,
            0);
  EXPECT_EQ(run("gate --hi-min 0.1 --ref " + q(dir_ / "ref.png")).status, 1);
  EXPECT_EQ(run("gate --policy all --thresholds " + q(dir_ / "t.json") + " --dataset " + q(dir_ / "ds")).status, 0);
}

TEST_F(CliTest, ErrorsSummaryAndCoverageGap) {
  testing::write_text(dir_ / "pred.csv", "index,value\n10,0.1\n11,0.2\n12,0.3\n13,0.4\n");
  const auto r = run("errors --dataset " + q(dir_ / "ds") + " --predictions " + q(dir_ / "pred.csv") +
                     " --out " + q(dir_ / "res.csv") + " --svg " + q(dir_ / "res.svg"));
  ASSERT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("\"count\": 4"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("\"mape\": null"), std::string::npos) << r.out;
  EXPECT_EQ(slurp(dir_ / "res.csv").rfind("frame,truth,prediction,residual\n10,0,0.1,", 0), 0u);
  EXPECT_TRUE(std::filesystem::exists(dir_ / "res.svg"));

  testing::write_text(dir_ / "short.csv", "index,value\n10,0.1\n");
  EXPECT_EQ(run("errors --dataset " + q(dir_ / "ds") + " --predictions " + q(dir_ / "short.csv")).status, 1);
}

TEST_F(CliTest, SweepWithSvg) {
  const auto r = run("sweep --from -40 --to 40 --step 40 --in " + q(dir_ / "ref.png") + " --svg " +
                     q(dir_ / "s.svg"));
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "shift,space,hi,kl,db");
  EXPECT_NE(slurp(dir_ / "s.svg").find("safe-limit"), std::string::npos);
  EXPECT_EQ(run("--space yuv sweep --from 0 --to 0 --in " + q(dir_ / "ref.png")).out,
            "shift,space,hi,kl,db\n0,yuv,1,0,0\n");
}

}  // namespace
}  // namespace shiftgate
