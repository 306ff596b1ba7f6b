#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "synthetic.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string output;  // stdout and stderr interleaved
};

Run slseg(const std::string& args) {
  const std::string cmd = std::string(SLSEG_PATH) + " " + args + " 2>&1";
  Run run;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    return run;
  }
  std::array<char, 4096> buf{};
  while (const std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) {
    run.output.append(buf.data(), n);
  }
  const int status = pclose(pipe);
  run.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return run;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    out.push_back(line);
  }
  return out;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("sl_cli_" + std::to_string(std::random_device{}()));
    fs::create_directories(dir_);
    std::ofstream manifest(dir_ / "m.tsv");
    for (int i = 0; i < 2; ++i) {
      manifest << sl::testing::write_case(sl::testing::make_two_region_case(60 + i), dir_.string(),
                                          "c" + std::to_string(i))
               << "\n";
    }
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string case_args() const {
    return path("c0.png") + " " + path("c0_scribbles.png");
  }

  fs::path dir_;
  const std::string fast_ = " --eigvecs 30 --pivots-fg 6 --pivots-bg 6";
};

}  // namespace

TEST_F(CliTest, SegmentWritesMask) {
  const auto run = slseg("segment " + case_args() + " " + path("out.png") + " --gt " + path("c0_gt.png") +
                         " --overlay " + path("ov.png") + fast_);
  ASSERT_EQ(run.code, 0) << run.output;
  EXPECT_TRUE(fs::exists(path("out.png")));
  EXPECT_TRUE(fs::exists(path("ov.png")));
  EXPECT_NE(run.output.find("jaccard"), std::string::npos);
}

TEST_F(CliTest, MissingScribblesNamesThePath) {
  const auto missing = path("nope_scribbles.png");
  const auto run = slseg("segment " + path("c0.png") + " " + missing + " " + path("out.png"));
  EXPECT_EQ(run.code, 2);
  EXPECT_NE(run.output.find(missing), std::string::npos) << run.output;
}

TEST_F(CliTest, ConcatFeatureDumpWidth) {
  const auto run = slseg("segment " + case_args() + " " + path("out.png") +
                         " --mode concat --pivots-fg 3 --pivots-bg 3 --eigvecs 20 --dump-features " +
                         path("f.csv"));
  ASSERT_EQ(run.code, 0) << run.output;
  std::ifstream in(path("f.csv"));
  std::string comment, header;
  std::getline(in, comment);
  std::getline(in, header);
  EXPECT_NE(comment.find("mode=concat"), std::string::npos);
  EXPECT_EQ(std::count(header.begin(), header.end(), ',') + 1, 4 * (3 + 3));
}

TEST_F(CliTest, EvalCsv) {
  const auto run = slseg("eval " + path("m.tsv") + " --out " + path("r.csv") + fast_);
  ASSERT_EQ(run.code, 0) << run.output;
  const auto rows = lines_of(slurp(path("r.csv")));
  // Two comment lines, header, two samples, mean, std.
  ASSERT_EQ(rows.size(), 7u) << slurp(path("r.csv"));
  EXPECT_EQ(rows[2], "id,jaccard,fscore");
  EXPECT_EQ(rows[3].rfind("c0,", 0), 0u);
}

TEST_F(CliTest, EvalRobotMode) {
  const auto run =
      slseg("eval " + path("m.tsv") + " --mode robot --strokes 2 --out " + path("r.csv") + fast_);
  ASSERT_EQ(run.code, 0) << run.output;
  EXPECT_NE(slurp(path("r.csv")).find("id,jaccard,fscore,avg_strokes"), std::string::npos);
}

TEST_F(CliTest, RobotTrace) {
  const auto run = slseg("robot " + case_args() + " " + path("c0_gt.png") + " --strokes 2 --trace " +
                         path("t.csv") + fast_);
  ASSERT_EQ(run.code, 0) << run.output;
  EXPECT_NE(run.output.find("avg_strokes"), std::string::npos);
  EXPECT_NE(slurp(path("t.csv")).find("step,center_x,center_y,label,jaccard"), std::string::npos);
}

TEST_F(CliTest, ToyAndBench) {
  const auto toy = slseg("toy -n 400 --scatter " + path("s.csv"));
  ASSERT_EQ(toy.code, 0) << toy.output;
  EXPECT_NE(toy.output.find("agreement"), std::string::npos);
  EXPECT_EQ(lines_of(slurp(path("s.csv"))).size(), 402u);

  const auto bench = slseg("bench --sizes 200,400");
  ASSERT_EQ(bench.code, 0) << bench.output;
  const auto rows = lines_of(bench.output);
  ASSERT_EQ(rows.size(), 4u) << bench.output;
  EXPECT_EQ(rows[1], "n,t_exact,t_efn,t_efn_opt");
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(slseg("segment --no-such-flag").code, 1);
  EXPECT_EQ(slseg("").code, 1);
  EXPECT_EQ(slseg("segment " + case_args() + " " + path("o.png") + " --ablate bogus=1").code, 2);
}

TEST_F(CliTest, SeededRunsAreByteIdentical) {
  ASSERT_EQ(slseg("segment " + case_args() + " " + path("a.png") + fast_ + " --seed 4").code, 0);
  ASSERT_EQ(slseg("segment " + case_args() + " " + path("b.png") + fast_ + " --seed 4").code, 0);
  EXPECT_EQ(slurp(path("a.png")), slurp(path("b.png")));
  ASSERT_EQ(slseg("toy -n 300 --seed 9 --scatter " + path("t1.csv")).code, 0);
  ASSERT_EQ(slseg("toy -n 300 --seed 9 --scatter " + path("t2.csv")).code, 0);
  EXPECT_EQ(slurp(path("t1.csv")), slurp(path("t2.csv")));
}
