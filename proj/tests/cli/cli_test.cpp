#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "airyproc/format.hpp"

namespace {

const std::string kCli = AIRYPROC_CLI_PATH;

int run(const std::string& args) {
  const int status = std::system((kCli + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string tmp(const std::string& name) {
  return ::testing::TempDir() + "airyproc_cli_" + name;
}

TEST(Cli, MissingRequiredFlagIsUsageError) {
  EXPECT_EQ(run("trajectory --beta 2"), 2);
  EXPECT_EQ(run("no-such-command"), 2);
  EXPECT_EQ(run("trajectory --n 100 --beta -1"), 2);
  EXPECT_EQ(run("trajectory --n 100 --beta inf"), 2);
  EXPECT_EQ(run("verify --only 12"), 2);
}

TEST(Cli, TrajectoryIsByteIdenticalForTheSameSeed) {
  const std::string a = tmp("a.csv");
  const std::string b = tmp("b.csv");
  const std::string args = "trajectory --n 6000 --beta 2 --num-eigs 5 --t-max 2 --dt 0.01 --seed 7";
  ASSERT_EQ(run(args + " --out " + a), 0);
  ASSERT_EQ(run(args + " --threads 3 --out " + b), 0);
  const auto text = slurp(a);
  EXPECT_EQ(text, slurp(b));
  EXPECT_NE(text.find("# seed=7\n"), std::string::npos);
  EXPECT_EQ(text.find("threads"), std::string::npos);

  std::istringstream in(text);
  std::string line;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#' && line[0] != 't') ++rows;
  }
  EXPECT_EQ(rows, 201u * 5u);  // 5 rows per frame
}

TEST(Cli, SeedEnvironmentVariableSetsTheDefault) {
  const std::string a = tmp("env.csv");
  const int status = std::system(
      ("AIRYPROC_SEED=99 " + kCli + " trajectory --n 300 --t-max 1 --dt 0.5 --out " + a).c_str());
  ASSERT_TRUE(WIFEXITED(status) && WEXITSTATUS(status) == 0);
  EXPECT_NE(slurp(a).find("# seed=99\n"), std::string::npos);
}

TEST(Cli, ConfigFilePrepopulatesAndFlagsWin) {
  const std::string cfg = tmp("run.cfg");
  std::ofstream(cfg) << "# sweep defaults\nn = 300\nbeta=4\nseed=5\n";
  const std::string a = tmp("cfg.csv");
  ASSERT_EQ(run("trajectory --config " + cfg + " --seed 6 --t-max 1 --dt 0.5 --out " + a), 0);
  const auto text = slurp(a);
  EXPECT_NE(text.find("# n=300\n"), std::string::npos);
  EXPECT_NE(text.find("# beta=4\n"), std::string::npos);
  EXPECT_NE(text.find("# seed=6\n"), std::string::npos);

  std::ofstream(cfg) << "bogus=1\n";
  EXPECT_EQ(run("trajectory --config " + cfg + " --n 300"), 2);
}

TEST(Cli, DeterministicSaoSlopesAreOne) {
  const std::string a = tmp("sao.csv");
  ASSERT_EQ(run("sao --beta inf --L 12 --t-max 1 --dt 0.25 --out " + a), 0);
  std::istringstream in(slurp(a));
  std::string line;
  std::size_t rows = 0;
  double last_t = -1.0;
  std::size_t last_j = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("t,", 0) == 0) {
      EXPECT_EQ(line, "t,j,lambda,slope,slope_sq,fd_quotient,rel_err");
      continue;
    }
    std::vector<std::string> cols;
    std::stringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cols.push_back(c);
    ASSERT_EQ(cols.size(), 7u);
    const double t = airyproc::parse_double(cols[0]);
    const auto j = static_cast<std::size_t>(std::stoul(cols[1]));
    // Rows ordered by (t, j).
    EXPECT_TRUE(t > last_t || (t == last_t && j == last_j + 1));
    last_t = t;
    last_j = j;
    EXPECT_NEAR(airyproc::parse_double(cols[4]), 1.0, 1e-3);
    EXPECT_FALSE(cols[6].empty());
    ++rows;
  }
  EXPECT_EQ(rows, 5u * 3u);
}

TEST(Cli, SaoPathRoundTripReplaysExactly) {
  const std::string path = tmp("path.csv");
  const std::string a = tmp("sao_a.csv");
  const std::string b = tmp("sao_b.csv");
  ASSERT_EQ(run("sao --beta 2 --h 1e-3 --t-max 0.5 --seed 3 --path-out " + path + " --out " + a), 0);
  ASSERT_EQ(run("sao --beta 2 --h 1e-3 --t-max 0.5 --seed 3 --path-in " + path + " --out " + b), 0);
  auto strip = [](std::string s) {
    const auto p = s.find("# path=");
    return s.erase(p, s.find('\n', p) - p + 1);
  };
  EXPECT_EQ(strip(slurp(a)), strip(slurp(b)));
}

TEST(Cli, DerivativeDistReportsGammaMoments) {
  const std::string a = tmp("deriv.json");
  const int code = run("derivative-dist --n 200 --beta 1 --reps 2000 --num-eigs 1 --seed 4 --out " + a);
  EXPECT_TRUE(code == 0 || code == 1);
  const auto text = slurp(a);
  EXPECT_NE(text.find("\"n_q_1\""), std::string::npos);
  EXPECT_NE(text.find("ks_gamma_i=1"), std::string::npos);
}

}  // namespace
