#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "erasurelab/report.hpp"

namespace fs = std::filesystem;
using erasurelab::report::Json;

namespace {

const fs::path& work_dir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("erasurelab-cli-test-" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run(const std::string& args, const std::string& out = "out") {
  const std::string cmd = std::string(ERASURELAB_CLI) + " --out " + (work_dir() / out).string() + " " + args +
                          " > " + (work_dir() / "stdout.txt").string() + " 2> " +
                          (work_dir() / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json load(const std::string& out, const std::string& name) {
  return Json::parse(slurp(work_dir() / out / (name + ".json")));
}

class CleanupEnvironment : public ::testing::Environment {
 public:
  void TearDown() override {
    std::error_code ec;
    fs::remove_all(work_dir(), ec);
  }
};

const auto* const cleanup = ::testing::AddGlobalTestEnvironment(new CleanupEnvironment);

}  // namespace

TEST(Cli, BoundsSripExitCodes) {
  EXPECT_EQ(run("bounds srip --beta 0.01 --alpha 0.02 --s 2 --m 64 --n 4096 --eps 0.25"), 0);
  const auto doc = load("out", "bounds-srip");
  EXPECT_EQ(doc["schema_version"], 1);
  EXPECT_GT(doc["result"]["certificate"]["theta_eps"].get<double>(), 0.0);
  EXPECT_TRUE(fs::exists(work_dir() / "out" / "config.json"));

  EXPECT_EQ(run("bounds srip --beta 0.05 --alpha 0.02 --s 2 --m 64 --n 4096 --eps 0.25"), 2);
  EXPECT_NE(slurp(work_dir() / "stderr.txt").find("0.0376"), std::string::npos);
  EXPECT_EQ(run("bounds srip --beta 0.01 --alpha 0.02 --s 2 --m 64 --n 4096"), 1);
}

TEST(Cli, BoundsNerf) {
  EXPECT_EQ(run("bounds nerf --nu 0.1 --lambda 0.5 --beta 0.05"), 0);
  const auto doc = load("out", "bounds-nerf");
  EXPECT_GT(doc["result"]["certificate"]["C"].get<double>(), 0.0);
  EXPECT_EQ(run("bounds nerf --nu 0.1 --lambda 0.5 --beta 0.5"), 2);

  EXPECT_EQ(run("--format csv bounds nerf --sweep --ratio 0.1", "sweep"), 0);
  std::ifstream csv(work_dir() / "sweep" / "bounds-nerf-sweep.csv");
  const auto t = erasurelab::report::read_csv(csv);
  EXPECT_EQ(t.rows.size(), 5u);
  EXPECT_TRUE(fs::exists(work_dir() / "sweep" / "bounds-nerf-sweep.svg"));
}

TEST(Cli, SimulateUsageAndShapeErrors) {
  EXPECT_EQ(run("simulate nerf --rows 40 --cols 10 --trials 0"), 1);
  EXPECT_EQ(run("simulate nerf --rows 40 --cols 10 --beta 0.9 --trials 2"), 2);
  EXPECT_EQ(run("simulate nerf --rows 40 --cols 10 --beta 0.25 --trials 5 --trials-csv"), 0);
  std::ifstream csv(work_dir() / "out" / "simulate-nerf-trials.csv");
  EXPECT_EQ(erasurelab::report::read_csv(csv).rows.size(), 5u);
}

TEST(Cli, VerifyExitCodes) {
  EXPECT_EQ(run("verify --only khb --trials 200"), 0);
  EXPECT_EQ(load("out", "verify")["result"]["checks"].size(), 1u);
  EXPECT_EQ(run("verify --only order_stats --trials 200 --force-bound 0"), 3);
  EXPECT_EQ(run("verify --only nonsense"), 2);
}

TEST(Cli, CompareTablesEmptySelection) {
  EXPECT_EQ(run("--format csv compare-tables --tables \"\"", "cmp"), 0);
  std::ifstream csv(work_dir() / "cmp" / "compare-tables.csv");
  const auto t = erasurelab::report::read_csv(csv);
  EXPECT_EQ(t.header.size(), 8u);
  EXPECT_TRUE(t.rows.empty());
}

TEST(Cli, ConfigFileAndFlagPrecedence) {
  const auto cfg = work_dir() / "cfg.json";
  std::ofstream(cfg) << R"({"rows": 30, "cols": 10, "beta": 0.1, "trials": 3})";
  EXPECT_EQ(run("simulate nerf --config " + cfg.string() + " --trials 4", "cfg"), 0);
  const auto doc = load("cfg", "simulate-nerf");
  EXPECT_EQ(doc["config"]["rows"], 30);
  EXPECT_EQ(doc["config"]["trials"], 4);
  const auto echoed = Json::parse(slurp(work_dir() / "cfg" / "config.json"));
  EXPECT_EQ(echoed["trials"], 4);
}

TEST(Cli, JsonIdenticalAcrossThreadCounts) {
  const std::string args = "simulate nerf --rows 60 --cols 20 --beta 0.2 --trials 12 --seed 5";
  ASSERT_EQ(run("--threads 1 " + args, "t1"), 0);
  ASSERT_EQ(run("--threads 4 " + args, "t4"), 0);
  EXPECT_EQ(erasurelab::report::strip_run_info(load("t1", "simulate-nerf")).dump(),
            erasurelab::report::strip_run_info(load("t4", "simulate-nerf")).dump());
}
