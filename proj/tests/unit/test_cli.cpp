#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include "commands.hpp"
#include "svg.hpp"

using namespace simplexdyn;
using namespace simplexdyn::cli;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("simplexdyn_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text) const {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  int run(const std::string& cmd, const json& cfg, const std::string& out = "out") {
    const fs::path c = write("config.json", cfg.dump());
    std::ostringstream log, err;
    const int rc = run_command(cmd, c, dir_ / out, log, err);
    last_log_ = log.str();
    last_err_ = err.str();
    return rc;
  }

  std::string read(const std::string& rel) const {
    std::ifstream in(dir_ / rel, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  json read_json(const std::string& rel) const { return json::parse(read(rel)); }

  fs::path dir_;
  std::string last_log_, last_err_;
};

const json kTelema = {{"n", 3}, {"A", {{1, 2, 3}, {4, 5, 6}, {7, 8, 9}}}};
const json kTelemaMinus10 = {{"n", 3}, {"A", {{-9, 2, 3}, {4, -5, 6}, {7, 8, -1}}}};

}  // namespace

TEST_F(CliTest, MatrixAnalyzeTelema) {
  ASSERT_EQ(run("matrix-analyze", {{"seed", 1}, {"matrix", kTelema}, {"probe_samples", 1000}}), kOk);
  const json r = read_json("out/matrix_report.json");
  EXPECT_NEAR(r["decomposition"]["lambda"].get<double>(), 0.0, 1e-15);
  EXPECT_EQ(r["decomposition"]["u"], json({0.0, 3.0, 6.0}));
  EXPECT_EQ(r["equilibria"]["ess"]["point"], json({0.0, 0.0, 1.0}));
  EXPECT_EQ(r["equilibria"]["ess"]["flag"], "certified");
  EXPECT_TRUE(r.contains("config_hash"));
  EXPECT_EQ(r["seed"], 1);
}

TEST_F(CliTest, MatrixAnalyzeInteriorNeAndMatrixFile) {
  write("m.json", kTelemaMinus10.dump());
  ASSERT_EQ(run("matrix-analyze", {{"seed", 2}, {"matrix_file", "m.json"}, {"probe_samples", 1000}}), kOk);
  const json r = read_json("out/matrix_report.json");
  const auto p = r["equilibria"]["interior_ne"].get<std::vector<double>>();
  ASSERT_EQ(p.size(), 3u);
  EXPECT_NEAR(p[0], 1.0 / 30, 1e-12);
  EXPECT_NEAR(p[1], 1.0 / 3, 1e-12);
  EXPECT_NEAR(p[2], 19.0 / 30, 1e-12);
}

TEST_F(CliTest, MalformedInputsExitTwo) {
  const fs::path bad = write("bad.json", "{ not json");
  std::ostringstream log, err;
  EXPECT_EQ(run_command("matrix-analyze", bad, dir_ / "out", log, err), kParse);
  EXPECT_EQ(run("matrix-analyze", {{"seed", 1}, {"matrix", {{"n", 2}, {"A", {{1, "x"}, {0, 1}}}}}}), kParse);
  EXPECT_EQ(run("matrix-analyze", {{"matrix", kTelema}}), kParse);  // seed missing
  EXPECT_EQ(run("verify", {{"seed", 1}, {"suite", "nonsense"}}), kParse);
  std::ostringstream log2, err2;
  EXPECT_EQ(run_command("matrix-analyze", dir_ / "missing.json", dir_ / "out", log2, err2), kParse);
}

TEST_F(CliTest, DimensionErrorsExitThree) {
  EXPECT_EQ(run("matrix-analyze", {{"seed", 1}, {"matrix", {{"n", 3}, {"A", {{1, 2}, {3, 4}}}}}}), kDimension);
  EXPECT_EQ(run("simulate", {{"seed", 1}, {"model", "ode"}, {"matrix", kTelema}, {"p0", {0.5, 0.5}}}),
            kDimension);
}

TEST_F(CliTest, SimulateOdeReachesEss) {
  ASSERT_EQ(run("simulate", {{"seed", 1},
                             {"model", "ode"},
                             {"matrix", kTelemaMinus10},
                             {"t_end", 50.0},
                             {"dt", 0.01},
                             {"record_every", 100}}),
            kOk);
  std::ifstream in(dir_ / "out/trajectory.csv");
  const Trajectory tr = read_trajectory_csv(in);
  EXPECT_LT((tr.states.back().entries() - Vector{{1.0 / 30, 1.0 / 3, 19.0 / 30}}).cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_TRUE(fs::exists(dir_ / "out/run.json"));
}

TEST_F(CliTest, SimulateIsByteIdenticalOnRerun) {
  const json cfg = {{"seed", 42}, {"model", "sde"}, {"drift", "replicator"}, {"matrix", kTelema},
                    {"t_end", 0.5}, {"dt", 0.01}, {"paths", 200}};
  ASSERT_EQ(run("simulate", cfg, "a"), kOk);
  ASSERT_EQ(run("simulate", cfg, "b"), kOk);
  EXPECT_EQ(read("a/ensemble.csv"), read("b/ensemble.csv"));
  EXPECT_FALSE(read("a/ensemble.csv").empty());
  const json single = {{"seed", 42}, {"model", "bm"}, {"p0", {0.2, 0.3, 0.5}}, {"t_end", 1.0}, {"dt", 0.01}};
  ASSERT_EQ(run("simulate", single, "c"), kOk);
  ASSERT_EQ(run("simulate", single, "d"), kOk);
  EXPECT_EQ(read("c/trajectory.csv"), read("d/trajectory.csv"));
  std::istringstream is(read("c/trajectory.csv"));
  const Trajectory tr = read_trajectory_csv(is);
  EXPECT_EQ(tr.size(), 101u);
  EXPECT_EQ(read("c/trajectory.csv").substr(0, 25), "t,p_1,p_2,p_3,ilr_1,ilr_2");
}

TEST_F(CliTest, SimulateErrorExitsFour) {
  EXPECT_EQ(run("simulate", {{"seed", 1}, {"model", "wong_zakai"}, {"lambda_corr", 0.1}, {"dt", 0.01},
                             {"p0", {0.2, 0.3, 0.5}}}),
            kSimulation);
}

TEST_F(CliTest, VerifyGeometryPasses) {
  ASSERT_EQ(run("verify", {{"seed", 3}, {"suite", "geometry"}}), kOk);
  const json r = read_json("out/suite_report.json");
  EXPECT_TRUE(r["pass"].get<bool>());
  EXPECT_NE(last_log_.find("PASS geometry/dist_dominates_euclidean"), std::string::npos);
}

TEST_F(CliTest, VerifyContractionRecordsRockPaperScissorsWitness) {
  const json rps = {{"n", 3}, {"A", {{0, -1, 1}, {1, 0, -1}, {-1, 1, 0}}}};
  run("verify", {{"seed", 4}, {"suite", "contraction"}, {"pairs", 5}, {"negative_control", rps}});
  const json r = read_json("out/suite_report.json");
  bool found = false;
  for (const auto& g : r["gates"]) {
    if (g["name"] == "negative_control_witness") {
      found = true;
      EXPECT_TRUE(g["pass"].get<bool>());
    }
    if (g["name"] == "nonexpansion_a" || g["name"] == "integral_estimate_c") EXPECT_TRUE(g["pass"].get<bool>());
  }
  EXPECT_TRUE(found);
}

TEST_F(CliTest, VerifyDirichletStationaryGates) {
  run("verify", {{"seed", 5}, {"suite", "dirichlet"}, {"paths", 5000}});
  const json r = read_json("out/suite_report.json");
  for (const auto& g : r["gates"]) {
    if (g["name"] == "dircond_residual_grid" || g["name"] == "moments_from_dirichlet_start")
      EXPECT_TRUE(g["pass"].get<bool>()) << g.dump();
  }
}

TEST_F(CliTest, TernaryTrajectoryIsDeterministic) {
  ASSERT_EQ(run("simulate", {{"seed", 6}, {"model", "ode"}, {"matrix", kTelema}, {"t_end", 5.0}, {"dt", 0.01}},
                "sim"),
            kOk);
  const json cfg = {{"input", (dir_ / "sim/trajectory.csv").string()}};
  ASSERT_EQ(run("ternary", cfg, "t1"), kOk);
  ASSERT_EQ(run("ternary", cfg, "t2"), kOk);
  const std::string svg = read("t1/ternary.svg");
  EXPECT_EQ(svg, read("t2/ternary.svg"));
  EXPECT_NE(svg.find("<polyline"), std::string::npos);
  EXPECT_NE(svg.find("viewBox=\"0 0 800 693\""), std::string::npos);
}

TEST_F(CliTest, TernaryPortraitAndDimension) {
  ASSERT_EQ(run("ternary", {{"portrait", {{"matrix", kTelemaMinus10}, {"grid", 8}}}}), kOk);
  EXPECT_NE(read("out/ternary.svg").find("<line"), std::string::npos);
  const json four = {{"n", 4}, {"A", json::array({{0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}})}};
  EXPECT_EQ(run("ternary", {{"portrait", {{"matrix", four}}}}), kDimension);
}

TEST(Svg, CornerAndCentroidMapping) {
  const double h = 800.0 * std::sqrt(3.0) / 2;
  auto px = [](double a, double b, double c) { return ternary_pixel(Vector{{a, b, c}}); };
  EXPECT_NEAR(px(1, 0, 0).first, 0.0, 1e-9);
  EXPECT_NEAR(px(1, 0, 0).second, h, 1e-9);
  EXPECT_NEAR(px(0, 1, 0).first, 800.0, 1e-9);
  EXPECT_NEAR(px(0, 1, 0).second, h, 1e-9);
  EXPECT_NEAR(px(0, 0, 1).first, 400.0, 1e-9);
  EXPECT_NEAR(px(0, 0, 1).second, 0.0, 1e-9);
  const auto c = px(1.0 / 3, 1.0 / 3, 1.0 / 3);
  EXPECT_NEAR(c.first, 400.0, 1e-9);
  EXPECT_NEAR(c.second, h * 2 / 3, 1e-9);
}

TEST(Binary, ExitCodes) {
  const std::string exe = SIMPLEXDYN_CLI_PATH;
  auto status = [](const std::string& cmd) {
    const int raw = std::system((cmd + " >/dev/null 2>&1").c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  EXPECT_EQ(status(exe + " --version"), 0);
  EXPECT_EQ(status(exe + " simulate"), 2);
  EXPECT_EQ(status(exe + " frobnicate --config x.json"), 2);
  EXPECT_EQ(status(exe + " simulate --config /nonexistent/config.json"), 2);
}
