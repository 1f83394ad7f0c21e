#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

namespace fs = std::filesystem;
using namespace pathqv::cli;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "pathqv");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("pathqv_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) const {
    const auto p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
  }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, OscillatorQvAtNaturalLevel) {
  const auto r = invoke({"qv", "--model", "oscillator", "--n", "5"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out, "0.984375\n");
  const auto out = (dir_ / "osc").string();
  ASSERT_EQ(invoke({"qv", "--model", "oscillator", "--n", "3", "--out", out}).code, kExitOk);
  EXPECT_TRUE(fs::exists(fs::path(out) / "qv_trace.csv"));
  EXPECT_TRUE(fs::exists(fs::path(out) / "plot_trace.csv"));
}

TEST_F(CliTest, SimulateIsReproducibleAndNeedsSeed) {
  const auto a = invoke({"simulate", "--model", "jump_diffusion", "--seed", "3", "--grid-level", "6"});
  const auto b = invoke({"simulate", "--model", "jump_diffusion", "--seed", "3", "--grid-level", "6"});
  ASSERT_EQ(a.code, kExitOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.rfind("# config=", 0), 0u);
  EXPECT_EQ(invoke({"simulate", "--model", "brownian"}).code, kExitSchema);
  const auto js = invoke({"simulate", "--model", "brownian", "--seed", "1", "--format", "json",
                          "--out", (dir_ / "sim").string()});
  ASSERT_EQ(js.code, kExitOk) << js.err;
  EXPECT_TRUE(fs::exists(dir_ / "sim" / "path.json"));
}

TEST_F(CliTest, IntegratePrintsResidual) {
  const auto r = invoke({"integrate", "--model", "jump_diffusion", "--seed", "5", "--level", "8",
                         "--partition", "jump_adapted", "--out", (dir_ / "int").string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out.rfind("I_k=", 0), 0u);
  EXPECT_NE(r.out.find(" ibp_residual="), std::string::npos);
  const auto trace = slurp(dir_ / "int" / "integral_trace.csv");
  EXPECT_NE(trace.find("\ns,I_k\n"), std::string::npos);
  EXPECT_NE(trace.find("\njump_time,increment,target,jump_check\n"), std::string::npos);
}

TEST_F(CliTest, TruncateModesAndUnsupportedSources) {
  const auto r = invoke({"truncate", "--model", "compound_poisson", "--seed", "2", "--a", "0.5,0.1",
                         "--mode", "compensated", "--out", (dir_ / "tr").string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out.rfind("a=0.5 sup_dist=", 0), 0u);
  EXPECT_NE(slurp(dir_ / "tr" / "truncation.csv").find("\nmode,a,sup_dist,qv_dist\ncompensated,0.5,"),
            std::string::npos);
  EXPECT_EQ(invoke({"truncate", "--model", "oscillator"}).code, kExitUnsupported);
  EXPECT_EQ(invoke({"truncate", "--model", "compound_poisson", "--seed", "1", "--a", "1.5", "--mode",
                    "compensated"})
                .code,
            kExitSchema);
  EXPECT_EQ(invoke({"truncate", "--model", "brownian", "--seed", "1", "--mode", "sideways"}).code,
            kExitSchema);
}

TEST_F(CliTest, MalformedConfigWritesNothing) {
  const auto out = (dir_ / "never").string();
  for (const auto& text : {std::string(R"({"model": "brownian", "sed": 1})"),
                           std::string(R"({"model": "brownian", "seed": -1})"),
                           std::string(R"({"model": "brownian", "level": 2.5})"),
                           std::string(R"({"model": {"sigma": 1, "drift": 3}})"),
                           std::string(R"({"model": "brownian")"),
                           std::string(R"({"command": "qv", "model": "brownian", "seed": 1})")}) {
    const auto cfg = write("bad.json", text);
    const auto r = invoke({"simulate", "--config", cfg, "--out", out});
    EXPECT_EQ(r.code, kExitSchema) << text;
    EXPECT_FALSE(r.err.empty());
    EXPECT_FALSE(fs::exists(out)) << text;
  }
  EXPECT_EQ(invoke({"simulate", "--config", (dir_ / "missing.json").string()}).code, kExitSchema);
  EXPECT_EQ(invoke({"frobnicate"}).code, kExitSchema);
  EXPECT_EQ(invoke({}).code, kExitSchema);
}

TEST_F(CliTest, ConfigFileDrivesTheRun) {
  const auto cfg = write("run.json", R"({"command": "qv", "model": {"preset": "brownian", "sigma": 2},
                                          "seed": 9, "level": 10, "grid_level": 10})");
  const auto a = invoke({"qv", "--config", cfg});
  ASSERT_EQ(a.code, kExitOk) << a.err;
  // σ = 2 on [0, 1]: S_10 concentrates near 4.
  EXPECT_NEAR(std::stod(a.out), 4.0, 1.0);
  const auto b = invoke({"qv", "--config", cfg, "--seed", "10"});
  EXPECT_NE(a.out, b.out);
}

TEST_F(CliTest, ResourceLimits) {
  EXPECT_EQ(invoke({"simulate", "--model", "brownian", "--seed", "1", "--grid-level", "30"}).code,
            kExitResource);
  EXPECT_EQ(invoke({"qv", "--model", "brownian", "--seed", "1", "--grid-level", "8", "--level", "40"})
                .code,
            kExitResource);
  EXPECT_EQ(invoke({"experiment", "--scenario", "identity", "--seed", "1", "--level", "30"}).code,
            kExitResource);
}

TEST_F(CliTest, CheckPasses) {
  const auto r = invoke({"check", "--replicas", "50", "--level", "10"});
  EXPECT_EQ(r.code, kExitOk) << r.out;
  EXPECT_NE(r.out.find("check: ok"), std::string::npos);
}

TEST_F(CliTest, ExperimentOutputsAreByteIdentical) {
  const auto a = (dir_ / "a").string(), b = (dir_ / "b").string();
  const std::vector<std::string> common{"experiment", "--scenario", "poisson_scale", "--seed", "4",
                                        "--replicas", "40"};
  auto args = common;
  args.insert(args.end(), {"--out", a});
  const auto ra = invoke(args);
  ASSERT_EQ(ra.code, kExitOk) << ra.err;
  args = common;
  args.insert(args.end(), {"--out", b});
  ASSERT_EQ(invoke(args).code, kExitOk);
  for (const char* f : {"report.csv", "plot_trend.csv", "plot_matrix.csv"}) {
    ASSERT_TRUE(fs::exists(fs::path(a) / f)) << f;
    EXPECT_EQ(slurp(fs::path(a) / f), slurp(fs::path(b) / f)) << f;
  }
  EXPECT_TRUE(fs::exists(fs::path(a) / "summary.json"));
  EXPECT_NE(ra.out.find("warning: truncation level 1 "), std::string::npos);
  EXPECT_EQ(invoke({"experiment", "--scenario", "identity"}).code, kExitSchema);
  EXPECT_EQ(invoke({"experiment", "--seed", "1"}).code, kExitSchema);
  const auto js = invoke({"experiment", "--scenario", "identity", "--seed", "1", "--format", "json"});
  ASSERT_EQ(js.code, kExitOk);
  EXPECT_NE(js.out.find("\"ci_method\": \"wilson\""), std::string::npos);
}
