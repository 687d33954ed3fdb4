#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "dlmperf/cli.hpp"
#include "svg_check.hpp"

using namespace dlmperf;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("dlmperf_cli_" + std::string(::testing::UnitTest::GetInstance()
                                             ->current_test_info()
                                             ->name()));
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::string file(const std::string& name, const std::string& body) {
    const auto p = dir_ / name;
    std::ofstream(p) << body;
    return p.string();
  }
  std::string path(const std::string& name) { return (dir_ / name).string(); }

  std::filesystem::path dir_;
};

}  // namespace

TEST_F(CliTest, HwShowPrintsDerivation) {
  const auto r = run({"hw", "show", "rtx-a6000"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("154.8 TFLOP/s"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("84 SM"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("1.80 GHz"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("768 GB/s"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("201.6"), std::string::npos) << r.out;
}

TEST_F(CliTest, Lists) {
  EXPECT_EQ(run({"hw", "list"}).out, "a100-80g\nrtx-a6000\n");
  EXPECT_EQ(run({"model", "list"}).out, "llada-8b\nllama3-8b\ntiny-test\n");
  const auto r = run({"model", "show", "llama3-8b"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("14336"), std::string::npos);
}

TEST_F(CliTest, AnalyzePrintsRowAndJson) {
  const auto cfg = file("s.json", R"({"model": "tiny-test", "hardware": "rtx-a6000",
    "mode": "arm", "batch": 1, "prompt_len": 2, "gen_len": 1})");
  const auto r = run({"analyze", "-c", cfg});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto last = r.out.substr(r.out.rfind('\n', r.out.size() - 2) + 1);
  const auto j = nlohmann::json::parse(last);
  EXPECT_EQ(j["mode"], "arm");
  EXPECT_EQ(j["fits"], true);
}

TEST_F(CliTest, OutOfMemoryIsNotAnError) {
  const auto cfg = file("oom.json", R"({"model": "llama3-8b", "hardware": "rtx-a6000",
    "mode": "arm", "batch": 4096, "prompt_len": 8192, "gen_len": 16})");
  const auto r = run({"analyze", "-c", cfg});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("\"fits\":false"), std::string::npos);
}

TEST_F(CliTest, ValidationFailuresExitOne) {
  const auto cfg = file("bad.json", R"({"model": "llama3-8b", "hardware": "rtx-a6000",
    "mode": "dlm_block", "batch": 1, "prompt_len": 0, "gen_len": 64,
    "axes": {"block_size": [32, 128]}})");
  const auto r = run({"sweep", "-c", cfg, "-o", path("out.csv")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("block_size=128"), std::string::npos) << r.err;
  EXPECT_FALSE(std::filesystem::exists(path("out.csv")));

  const auto heads = file("heads.json", R"({"model": {"name": "m", "num_layers": 1,
    "d_model": 8, "num_heads": 3, "num_kv_heads": 1, "head_dim": 4, "ffn_dim": 8,
    "vocab_size": 4, "mlp_kind": "swiglu", "attention_kind": "causal_capable"}, "hardware": "rtx-a6000",
    "mode": "arm", "batch": 1, "prompt_len": 1, "gen_len": 1})");
  const auto h = run({"analyze", "-c", heads});
  EXPECT_EQ(h.code, 1);
  EXPECT_NE(h.err.find("num_heads"), std::string::npos) << h.err;
}

TEST_F(CliTest, MissingFileExitsTwo) {
  const auto r = run({"analyze", "-c", path("nope.json")});
  EXPECT_EQ(r.code, 2);
  EXPECT_FALSE(r.err.empty());
}

TEST_F(CliTest, UnwritableOutputExitsTwo) {
  const auto cfg = file("g.json", R"({"model": "tiny-test", "hardware": "rtx-a6000",
    "mode": "arm", "batch": 1, "prompt_len": 2, "axes": {"gen_len": [1, 2]}})");
  EXPECT_EQ(run({"sweep", "-c", cfg, "-o", "/nonexistent-dir/x.csv"}).code, 2);
}

TEST_F(CliTest, UsageErrorsExitOne) {
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"plot", "--kind", "power", "-c", "x", "-o", "y"}).code, 1);
  EXPECT_EQ(run({"hw", "show", "h100"}).code, 1);
}

TEST_F(CliTest, SweepRooflineAndPlotWriteFiles) {
  const auto cfg = file("g.json", R"({"model": "llama3-8b", "hardware": "rtx-a6000",
    "mode": "arm", "prompt_len": 128, "axes": {"gen_len": [64, 128], "batch": [1, 4]}})");
  ASSERT_EQ(run({"sweep", "-c", cfg, "-o", path("o.csv")}).code, 0);
  std::ifstream csv(path("o.csv"));
  std::string line;
  int lines = 0;
  while (std::getline(csv, line)) ++lines;
  EXPECT_EQ(lines, 5);
  ASSERT_EQ(run({"roofline", "-c", cfg, "-o", path("r.svg")}).code, 0);
  ASSERT_EQ(run({"plot", "--kind", "throughput", "-c", cfg, "-o", path("p.svg")}).code, 0);
  for (const char* f : {"r.svg", "p.svg"}) {
    std::ifstream in(path(f));
    std::stringstream s;
    s << in.rdbuf();
    EXPECT_EQ(svg_check::well_formed(s.str()), "") << f;
  }
}
