#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "dsheat/cli.hpp"
#include "dsheat/config.hpp"
#include "dsheat/errors.hpp"

using namespace dsheat;
namespace fs = std::filesystem;

namespace {

struct Invocation {
  int code;
  std::string out;
  std::string err;
};

Invocation invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "dsheat");
  std::ostringstream out, err;
  const int code = parse_and_dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("dsheat_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string prefix(const std::string& sub = "") const { return (dir_ / sub).string() + "/"; }
  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, RunPointDataBlowsUp) {
  const auto r = invoke({"run", "--d", "1", "--alpha", "1", "--init", "delta:0.25", "--horizon", "100", "--out",
                         prefix()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("blew_up"), std::string::npos);
  const auto summary = nlohmann::json::parse(slurp(dir_ / "summary.json"));
  EXPECT_EQ(summary["outcome"], "blew_up");
  EXPECT_EQ(summary["blowup_tau"], 15);
  const std::string csv = slurp(dir_ / "run.csv");
  EXPECT_EQ(csv.rfind("tau,sup_f,sup_g,l1_f,support_cells\n", 0), 0u);
}

TEST_F(CliTest, ManifestListsEveryFile) {
  const auto r = invoke({"run", "--init", "delta:0.1", "--horizon", "6", "--dump-every", "3", "--out", prefix()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto manifest = nlohmann::json::parse(slurp(dir_ / "manifest.json"));
  EXPECT_EQ(manifest["command"], "run");
  EXPECT_EQ(manifest["config"]["horizon"], 6);
  std::set<std::string> listed;
  for (const auto& f : manifest["files"]) listed.insert(fs::path(f.get<std::string>()).filename().string());
  for (const auto& entry : fs::directory_iterator(dir_)) {
    const std::string name = entry.path().filename().string();
    if (name == "manifest.json") continue;
    EXPECT_TRUE(listed.count(name)) << name;
  }
  for (const char* name : {"run.csv", "summary.json", "snapshot_tau0.csv", "snapshot_tau3.json", "snapshot_tau6.csv"})
    EXPECT_TRUE(fs::exists(dir_ / name)) << name;
}

TEST_F(CliTest, SnapshotFeedsBackAsInit) {
  ASSERT_EQ(invoke({"run", "--init", "delta:0.1", "--horizon", "4", "--dump-every", "4", "--out", prefix("a")}).code,
            kExitOk);
  const std::string snap = (dir_ / "a" / "snapshot_tau4.csv").string();
  ASSERT_EQ(invoke({"run", "--init", "file:" + snap, "--horizon", "3", "--out", prefix("b")}).code, kExitOk);
  ASSERT_EQ(invoke({"run", "--init", "delta:0.1", "--horizon", "7", "--out", prefix("c")}).code, kExitOk);
  const auto b = nlohmann::json::parse(slurp(dir_ / "b" / "summary.json"));
  const auto c = nlohmann::json::parse(slurp(dir_ / "c" / "summary.json"));
  EXPECT_EQ(b["final_l1"], c["final_l1"]);
}

TEST_F(CliTest, DeterministicCsv) {
  for (const char* sub : {"x", "y"}) {
    ASSERT_EQ(invoke({"sweep", "--alphas", "1,3", "--epsilons", "0.5,0.1", "--horizon", "300", "--out", prefix(sub)})
                  .code,
              kExitOk);
    ASSERT_EQ(invoke({"run", "--alpha", "2", "--init", "box:3:0.05", "--horizon", "50", "--out", prefix(sub)}).code,
              kExitOk);
  }
  EXPECT_EQ(slurp(dir_ / "x" / "sweep.csv"), slurp(dir_ / "y" / "sweep.csv"));
  EXPECT_EQ(slurp(dir_ / "x" / "run.csv"), slurp(dir_ / "y" / "run.csv"));
  EXPECT_EQ(slurp(dir_ / "x" / "sweep.csv").substr(0, 80),
            std::string("alpha,epsilon,outcome,blowup_tau,final_l1,peak_sup_g,sub_bound_tau,super_certificate\n")
                .substr(0, 80));
}

TEST_F(CliTest, UnknownFlagIsUsageError) {
  const auto r = invoke({"run", "--bogus", "1"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
}

TEST_F(CliTest, MissingSubcommandIsUsageError) {
  EXPECT_EQ(invoke({}).code, kExitUsage);
}

TEST_F(CliTest, InvalidConfigNamesTheField) {
  auto r = invoke({"run", "--alpha", "-1"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("alpha"), std::string::npos);

  const fs::path cfg = dir_ / "cfg.json";
  std::ofstream(cfg) << R"({"horizon": 5, "colour": "red"})";
  r = invoke({"--config", cfg.string(), "run"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("colour"), std::string::npos);

  std::ofstream(cfg) << R"({"horizon": "five"})";
  r = invoke({"--config", cfg.string(), "run"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("horizon"), std::string::npos);

  r = invoke({"run", "--init", "ring:3"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("init"), std::string::npos);
}

TEST_F(CliTest, ConfigFileWithFlagOverride) {
  const fs::path cfg = dir_ / "cfg.json";
  std::ofstream(cfg) << R"({"alpha": 3, "init": "delta:0.1", "horizon": 40})";
  const auto r = invoke({"--config", cfg.string(), "run", "--horizon", "12", "--out", prefix()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto manifest = nlohmann::json::parse(slurp(dir_ / "manifest.json"));
  EXPECT_EQ(manifest["config"]["alpha"], 3.0);
  EXPECT_EQ(manifest["config"]["horizon"], 12);
}

TEST_F(CliTest, BudgetExhaustionExitCode) {
  const auto r =
      invoke({"run", "--d", "2", "--alpha", "2", "--init", "delta:0.01", "--horizon", "1000", "--cell-budget", "200",
              "--out", prefix()});
  EXPECT_EQ(r.code, kExitBudget);
  const auto k = invoke({"kernel", "--d", "2", "--max-tau", "500", "--cell-budget", "1000", "--out", prefix("k")});
  EXPECT_EQ(k.code, kExitBudget);
}

TEST_F(CliTest, SandwichKernelCritical) {
  auto r = invoke({"sandwich", "--init", "delta:0.1", "--horizon", "30", "--out", prefix("s")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(fs::exists(dir_ / "s" / "sandwich.csv"));

  r = invoke({"kernel", "--d", "1", "--max-tau", "200", "--out", prefix("k")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(fs::exists(dir_ / "k" / "kernel_asym.csv"));

  r = invoke({"critical", "--d", "1", "--epsilons", "0.001", "--horizon", "100", "--out", prefix("c")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const std::string csv = slurp(dir_ / "c" / "critical.csv");
  EXPECT_NE(csv.find("inconclusive"), std::string::npos);
}

TEST_F(CliTest, VerifyPasses) {
  const auto r = invoke({"verify", "--samples", "2000", "--seed", "7", "--out", prefix()});
  EXPECT_EQ(r.code, kExitOk) << r.out << r.err;
  const auto report = nlohmann::json::parse(slurp(dir_ / "verify.json"));
  EXPECT_EQ(report["seed"], 7);
}

TEST(Config, JsonRoundTrip) {
  Config c;
  c.params.alpha = 2.5;
  c.params.delta = 0.01;
  c.horizon = 77;
  c.epsilons = {0.3};
  c.init_shape = InitShape::Box;
  Config back;
  apply_json(back, to_json(c));
  EXPECT_EQ(to_json(back), to_json(c));
}

TEST(Config, InitSpecs) {
  EXPECT_EQ(parse_init_spec("delta:0.5", 2), Field::point({0, 0}, 0.5));
  EXPECT_EQ(l1_norm(parse_init_spec("box:3:0.1", 1)), 0.1 + 0.1 + 0.1);
  EXPECT_THROW(parse_init_spec("box:2.5:0.1", 1), ConfigError);
  EXPECT_THROW(parse_init_spec("delta:abc", 1), ConfigError);
  EXPECT_THROW(parse_init_spec("delta", 1), ConfigError);
  EXPECT_THROW(parse_init_spec("file:/nonexistent/x.csv", 1), ConfigError);
}
