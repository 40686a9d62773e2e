#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "cli.hpp"

namespace fs = std::filesystem;
using d2d::cli::run_cli;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("d2d_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, NoArgumentsPrintsUsage) {
  const auto r = run({});
  EXPECT_EQ(r.code, d2d::cli::kExitError);
  EXPECT_NE(r.err.find("gen"), std::string::npos);
}

TEST(Cli, OutOfRangeBetaNamesTheFlag) {
  const auto dir = scratch("beta");
  const auto r = run({"run-vaw", "--beta", "1.5", "--stream", (dir / "s.csv").string()});
  EXPECT_EQ(r.code, d2d::cli::kExitError);
  EXPECT_NE(r.err.find("--beta"), std::string::npos) << r.err;
}

TEST(Cli, UnknownConfigKeyIsNamed) {
  const auto dir = scratch("cfg");
  std::ofstream(dir / "bad.cfg") << "d=2\nwobble=3\n";
  const auto r = run({"gen", "--config", (dir / "bad.cfg").string(), "--out", (dir / "s.csv").string()});
  EXPECT_EQ(r.code, d2d::cli::kExitError);
  EXPECT_NE(r.err.find("wobble"), std::string::npos) << r.err;
}

TEST(Cli, FlatConfigParsing) {
  const auto kv = d2d::cli::parse_flat_config("# comment\n\n a = 1 \nb=x\n");
  EXPECT_EQ(kv.at("a"), "1");
  EXPECT_EQ(kv.at("b"), "x");
  EXPECT_THROW(d2d::cli::parse_flat_config("novalue\n"), std::invalid_argument);
  EXPECT_EQ(d2d::cli::fnv1a_hex(""), "cbf29ce484222325");
}

TEST(Cli, EmitConfigRoundTrips) {
  const auto dir = scratch("emit");
  const auto first = run({"run-aioli", "--beta", "0.93", "--lambda", "0.5", "--stream", "x.csv", "--emit-config"});
  ASSERT_EQ(first.code, 0) << first.err;
  EXPECT_NE(first.out.find("beta=0.93"), std::string::npos);
  std::ofstream(dir / "a.cfg") << first.out;
  const auto second = run({"run-aioli", "--config", (dir / "a.cfg").string(), "--emit-config"});
  ASSERT_EQ(second.code, 0) << second.err;
  EXPECT_EQ(first.out, second.out);
  const auto over = run({"run-aioli", "--config", (dir / "a.cfg").string(), "--beta", "0.5", "--emit-config"});
  EXPECT_NE(over.out.find("beta=0.5\n"), std::string::npos);
}

TEST(Cli, GenThenRunVawPassesChecks) {
  const auto dir = scratch("vaw");
  const auto stream = (dir / "s.csv").string();
  ASSERT_EQ(run({"gen", "--d", "3", "--T", "300", "--segments", "3", "--noise", "0.1", "--seed", "5", "--out", stream})
                .code,
            0);
  EXPECT_TRUE(fs::exists(dir / "s.truth.csv"));
  const auto r = run({"run-vaw", "--beta", "0.9", "--stream", stream, "--out", (dir / "trace.csv").string()});
  ASSERT_EQ(r.code, 0) << r.err << r.out;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j.at("pass").get<bool>());
  EXPECT_EQ(j.at("subcommand"), "run-vaw");
  const std::string trace = slurp(dir / "trace.csv");
  EXPECT_EQ(trace.rfind("# d2d run-vaw config_hash=", 0), 0u);
  EXPECT_NE(trace.find("t,loss_play,loss_comp,cum_dynreg"), std::string::npos);
}

TEST(Cli, SeedDefaultsToEnvironment) {
  const auto dir = scratch("env");
  ::setenv("D2D_SEED", "1234", 1);
  const auto r = run({"gen", "--d", "2", "--T", "5", "--out", (dir / "s.csv").string()});
  ::unsetenv("D2D_SEED");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(slurp(dir / "s.csv").find("seed=1234"), std::string::npos);
}

TEST(Cli, SameSeedSameBytes) {
  const auto a = scratch("det_a"), b = scratch("det_b");
  for (const auto& dir : {a, b}) {
    ASSERT_EQ(run({"gen", "--d", "2", "--T", "50", "--noise", "0.3", "--seed", "9", "--out", (dir / "s.csv").string()}).code,
              0);
  }
  EXPECT_EQ(slurp(a / "s.csv"), slurp(b / "s.csv"));
  EXPECT_EQ(slurp(a / "s.truth.csv"), slurp(b / "s.truth.csv"));
}

TEST(Cli, TuneAdamReportsFields) {
  const auto r = run({"tune-adam", "--variant", "clipfree", "--eps", "0.16", "--G", "1", "--sigma", "0"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j.at("pass").get<bool>());
  EXPECT_NE(r.out.find("\"beta1\""), std::string::npos);
  EXPECT_NE(r.out.find("\"mu\""), std::string::npos);
}

TEST(Cli, ShortO2ncRun) {
  const auto dir = scratch("o2nc");
  const auto r = run({"run-o2nc", "--T", "200", "--dim", "3", "--out", (dir / "t.csv").string()});
  ASSERT_EQ(r.code, 0) << r.err << r.out;
  EXPECT_NE(slurp(dir / "t.csv").find("t,s_t,||delta||,||grad_at_xbar||,dynreg_term"), std::string::npos);
}

TEST(Cli, VerifyLemmasSingleSuite) {
  const auto r = run({"verify-lemmas", "--only", "abel-sum", "--instances", "50"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(nlohmann::json::parse(r.out).at("pass").get<bool>());
  EXPECT_EQ(run({"verify-lemmas", "--only", "nonsense"}).code, d2d::cli::kExitError);
}
