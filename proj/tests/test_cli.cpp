#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("abx_cli_" + std::to_string(::getpid()) + "_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run(const std::string& args) {
  std::string cmd = std::string(ABX_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

}  // namespace

TEST(Cli, HelpAndUsageErrors) {
  EXPECT_EQ(run("--help"), 0);
  EXPECT_EQ(run(""), 2);
  EXPECT_EQ(run("analyze --no-such-flag"), 2);
  EXPECT_EQ(run("figures fig9"), 2);
}

TEST(Cli, InvalidModelExitsTwo) {
  auto d = scratch("k0");
  EXPECT_EQ(run("analyze --K 0 --out " + d.string()), 2);
  EXPECT_EQ(run("analyze --K 20 --a 1.5 --out " + d.string()), 2);
  EXPECT_EQ(run("simulate --K 20 --N 1 --R 2 --out " + d.string()), 2);
  EXPECT_FALSE(fs::exists(d / "report.json"));
}

TEST(Cli, AnalyzeWritesReport) {
  auto d = scratch("analyze");
  ASSERT_EQ(run("analyze --K 30 --out " + d.string()), 0);
  json r = json::parse(slurp(d / "report.json"));
  EXPECT_EQ(r.size(), 8u);
  for (const char* key : {"gte", "ade", "v0", "v1", "cov_tail", "sigma_tilde_sq", "naive_limit", "a"}) {
    EXPECT_TRUE(r.contains(key)) << key;
  }
  EXPECT_GT(r["gte"].get<double>(), 0.0);
  json cr = json::parse(slurp(d / "cr_bound.json"));
  EXPECT_EQ(cr["K"].get<int>(), 30);
}

TEST(Cli, ModelFile) {
  auto d = scratch("model");
  std::ofstream(d / "m.json") << R"({"K":2,"lambda":1,"tau":[1,2],"p0":[0.5,0.4,0],"p1":[0.6,0.5,0]})";
  ASSERT_EQ(run("analyze --model " + (d / "m.json").string() + " --out " + d.string()), 0);
  std::ofstream(d / "bad.json") << R"({"K":2,"lambda":1,"tau":[1,2],"p0":[0.5,0.4,0.1],"p1":[0.6,0.5,0]})";
  EXPECT_EQ(run("analyze --model " + (d / "bad.json").string() + " --out " + d.string()), 2);
}

TEST(Cli, SimulateIsDeterministic) {
  auto d1 = scratch("sim1"), d2 = scratch("sim2");
  const std::string args = "simulate --K 20 --N 200 --R 30 --seed 11 --per-rep --out ";
  ASSERT_EQ(run(args + d1.string()), 0);
  ASSERT_EQ(run(args + d2.string()), 0);
  EXPECT_EQ(slurp(d1 / "summary.json"), slurp(d2 / "summary.json"));
  EXPECT_EQ(slurp(d1 / "replications.csv"), slurp(d2 / "replications.csv"));
  EXPECT_EQ(first_line(d1 / "replications.csv"), "rep,gte_hat,var_hat,t_stat,n1,n0,rejected");
  json s = json::parse(slurp(d1 / "summary.json"));
  EXPECT_EQ(s["config"]["scenario"], "logit");
}

TEST(Cli, ConfigPrecedence) {
  auto d = scratch("config");
  std::ofstream(d / "c.json") << R"({"K": 15, "N": 100, "R": 5})";
  ASSERT_EQ(run("simulate --config " + (d / "c.json").string() + " --R 7 --out " + d.string()), 0);
  json s = json::parse(slurp(d / "summary.json"));
  EXPECT_EQ(s["config"]["R"].get<long>(), 7);
  EXPECT_EQ(s["config"]["N"].get<long>(), 100);
  std::ofstream(d / "bad.json") << R"({"K": 15, "bogus": 1})";
  EXPECT_EQ(run("simulate --config " + (d / "bad.json").string() + " --out " + d.string()), 2);
}

TEST(Cli, FigureCsvHeaders) {
  auto d = scratch("fig");
  ASSERT_EQ(run("figures fig2 --K 40 --out " + d.string()), 0);
  EXPECT_EQ(first_line(d / "fig2.csv"), "N,metric_naive,metric_unbiased,mode");
  ASSERT_EQ(run("figures fig4 --N-grid 100,1000,10000 --format svg --out " + d.string()), 0);
  EXPECT_EQ(first_line(d / "fig4.csv"), "N,metric_naive,metric_unbiased,mode");
  EXPECT_TRUE(fs::exists(d / "fig4.svg"));
  ASSERT_EQ(run("figures fig3 --N-grid 50,100 --R 200 --out " + d.string()), 0);
  EXPECT_EQ(first_line(d / "fig3.csv"), "N,metric_naive,metric_unbiased,mode");
  EXPECT_EQ(first_line(d / "fig3_detail.csv"), "N,mc_reject_rate,mc_se,analytic_naive,degenerate_count");
}
