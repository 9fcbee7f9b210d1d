#include "cli_runner.hpp"

#include <json.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <string>

namespace {

using nlohmann::json;

std::string line_value(const std::string& csv, const std::string& key) {
  const auto pos = csv.find("\n" + key + ",");
  if (pos == std::string::npos) return {};
  const auto start = pos + key.size() + 2;
  return csv.substr(start, csv.find('\n', start) - start);
}

}  // namespace

TEST(Cli, ConstantsAtThree) {
  const auto r = cli::run("constants --n 3");
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_EQ(line_value(r.out, "beta"), "1.32471795724");
  EXPECT_EQ(line_value(r.out, "lambda"), "1.76929235424");
  EXPECT_EQ(line_value(r.out, "margin"), "0.0390969522003");
  EXPECT_EQ(line_value(r.out, "h_I_max"), "1.38629436112");
}

TEST(Cli, ConstantsInBits) {
  const auto nats = cli::run("constants --n 3 --format json");
  const auto bits = cli::run("constants --n 3 --format json --log-base 2");
  ASSERT_EQ(nats.exit_code, 0);
  ASSERT_EQ(bits.exit_code, 0);
  const auto jn = json::parse(nats.out), jb = json::parse(bits.out);
  for (const char* k : {"h_K", "h_I_max", "h_I_induced", "margin"})
    EXPECT_NEAR(jb[k].get<double>(), jn[k].get<double>() / std::log(2.0), 1e-11) << k;
  EXPECT_EQ(jn["beta"], jb["beta"]);
  EXPECT_EQ(jn["gls"].size(), 2u);
}

TEST(Cli, ConstantsExtendedPrecision) {
  const auto r = cli::run("constants --n 40 --precision extended --format json");
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_GT(json::parse(r.out)["margin"].get<double>(), 0.0);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(cli::run("constants --n 2").exit_code, 2);
  EXPECT_EQ(cli::run("constants --n x").exit_code, 2);
  EXPECT_EQ(cli::run("constants --format xml").exit_code, 2);
  EXPECT_EQ(cli::run("").exit_code, 2);
  EXPECT_EQ(cli::run("frobnicate").exit_code, 2);
  EXPECT_EQ(cli::run("parry --n-range 5..3").exit_code, 2);
  EXPECT_EQ(cli::run("simulate --n 3 --p 1.5").exit_code, 2);
  EXPECT_EQ(cli::run("--help").exit_code, 0);
}

TEST(Cli, SimulateHeaderOnly) {
  const auto r = cli::run("simulate --n 3 --steps 0 --summary /dev/null");
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out, "step,x,digit,in_switch,coin_cursor\n");
}

TEST(Cli, SimulateIsDeterministic) {
  const std::string args = "simulate --n 4 --seed 17 --steps 200 --samples 1000 --letters 10";
  const auto a = cli::run(args), b = cli::run(args);
  ASSERT_EQ(a.exit_code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.err, b.err);
  EXPECT_NE(a.out, cli::run("simulate --n 4 --seed 18 --steps 200").out);
}

TEST(Cli, SimulateReturnTimeLaw) {
  const auto r = cli::run("simulate --n 3 --seed 5 --steps 10 --samples 200000");
  ASSERT_EQ(r.exit_code, 0);
  const auto summary = json::parse(r.err);
  EXPECT_LT(summary["max_abs_z"].get<double>(), 4.0);
  EXPECT_EQ(summary["return_time_law"].size(), 2u);
}

TEST(Cli, MarkovJson) {
  const auto r = cli::run("markov --n 3");
  ASSERT_EQ(r.exit_code, 0);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["cells"].size(), 5u);
  EXPECT_EQ(j["adjacency"][2], json::parse("[1,1,0,1,1]"));
}

TEST(Cli, ParryTable) {
  const auto r = cli::run("parry --n-range 3..6 --format json");
  ASSERT_EQ(r.exit_code, 0);
  const auto j = json::parse(r.out);
  ASSERT_EQ(j.size(), 4u);
  for (const auto& row : j) EXPECT_GT(row["margin"].get<double>(), 0.0);
  const auto csv = cli::run("parry --n 3..4");
  EXPECT_EQ(csv.out.substr(0, csv.out.find('\n')), "n,lambda,h_max,h_induced,margin");
}

TEST(Cli, VerifyMarkovRange) {
  const auto r = cli::run("verify --suite markov --n 3..10");
  EXPECT_EQ(r.exit_code, 0);
  const auto j = json::parse(r.out);
  EXPECT_TRUE(j["pass"].get<bool>());
  EXPECT_EQ(j["failed"], 0);
}

TEST(Cli, VerifyAllNamesTheChecks) {
  const auto r = cli::run("verify --suite all --n 3");
  EXPECT_EQ(r.exit_code, 0);
  for (const char* name : {"measures.gls_cylinder", "measures.kac_identity", "measures.abramov_parry",
                           "markov.entropy_margin"})
    EXPECT_NE(r.out.find(name), std::string::npos) << name;
}

TEST(Cli, VerifyFaultInjectionFails) {
  const auto r = cli::run("verify --suite markov --n 3..4 --inject-fault");
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_FALSE(json::parse(r.out)["pass"].get<bool>());
}

TEST(Cli, Entropy) {
  const auto r = cli::run("entropy --n 3 --samples 1000000 --seed 2");
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_LT(json::parse(r.out)["relative_error"].get<double>(), 0.02);
  EXPECT_EQ(cli::run("entropy --n 3 --samples 10").exit_code, 1);
}

TEST(Cli, OutFile) {
  const std::string path = ::testing::TempDir() + "rbeta_constants.csv";
  ASSERT_EQ(cli::run("constants --n 4 --out " + path).exit_code, 0);
  EXPECT_EQ(cli::read_file(path), cli::run("constants --n 4").out);
}
