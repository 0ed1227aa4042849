#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "thetadft/cli_runner.hpp"

using namespace thetadft;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome invoke(const RunConfig& cfg) {
  std::ostringstream out, err;
  const int code = run(cfg, out, err);
  return {code, out.str(), err.str()};
}

RunConfig make(Command c, OutputFormat f = OutputFormat::text) {
  RunConfig cfg;
  cfg.command = c;
  cfg.format = f;
  return cfg;
}

}  // namespace

TEST(Cli, ThetaAtOrigin) {
  auto cfg = make(Command::theta, OutputFormat::csv);
  const auto r = invoke(cfg);
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("function,re,im\ntheta3,1.086434811213308"), std::string::npos) << r.out;
}

TEST(Cli, JsonSchema) {
  auto cfg = make(Command::dft_check, OutputFormat::json);
  cfg.N = 8;
  cfg.n = 2;
  const auto r = invoke(cfg);
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["command"], "dft-check");
  EXPECT_EQ(doc["params"]["N"], 8);
  ASSERT_EQ(doc["results"].size(), 1u);
  EXPECT_EQ(doc["results"][0]["check"], "dft_eigenrelation");
  EXPECT_LE(doc["results"][0]["residual"].get<double>(), 1e-9);
  EXPECT_EQ(doc["pass"], true);
}

TEST(Cli, SweepCsvRows) {
  auto cfg = make(Command::sweep, OutputFormat::csv);
  cfg.N_min = 4;
  cfg.N_max = 10;
  cfg.index_max = 6;
  const auto r = invoke(cfg);
  EXPECT_EQ(r.code, 0);
  std::istringstream lines(r.out);
  std::string line, row;
  std::getline(lines, line);
  EXPECT_EQ(line, "N,n,m,re,im,abs,same_class,degenerate");
  while (std::getline(lines, line))
    if (line.rfind("10,4,0,", 0) == 0) row = line;
  ASSERT_FALSE(row.empty());
  std::vector<std::string> fields;
  std::stringstream ss(row);
  for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
  ASSERT_EQ(fields.size(), 8u);
  // 17 significant digits round-trip exactly
  const double abs_value = std::stod(fields[5]);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", abs_value);
  EXPECT_EQ(fields[5], buf);
  EXPECT_NEAR(abs_value, 1.2061850226e-4, 1e-13);
}

TEST(Cli, Deterministic) {
  auto cfg = make(Command::sweep, OutputFormat::json);
  cfg.N_min = 3;
  cfg.N_max = 14;
  cfg.index_max = 8;
  const auto a = invoke(cfg), b = invoke(cfg);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.code, b.code);
}

TEST(Cli, IdentitiesSuiteExitsZero) {
  auto cfg = make(Command::identities, OutputFormat::csv);
  cfg.suite = "all";
  EXPECT_EQ(invoke(cfg).code, 0);
}

TEST(Cli, FailingCheckExitsOne) {
  auto cfg = make(Command::identities);
  cfg.suite = "fractional_shift";
  cfg.tol = 1e-300;
  const auto r = invoke(cfg);
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("FAIL"), std::string::npos);
}

TEST(Cli, DomainErrorExitsTwo) {
  auto cfg = make(Command::theta);
  cfg.tau_im = -1.0;
  const auto r = invoke(cfg);
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(r.out.empty());
  EXPECT_NE(r.err.find("Im(tau)"), std::string::npos);

  auto bad = make(Command::eigenstate);
  bad.representation = "bogus";
  EXPECT_EQ(invoke(bad).code, 2);

  auto degenerate = make(Command::twovar);
  degenerate.N = 2;
  degenerate.m = 1;
  EXPECT_EQ(invoke(degenerate).code, 2);
}

TEST(Cli, EigenstateRepresentationsAgree) {
  auto cfg = make(Command::eigenstate, OutputFormat::csv);
  cfg.N = 9;
  cfg.n = 4;
  auto values = [&](const std::string& repr) {
    cfg.representation = repr;
    const auto r = invoke(cfg);
    EXPECT_EQ(r.code, 0);
    std::istringstream lines(r.out);
    std::string line;
    std::getline(lines, line);
    EXPECT_EQ(line, "j,re,im");
    std::vector<double> re;
    while (std::getline(lines, line)) re.push_back(std::stod(line.substr(line.find(',') + 1)));
    return re;
  };
  const auto direct = values("direct"), dual = values("dual"), taylor = values("theta-taylor");
  ASSERT_EQ(direct.size(), 9u);
  for (size_t j = 0; j < direct.size(); ++j) {
    EXPECT_NEAR(direct[j], dual[j], 1e-12);
    EXPECT_NEAR(direct[j], taylor[j], 1e-12);
  }
}

TEST(Cli, TwovarReportsVariantTables) {
  auto cfg = make(Command::twovar, OutputFormat::json);
  cfg.N = 6;
  cfg.m = 1;
  cfg.n = 1;
  const auto r = invoke(cfg);
  EXPECT_EQ(r.code, 0) << r.out;
  const auto doc = nlohmann::json::parse(r.out);
  int variants = 0;
  for (const auto& row : doc["results"]) variants += row["table"] == "variants";
  EXPECT_EQ(variants, 16);
}

TEST(Cli, ToleranceFromEnvironment) {
  ::setenv("THETA_DFT_TOL", "1e-6", 1);
  EXPECT_EQ(default_tolerance(), 1e-6);
  ::setenv("THETA_DFT_TOL", "garbage", 1);
  EXPECT_EQ(default_tolerance(), kDefaultTolerance);
  ::unsetenv("THETA_DFT_TOL");
  EXPECT_EQ(default_tolerance(), kDefaultTolerance);
}

TEST(Cli, WritesOutputFile) {
  const auto path = std::filesystem::temp_directory_path() / "thetadft_cli_test.csv";
  auto cfg = make(Command::theta, OutputFormat::csv);
  cfg.output_path = path.string();
  const auto r = invoke(cfg);
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  std::stringstream content;
  content << in.rdbuf();
  EXPECT_EQ(content.str(), invoke(make(Command::theta, OutputFormat::csv)).out);
  std::filesystem::remove(path);

  cfg.output_path = "/nonexistent-dir/x.csv";
  EXPECT_EQ(invoke(cfg).code, 2);
}

TEST(Cli, CommandNames) {
  for (auto c : {Command::theta, Command::eigenstate, Command::dft_check, Command::gram, Command::sweep,
                 Command::identities, Command::twovar})
    EXPECT_EQ(parse_command(command_name(c)), c);
  EXPECT_FALSE(parse_command("nope").has_value());
}
