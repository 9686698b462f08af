#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "posbvp/cli.hpp"
#include "posbvp/io.hpp"

using namespace posbvp;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "posbvp");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("posbvp_cli_test_" + name);
  fs::remove_all(p);
  return p;
}

nlohmann::json load(const fs::path& p) {
  std::ifstream in(p);
  return nlohmann::json::parse(in);
}

}  // namespace

TEST(Cli, SolveManufacturedWritesCsvAndReport) {
  const fs::path dir = scratch("solve");
  const CliRun r = run({"solve", "--problem", "mms-bc1", "--n", "1000", "--out", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream csv(dir / "solution.csv");
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "t,u,du");
  int rows = 0;
  while (std::getline(csv, line)) ++rows;
  EXPECT_EQ(rows, 1001);
  EXPECT_EQ(load(dir / "solve_report.json").at("converged"), true);
}

TEST(Cli, GridPreconditionIsUsageError) {
  EXPECT_EQ(run({"solve", "--problem", "mms-bc1", "--n", "1", "--out", scratch("n1").string()}).code, 1);
}

TEST(Cli, UnknownCommandOrFlag) {
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({"solve", "--bogus", "1"}).code, 1);
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"solve", "--problem", "nope-bc1"}).code, 1);
  EXPECT_EQ(run({"solve", "--problem", "logistic-bc1", "--bc", "bc2"}).code, 1);
  EXPECT_EQ(run({"solve", "--problem", "logistic"}).code, 1);
}

TEST(Cli, DegreeReverseLogistic) {
  const fs::path dir = scratch("degree_rev");
  const CliRun r = run({"degree", "--problem", "reverse-logistic-bc1", "--r", "0.5", "--R", "2",
                     "--alpha0", "0.5", "--n", "400", "--out", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err << r.out;
  const auto j = load(dir / "degree_report.json");
  EXPECT_EQ(j.at("deg_omega_r"), 1);
  EXPECT_EQ(j.at("deg_omega_R"), 0);
  EXPECT_EQ(j.at("deg_annulus"), -1);
}

TEST(Cli, DegreeLogisticSwappedBracket) {
  const fs::path dir = scratch("degree_log");
  const CliRun r = run({"degree", "--problem", "logistic-bc1", "--r", "3", "--R", "0.5", "--n", "400",
                     "--out", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = load(dir / "degree_report.json");
  EXPECT_EQ(j.at("deg_omega_r"), 1);
  EXPECT_EQ(j.at("deg_omega_R"), 0);
  EXPECT_EQ(j.at("deg_annulus"), 1);
}

TEST(Cli, DegreeHypothesisFailureExitsThree) {
  const fs::path dir = scratch("degree_fail");
  // r = 0.3 fails the integral clause for the logistic problem
  const CliRun r = run({"degree", "--problem", "logistic-bc1", "--r", "0.3", "--R", "3", "--n", "200",
                     "--out", dir.string()});
  EXPECT_EQ(r.code, 3);
  EXPECT_TRUE(fs::exists(dir / "degree_report.json"));
  EXPECT_EQ(run({"degree", "--problem", "logistic-bc1", "--r", "1"}).code, 1);
}

TEST(Cli, ConfigFileAndOverride) {
  const fs::path dir = scratch("config");
  fs::create_directories(dir);
  {
    std::ofstream cfg(dir / "run.json");
    cfg << R"({"problem": "mms", "bc": "bc3", "n": 200, "out": ")" << (dir / "from_config").string()
        << "\"}";
  }
  CliRun r = run({"solve", "--config", (dir / "run.json").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir / "from_config" / "solution.csv"));
  r = run({"solve", "--config", (dir / "run.json").string(), "--n", "100", "--out",
           (dir / "override").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(load(dir / "override" / "solve_report.json").at("n"), 100);

  {
    std::ofstream cfg(dir / "bad.json");
    cfg << R"({"problem": "mms-bc1", "colour": 3})";
  }
  EXPECT_EQ(run({"solve", "--config", (dir / "bad.json").string()}).code, 1);
  {
    std::ofstream cfg(dir / "broken.json");
    cfg << "{not json";
  }
  EXPECT_EQ(run({"solve", "--config", (dir / "broken.json").string()}).code, 1);
}

TEST(Cli, ExportRoundTrip) {
  const CliRun r = run({"export", "--problem", "logistic-bc2", "--n", "100"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  const GridFunction u = read_csv(in);
  EXPECT_EQ(u.grid().intervals(), 100);
  EXPECT_EQ(to_csv(u), r.out);
}

TEST(Cli, VerifyAndSweeps) {
  const fs::path dir = scratch("verify");
  CliRun r = run({"verify", "--problem", "logistic-bc3", "--n", "200", "--out", dir.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  const auto j = load(dir / "verify_report.json");
  EXPECT_EQ(j.at("growth").at("all_passed"), true);
  EXPECT_EQ(j.at("meets_claim"), true);

  r = run({"sweep-theta", "--problem", "mms-bc2", "--n", "200", "--theta-steps", "4", "--out",
           dir.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir / "sweep_theta.csv"));

  // past the fold of the reverse-logistic branch the alpha sweep stops converging
  r = run({"sweep-alpha", "--problem", "reverse-logistic-bc1", "--n", "200", "--alpha0", "1",
           "--alpha-steps", "4", "--out", dir.string()});
  EXPECT_EQ(r.code, 2);
  std::ifstream table(dir / "sweep_alpha.csv");
  std::string header;
  std::getline(table, header);
  EXPECT_EQ(header, "alpha,converged,sup_norm,min_u");
}

TEST(Cli, HelpExitsZero) {
  EXPECT_EQ(run({"--help"}).code, 0);
}
