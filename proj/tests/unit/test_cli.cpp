#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace {

namespace fs = std::filesystem;

constexpr double kSqrt2OverPi = 0.79788456080286535588;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = voi::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("voi_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }

  fs::path dir_;
};

TEST_F(CliTest, EstimateCubeReportsClosedForm) {
  const Result r = run({"estimate", "--d", "5", "--identity", "--set", "linf", "--n", "1000000", "--seed", "7"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["closed_form"].get<double>(), 5.0 * kSqrt2OverPi, 1e-12);
  EXPECT_LE(std::abs(j["mean"].get<double>() - 5.0 * kSqrt2OverPi), 3.0 * j["std_error"].get<double>());
  EXPECT_TRUE(j.contains("generated_at"));
}

TEST_F(CliTest, EstimateZeroOperator) {
  const std::string w = write("zero.mat", "3 3\n0 0 0\n0 0 0\n0 0 0\n");
  const Result r = run({"estimate", "--w", w, "--set", "l2", "--n", "1000"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["mean"].get<double>(), 0.0);
}

TEST_F(CliTest, MissingSetIsUsageError) {
  const Result r = run({"estimate", "--d", "3", "--identity"});
  EXPECT_EQ(r.code, 2);
  EXPECT_FALSE(r.err.empty());
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"estimate", "--set", "l2"}).code, 2);
  EXPECT_EQ(run({"estimate", "--d", "3", "--identity", "--set", "l7"}).code, 2);
  EXPECT_EQ(run({"estimate", "--d", "3", "--identity", "--set", "l2", "--n", "10"}).code, 2);
  EXPECT_EQ(run({"estimate", "--w", path("missing.mat"), "--set", "l2"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(CliTest, NonPsdOperatorIsNumericalFailure) {
  const std::string w = write("bad.mat", "2 2\n1 0\n0 -1\n");
  const Result r = run({"estimate", "--w", w, "--set", "l2", "--n", "1000"});
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(r.err.empty());
}

TEST_F(CliTest, CovarianceFileInput) {
  // Perfect signal: W = Sigma_theta = I.
  const std::string cov = write("joint.txt", "2 2\n1 0\n0 1\n1 0\n0 1\n1 0\n0 1\n");
  const Result r = run({"estimate", "--cov", cov, "--set", "linf", "--n", "1000", "--deterministic"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(nlohmann::json::parse(r.out)["closed_form"].get<double>(), 2.0 * kSqrt2OverPi, 1e-12);
}

TEST_F(CliTest, BoundsSandwich) {
  const Result r = run({"bounds", "--d", "16", "--identity", "--set", "l2", "--deterministic"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  const double mc = j["mc"].get<double>();
  EXPECT_LE(j["lower"].get<double>(), 10.0 * mc);
  EXPECT_LE(mc, 10.0 * j["upper"].get<double>());
  EXPECT_FALSE(j.contains("generated_at"));
}

TEST_F(CliTest, BoundsCsv) {
  const Result r = run({"bounds", "--d", "4", "--identity", "--set", "linf", "--n", "1000", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "d,set_kind,lower,mc,stderr,upper,n,seed,lambda_min,lambda_max");
}

TEST_F(CliTest, VerifyRandomPairs) {
  const Result r = run({"verify", "--d", "4", "--identity", "--pairs", "random:16", "--n", "100000"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["violations"].get<int>(), 0);
  EXPECT_EQ(j["pairs"].get<int>(), 16);
}

TEST_F(CliTest, VerifyPairsFile) {
  const std::string pairs = write("pairs.mat", "2 4\n1 0 0 0\n0.5 0.5 -0.5 0\n");
  const Result r = run({"verify", "--d", "2", "--band", "0.5,2", "--pairs", pairs, "--n", "10000"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["reports"].size(), 2u);
  const std::string wrong = write("wrong.mat", "1 3\n1 0 0\n");
  EXPECT_NE(run({"verify", "--d", "2", "--identity", "--pairs", wrong, "--n", "10000"}).code, 0);
}

TEST_F(CliTest, SweepWritesCsvAndSummary) {
  const std::string csv = path("sweep.csv");
  const std::string summary = path("summary.json");
  const Result r = run({"sweep", "--dims", "8,16,32,64", "--band", "0.5,2", "--set", "l2", "--n", "20000", "--seed",
                        "1", "--output", csv, "--summary", summary, "--deterministic"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  const std::string table = slurp(csv);
  EXPECT_EQ(table.substr(0, table.find('\n')), "d,replicate,seed,mc,stderr,lower,upper,lambda_min,lambda_max");
  EXPECT_EQ(std::count(table.begin(), table.end(), '\n'), 5);
  const auto j = nlohmann::json::parse(slurp(summary));
  const double slope = j["slopes"]["mc"]["slope"].get<double>();
  EXPECT_NEAR(slope, 0.5, 0.1);
}

TEST_F(CliTest, SweepSummaryOnStdoutWhenCsvGoesToFile) {
  const std::string csv = path("sweep.csv");
  const Result r = run({"sweep", "--dims", "2,4,8,16", "--band", "1,1", "--set", "linf", "--n", "1000", "--output",
                        csv, "--deterministic"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(nlohmann::json::parse(r.out).contains("slopes"));
}

TEST_F(CliTest, SweepMissingDimsIsUsageError) {
  EXPECT_EQ(run({"sweep", "--band", "0.5,2", "--set", "l2"}).code, 2);
  EXPECT_EQ(run({"sweep", "--dims", "8,4", "--band", "0.5,2", "--set", "l2"}).code, 2);
}

TEST_F(CliTest, SweepFailedCellsExitOne) {
  const Result r = run({"sweep", "--dims", "2,4,8,16", "--band", "1,1", "--set", "l2", "--n", "1000", "--nodes",
                        "8", "--deterministic"});
  EXPECT_EQ(r.code, 1);
}

TEST_F(CliTest, DeterministicAcrossThreads) {
  for (const std::string sub : {"estimate", "bounds"}) {
    const Result a = run({sub, "--d", "12", "--band", "0.5,2", "--set", "l2", "--n", "20000", "--seed", "3",
                          "--threads", "1", "--deterministic"});
    const Result b = run({sub, "--d", "12", "--band", "0.5,2", "--set", "l2", "--n", "20000", "--seed", "3",
                          "--threads", "4", "--deterministic"});
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out) << sub;
  }
  const Result a = run({"sweep", "--dims", "4,8", "--band", "0.5,2", "--set", "linf", "--n", "2000", "--replicates",
                        "2", "--threads", "1", "--deterministic"});
  const Result b = run({"sweep", "--dims", "4,8", "--band", "0.5,2", "--set", "linf", "--n", "2000", "--replicates",
                        "2", "--threads", "3", "--deterministic"});
  EXPECT_EQ(a.out, b.out);
}

TEST_F(CliTest, SeedChangesOutput) {
  const Result a = run({"estimate", "--d", "3", "--identity", "--set", "l2", "--n", "1000", "--seed", "1",
                        "--deterministic"});
  const Result b = run({"estimate", "--d", "3", "--identity", "--set", "l2", "--n", "1000", "--seed", "2",
                        "--deterministic"});
  EXPECT_NE(a.out, b.out);
}

TEST_F(CliTest, ConfigFileWithFlagOverride) {
  const std::string config = write("run.toml", "[estimate]\nd = 4\nidentity = true\nset = \"linf\"\nn = 1000\n");
  const Result from_file = run({"--config", config, "estimate", "--deterministic"});
  ASSERT_EQ(from_file.code, 0) << from_file.err;
  const auto j = nlohmann::json::parse(from_file.out);
  EXPECT_EQ(j["n_samples"].get<int>(), 1000);
  EXPECT_EQ(j["d"].get<int>(), 4);
  const Result overridden = run({"--config", config, "estimate", "--n", "2000", "--deterministic"});
  ASSERT_EQ(overridden.code, 0) << overridden.err;
  EXPECT_EQ(nlohmann::json::parse(overridden.out)["n_samples"].get<int>(), 2000);
}

TEST_F(CliTest, OutputFile) {
  const std::string out = path("est.json");
  const Result r = run({"estimate", "--d", "2", "--identity", "--set", "l2", "--n", "1000", "-o", out});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  EXPECT_NO_THROW(nlohmann::json::parse(slurp(out)));
}

}  // namespace
