#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "gspde/cli.hpp"
#include "gspde/errors.hpp"

namespace fs = std::filesystem;
using gspde::cli::ExitCode;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "gspde_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path file = dir / "config.json";
  std::ofstream(file) << text;
  return file;
}

int run_cli(const std::vector<std::string>& args, std::string* log_out = nullptr) {
  std::vector<std::string> storage{"gspde"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  std::ostringstream log, err;
  const int code = gspde::cli::run(int(argv.size()), argv.data(), log, err);
  if (log_out) *log_out = log.str() + err.str();
  return code;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

const char* kSmallSample = R"({
  "master_seed": 4,
  "kernel": {"type": "fbm", "H": 0.75},
  "grid": {"cells": 16},
  "sample": {"n_paths": 2000}
})";

}  // namespace

TEST(Cli, SampleSucceedsAndWritesOutputs) {
  const auto dir = scratch("sample");
  const auto cfg = write_config(dir, kSmallSample);
  EXPECT_EQ(run_cli({"sample", "--config", cfg.string(), "--out", (dir / "a").string()}), ExitCode::kOk);
  EXPECT_TRUE(fs::exists(dir / "a" / "ensemble.csv"));
  EXPECT_TRUE(fs::exists(dir / "a" / "ensemble.bin"));
  EXPECT_TRUE(fs::exists(dir / "a" / "fidelity.json"));
}

TEST(Cli, OutputsAreByteIdenticalAcrossRuns) {
  const auto dir = scratch("repeat");
  const auto cfg = write_config(dir, kSmallSample);
  ASSERT_EQ(run_cli({"sample", "--config", cfg.string(), "--out", (dir / "a").string()}), 0);
  ASSERT_EQ(run_cli({"sample", "--config", cfg.string(), "--out", (dir / "b").string(), "--jobs", "1"}), 0);
  for (const char* f : {"ensemble.csv", "ensemble.bin", "fidelity.json"})
    EXPECT_EQ(slurp(dir / "a" / f), slurp(dir / "b" / f)) << f;
  ASSERT_EQ(run_cli({"sample", "--config", cfg.string(), "--out", (dir / "c").string(), "--seed", "5"}), 0);
  EXPECT_NE(slurp(dir / "a" / "ensemble.csv"), slurp(dir / "c" / "ensemble.csv"));
}

TEST(Cli, ConfigErrorsExitTwo) {
  const auto dir = scratch("config_errors");
  std::string log;
  EXPECT_EQ(run_cli({"sample", "--config", (dir / "missing.json").string()}), ExitCode::kConfigError);
  const auto bad_json = write_config(dir, "{ \"kernel\": ");
  EXPECT_EQ(run_cli({"sample", "--config", bad_json.string()}), ExitCode::kConfigError);
  const auto zero_paths = write_config(dir, R"({"master_seed": 1, "kernel": {"type": "fbm", "H": 0.75}, "grid": {"cells": 8}, "sample": {"n_paths": 0}})");
  EXPECT_EQ(run_cli({"sample", "--config", zero_paths.string()}, &log), ExitCode::kConfigError);
  EXPECT_NE(log.find("n_paths"), std::string::npos) << log;
  const auto bad_h = write_config(dir, R"({"master_seed": 1, "kernel": {"type": "fbm", "H": 0.4}, "grid": {"cells": 8}, "sample": {"n_paths": 10}})");
  EXPECT_EQ(run_cli({"sample", "--config", bad_h.string()}), ExitCode::kConfigError);
  const auto no_seed = write_config(dir, R"({"kernel": {"type": "fbm", "H": 0.75}, "grid": {"cells": 8}, "sample": {"n_paths": 10}})");
  EXPECT_EQ(run_cli({"sample", "--config", no_seed.string()}, &log), ExitCode::kConfigError);
  EXPECT_NE(log.find("master_seed"), std::string::npos) << log;
  EXPECT_EQ(run_cli({"frobnicate", "--config", bad_h.string()}), ExitCode::kConfigError);
}

TEST(Cli, ContractViolationExitsTwo) {
  const auto dir = scratch("contract");
  const auto cfg = write_config(dir, R"({
    "master_seed": 1,
    "kernel": {"type": "fbm", "H": 0.75},
    "drift": {"type": "linear_heat", "n": 4},
    "diffusion": {"type": "lipschitz", "L": 8},
    "solver": {"dt": 0.25, "n_runs": 1}
  })");
  std::string log;
  EXPECT_EQ(run_cli({"solve", "--config", cfg.string(), "--out", dir.string()}, &log), ExitCode::kConfigError);
  EXPECT_NE(log.find("dt"), std::string::npos) << log;
}

TEST(Cli, InnerSolveFailureExitsThree) {
  const auto dir = scratch("numerical");
  const auto cfg = write_config(dir, R"({
    "master_seed": 1,
    "kernel": {"type": "fbm", "H": 0.75},
    "drift": {"type": "p_laplace", "p": 4, "n": 8},
    "x0": {"type": "mode", "mode": 1, "amplitude": 5.0},
    "solver": {"dt": 0.25, "n_runs": 1, "inner_max_iter": 1, "inner_tol": 1e-14}
  })");
  EXPECT_EQ(run_cli({"solve", "--config", cfg.string(), "--out", dir.string()}), ExitCode::kNumericalFailure);
}

TEST(Cli, InjectedWrongOracleExitsFour) {
  const auto dir = scratch("inject");
  const std::string body = R"({
    "master_seed": 3,
    "kernel": {"type": "fbm", "H": 0.75},
    "verify": {"checks": ["isometry"], "isometry_paths": 2000, "isometry_cells": 32,
               "isometry_rel_tol": 0.2, "inject_wrong_oracle": INJECT}
  })";
  auto with = [&](const char* v) {
    std::string s = body;
    s.replace(s.find("INJECT"), 6, v);
    return s;
  };
  const auto good = write_config(dir, with("false"));
  EXPECT_EQ(run_cli({"verify", "--config", good.string(), "--out", dir.string()}), ExitCode::kOk);
  const auto bad = write_config(dir, with("true"));
  EXPECT_EQ(run_cli({"verify", "--config", bad.string(), "--out", dir.string()}), ExitCode::kVerificationFailure);
  EXPECT_TRUE(fs::exists(dir / "verify_report.json"));
}

TEST(Cli, SolveWritesSolutionAndDiagnostics) {
  const auto dir = scratch("solve");
  const auto cfg = write_config(dir, R"({
    "master_seed": 2,
    "kernel": {"type": "fbm", "H": 0.75},
    "noise": {"type": "explicit", "lambdas": [1.0]},
    "drift": {"type": "linear_heat", "n": 4},
    "h": {"type": "rank1", "mode": 1},
    "solver": {"dt": 0.0625, "n_runs": 3}
  })");
  ASSERT_EQ(run_cli({"solve", "--config", cfg.string(), "--out", dir.string()}), ExitCode::kOk);
  std::ifstream csv(dir / "solution.csv");
  std::string line;
  while (std::getline(csv, line) && line.rfind("#", 0) == 0) {}
  EXPECT_EQ(line, "run,t,k,X,Y,w");
  EXPECT_TRUE(fs::exists(dir / "diagnostics.json"));
}

TEST(Cli, BinaryReportsExitCodes) {
  const auto dir = scratch("binary");
  const auto cfg = write_config(dir, kSmallSample);
  const std::string bin = GSPDE_CLI_PATH;
  const int ok = std::system((bin + " sample --config " + cfg.string() + " --out " + dir.string() + " > /dev/null").c_str());
  EXPECT_EQ(WEXITSTATUS(ok), 0);
  const int bad = std::system((bin + " sample --config " + (dir / "nope.json").string() + " 2> /dev/null").c_str());
  EXPECT_EQ(WEXITSTATUS(bad), 2);
}

TEST(Cli, ShippedConfigsParse) {
  for (const auto& entry : fs::directory_iterator(GSPDE_CONFIG_DIR)) {
    if (entry.path().extension() != ".json") continue;
    EXPECT_NO_THROW(gspde::cli::load_config(entry.path(), {})) << entry.path();
  }
}

TEST(Cli, DeterministicHeatMatchesModeOracle) {
  const auto dir = scratch("mode_oracle");
  const std::string cfg = std::string(GSPDE_CONFIG_DIR) + "/solve_heat_deterministic.json";
  std::string log;
  ASSERT_EQ(run_cli({"solve", "--config", cfg, "--out", dir.string()}, &log), ExitCode::kOk) << log;
  EXPECT_TRUE(fs::exists(dir / "mode_oracle.csv"));
  EXPECT_NE(log.find("PASS per-mode recursion"), std::string::npos) << log;
}
