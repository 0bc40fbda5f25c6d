#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "gspde/gaussian.hpp"
#include "gspde/kernel.hpp"
#include "gspde/noise_spec.hpp"
#include "gspde/operators.hpp"
#include "gspde/solver.hpp"

namespace gspde::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kNumericalFailure = 3,
  kVerificationFailure = 4,
};

// Reads fields of a JSON object, recording defaults into the resolved copy
// and raising ConfigError with the field path ("/solver/dt") on bad input.
class Reader {
 public:
  Reader(nlohmann::json& node, std::string path) : node_(node), path_(std::move(path)) {}

  bool has(const std::string& key) const { return node_.contains(key); }
  const std::string& path() const { return path_; }
  std::string field(const std::string& key) const { return path_ + "/" + key; }

  Reader child(const std::string& key);
  double number(const std::string& key);
  double number(const std::string& key, double fallback);
  std::uint64_t integer(const std::string& key);
  std::uint64_t integer(const std::string& key, std::uint64_t fallback);
  std::string string(const std::string& key);
  std::string string(const std::string& key, const std::string& fallback);
  bool boolean(const std::string& key, bool fallback);
  std::vector<double> numbers(const std::string& key);
  std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback);
  std::vector<std::string> strings(const std::string& key, const std::vector<std::string>& fallback);
  nlohmann::json& raw() { return node_; }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const;

 private:
  nlohmann::json& node_;
  std::string path_;
};

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
};

struct ExperimentConfig {
  nlohmann::json resolved;  // input with overrides and defaults filled in
  std::uint64_t master_seed = 0;
  std::filesystem::path output_dir;
  // Derived from master_seed unless given explicitly.
  std::uint64_t seed_G = 0;
  std::uint64_t seed_W = 0;
};

// Parses JSON text; syntax errors carry line and column.
ExperimentConfig parse_config(const std::string& text, const Overrides& overrides);
ExperimentConfig load_config(const std::filesystem::path& file, const Overrides& overrides);

CovarianceKernel build_kernel(Reader r);
NoiseSpec build_noise(Reader r);
TimeGrid build_grid(Reader r, double horizon);
PiecewiseFunction build_scalar_function(const std::string& name, double horizon,
                                        const std::string& field);

struct OperatorSetup {
  GalerkinSpace space;
  DriftOperator drift;
};
OperatorSetup build_drift(Reader r);
DiffusionOperator build_diffusion(Reader r, const GalerkinSpace& space);
OperatorValuedIntegrand build_h(Reader r, std::size_t dim_h, std::size_t dim_u, double horizon);
Eigen::VectorXd build_x0(Reader r, std::size_t dim, double* x0_std);
SolverConfig build_solver(Reader r, const ExperimentConfig& cfg, double horizon);

// Header lines ("# " is added by the writers) carrying the command, the
// resolved config and the seeds.
std::vector<std::string> header_lines(const std::string& command, const ExperimentConfig& cfg);

int cmd_sample(ExperimentConfig& cfg, std::ostream& log);
int cmd_verify(ExperimentConfig& cfg, std::ostream& log);
int cmd_solve(ExperimentConfig& cfg, std::ostream& log);
int cmd_rates(ExperimentConfig& cfg, std::ostream& log);

// Full front end: argument parsing, dispatch and the exit-code contract.
int run(int argc, char** argv, std::ostream& log, std::ostream& err);

}  // namespace gspde::cli
