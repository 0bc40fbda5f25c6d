#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "gspde/gaussian.hpp"
#include "gspde/kernel.hpp"
#include "gspde/noise_spec.hpp"
#include "gspde/operators.hpp"
#include "gspde/time_grid.hpp"

namespace gspde {

enum class InnerMethod { kNewton, kDampedFixedPoint };
enum class InnerInit { kPrevious, kZero };

struct SolverConfig {
  double horizon = 1.0;
  double dt = 1.0 / 64.0;
  double inner_tol = 1e-10;
  int inner_max_iter = 200;
  InnerMethod inner_method = InnerMethod::kNewton;
  InnerInit inner_init = InnerInit::kPrevious;
  std::uint64_t seed_W = 1;
  std::uint64_t seed_G = 2;
  EvaluationRule rule = EvaluationRule::kLeftEndpoint;
  Backend backend = Backend::kOpenMP;

  // Throws DomainError unless dt divides the horizon and tolerances are positive.
  void validate() const;
  std::size_t steps() const;
  TimeGrid grid() const;
};

// dt * max(0, c) < 1, else ContractError.
void check_contract(const DriftOperator& a, double dt);

struct StepResult {
  Eigen::VectorXd value;
  int iterations = 0;
  double residual = 0.0;
};

// Solves v - dt A(t, v) = rhs to an H-norm residual <= inner_tol.
StepResult implicit_step(const DriftOperator& a, double t, double dt, const Eigen::VectorXd& rhs,
                         const Eigen::VectorXd& guess, const SolverConfig& cfg, int step_index);

struct TransformedPath {
  TimeGrid grid;
  Eigen::MatrixXd Y;  // nodes x n
  std::vector<int> iterations;
  std::vector<double> residuals;
};

// Drift-implicit Euler for dY = A(t, Y) dt + B(t, Y) dW; dW has one row per
// step and one column per noise coordinate.
TransformedPath solve_transformed(const DriftOperator& a, const DiffusionOperator& b,
                                  const Eigen::VectorXd& y0, const SolverConfig& cfg,
                                  const Eigen::MatrixXd& dW);

struct SolutionPath {
  TimeGrid grid;
  Eigen::MatrixXd X;
  Eigen::MatrixXd Y;
  Eigen::MatrixXd w;
  std::vector<int> iterations;
  std::vector<double> residuals;
};

struct SpdeProblem {
  DriftOperator drift;
  DiffusionOperator diffusion;
  OperatorValuedIntegrand h;
  CovarianceKernel kernel;
  NoiseSpec spec;
  Eigen::VectorXd x0;
  // X0 = x0 + x0_std * z with z from the initial-condition stream of the run.
  double x0_std = 0.0;
};

// i.i.d. N(0, dt) increments, steps x dim, from the Wiener substream of the run.
Eigen::MatrixXd brownian_increments(std::uint64_t seed, std::size_t run, std::size_t steps,
                                    std::size_t dim, double dt);
// Sums of consecutive groups of stride rows.
Eigen::MatrixXd aggregate_increments(const Eigen::MatrixXd& dW, std::size_t stride);

Eigen::VectorXd initial_condition(const SpdeProblem& problem, std::uint64_t seed, std::size_t run);

// Run r uses path r of G (seed_G) and the Wiener substream r (seed_W).
std::vector<SolutionPath> solve_ensemble(const SpdeProblem& problem, const SolverConfig& cfg,
                                         std::size_t n_runs);
SolutionPath solve_spde(const SpdeProblem& problem, const SolverConfig& cfg);

// Given w on the solver grid, solve the transformed equation and add w back.
SolutionPath solve_with_noise_path(const SpdeProblem& problem, const SolverConfig& cfg,
                                   const Eigen::MatrixXd& w, const Eigen::MatrixXd& dW,
                                   const Eigen::VectorXd& x0);

struct MomentEstimates {
  double sup_t_mean_H2 = 0.0;
  std::size_t sup_node = 0;
  double mean_V_alpha = 0.0;
};
MomentEstimates estimate_moments(const std::vector<SolutionPath>& runs, const GalerkinSpace& space,
                                 double alpha);

struct RateTable {
  std::vector<double> dt;
  std::vector<double> error;  // E ||X_dt(T) - X_ref(T)||_H
  std::vector<double> se;
  double reference_dt = 0.0;
  double slope = 0.0;
};

// Reference at min(dt) / 4 with shared noise: W increments aggregated from
// the finest grid, G sampled on the finest grid and restricted.
RateTable convergence_study(const SpdeProblem& problem, const SolverConfig& cfg,
                            const std::vector<double>& dt_list, std::size_t n_runs);

}  // namespace gspde
