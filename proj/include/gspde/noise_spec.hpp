#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <string>
#include <vector>

namespace gspde {

// Eigenvalues lambda_1..lambda_N of the covariance operator Q of
//   G(t) = sum_n sqrt(lambda_n) g_n(t) e_n,
// truncated to the first N terms. The series needs sum sqrt(lambda_n) < inf,
// which for a power law lambda_0 n^{-beta} means beta > 2.
class NoiseSpec {
 public:
  static NoiseSpec power_law(double lambda0, double beta, std::size_t n_terms);
  // A finite sequence; the truncation tail is zero by definition.
  static NoiseSpec explicit_values(std::vector<double> lambdas);

  std::size_t size() const { return lambdas_.size(); }
  const std::vector<double>& lambdas() const { return lambdas_; }
  double lambda(std::size_t n) const { return lambdas_[n]; }
  Eigen::VectorXd sqrt_lambdas() const;
  Eigen::MatrixXd covariance_operator() const;  // diag(lambda)
  double trace() const;

  // sum_{n > N} lambda_n from the decay law.
  double tail_trace() const;
  // Truncation error of E||G(t)||^2 given R(t, t).
  double truncation_error(double r_tt) const { return tail_trace() * r_tt; }

  std::string decay_law() const;
  bool is_power_law() const { return power_law_; }
  double lambda0() const { return lambda0_; }
  double beta() const { return beta_; }

 private:
  NoiseSpec() = default;

  std::vector<double> lambdas_;
  bool power_law_ = false;
  double lambda0_ = 0.0;
  double beta_ = 0.0;
};

}  // namespace gspde
