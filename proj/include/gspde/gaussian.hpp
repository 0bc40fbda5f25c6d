#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gspde/kernel.hpp"
#include "gspde/noise_spec.hpp"
#include "gspde/piecewise_function.hpp"
#include "gspde/time_grid.hpp"

namespace gspde {

enum class Backend { kSerial, kOpenMP };

// Where a deterministic integrand is sampled on each grid cell of a
// Riemann-Stieltjes sum. Both rules are exact for step functions that are
// constant on grid cells; the midpoint rule has O(dt^2) bias for smooth
// integrands against O(dt) for the left endpoint.
enum class EvaluationRule { kLeftEndpoint, kMidpoint };

// Seeded sample of n_paths paths on a grid, scalar (n_coords = 1) or
// U-valued (n_coords = N).
class GaussianEnsemble {
 public:
  GaussianEnsemble(TimeGrid grid, std::size_t n_paths, std::size_t n_coords,
                   std::vector<double> data, std::uint64_t seed, std::string kernel_label);

  const TimeGrid& grid() const { return grid_; }
  std::size_t n_paths() const { return n_paths_; }
  std::size_t n_coords() const { return n_coords_; }
  std::uint64_t seed() const { return seed_; }
  const std::string& kernel_label() const { return kernel_label_; }

  double value(std::size_t path, std::size_t node, std::size_t coord = 0) const {
    return data_[(path * grid_.size() + node) * n_coords_ + coord];
  }
  std::span<const double> data() const { return data_; }

  // The same paths on every stride-th node.
  GaussianEnsemble restrict_to(std::size_t stride) const;

  bool operator==(const GaussianEnsemble&) const = default;

 private:
  TimeGrid grid_;
  std::size_t n_paths_;
  std::size_t n_coords_;
  std::vector<double> data_;
  std::uint64_t seed_;
  std::string kernel_label_;
};

// Cholesky factor of the covariance of the increments g(t_{i+1}) - g(t_i).
// For fBm the entries are exact second differences of the closed-form R.
// On failure the diagonal receives 1e-12 * trace once before giving up.
class IncrementFactor {
 public:
  IncrementFactor(const CovarianceKernel& k, const TimeGrid& grid);

  const TimeGrid& grid() const { return grid_; }
  const Eigen::MatrixXd& covariance() const { return covariance_; }
  const Eigen::MatrixXd& lower() const { return lower_; }
  double jitter() const { return jitter_; }
  const std::string& kernel_label() const { return kernel_label_; }

 private:
  TimeGrid grid_;
  std::string kernel_label_;
  Eigen::MatrixXd covariance_;
  Eigen::MatrixXd lower_;
  double jitter_ = 0.0;
};

Eigen::MatrixXd increment_covariance(const CovarianceKernel& k, const TimeGrid& grid);

GaussianEnsemble sample_scalar(const CovarianceKernel& k, const TimeGrid& grid,
                               std::size_t n_paths, std::uint64_t seed,
                               Backend backend = Backend::kOpenMP);
GaussianEnsemble sample_scalar(const IncrementFactor& factor, std::size_t n_paths,
                               std::uint64_t seed, Backend backend = Backend::kOpenMP);

// Coordinates sqrt(lambda_n) g_n(t) built from N independent copies g_n.
// Coordinate 0 of path p uses the same substream as scalar path p.
GaussianEnsemble sample_G(const CovarianceKernel& k, const NoiseSpec& spec, const TimeGrid& grid,
                          std::size_t n_paths, std::uint64_t seed,
                          Backend backend = Backend::kOpenMP);
GaussianEnsemble sample_G(const IncrementFactor& factor, const NoiseSpec& spec,
                          std::size_t n_paths, std::uint64_t seed,
                          Backend backend = Backend::kOpenMP);

// Per-path \int_0^T f dg as a row of an (n_paths x dim f) matrix.
Eigen::MatrixXd integrate_scalar(const PiecewiseFunction& f, const GaussianEnsemble& e,
                                 EvaluationRule rule = EvaluationRule::kLeftEndpoint);

// h in L^p([0, T]; L(U, H)) in coefficients: dim H x N matrices.
struct OperatorValuedIntegrand {
  PiecewiseFunction h;
  // p + eps of the integrability assumption, when declared; enables the
  // continuity proxy.
  std::optional<double> p_eps_exponent;
  // H-coefficient indices spanning a finite-dimensional range that contains
  // the range of h, when h = P h for an orthogonal projection P.
  std::optional<std::vector<std::size_t>> range_projection;

  std::size_t dim_h() const { return std::size_t(h.rows()); }
  std::size_t dim_u() const { return std::size_t(h.cols()); }
  // Throws DomainError / RangeError when the declared data is inconsistent.
  void validate(double kernel_p) const;
};

// H-valued paths w(p, t_k), layout [(p * m + k) * dim + r].
struct NoisePaths {
  TimeGrid grid;
  std::size_t n_paths = 0;
  std::size_t dim = 0;
  std::vector<double> data;

  Eigen::Map<const Eigen::VectorXd> at(std::size_t path, std::size_t node) const {
    return {data.data() + (path * grid.size() + node) * dim, Eigen::Index(dim)};
  }
  // Single path as an (m x dim) matrix.
  Eigen::MatrixXd path_matrix(std::size_t path) const;
};

// w(t_k) = sum_n sqrt(lambda_n) \int_0^{t_k} h(s) e_n dg_n(s); the coordinates
// of G already carry sqrt(lambda_n).
NoisePaths integrate_operator(const OperatorValuedIntegrand& h, const GaussianEnsemble& G,
                              EvaluationRule rule = EvaluationRule::kLeftEndpoint,
                              Backend backend = Backend::kOpenMP);

double z_for_confidence(double confidence);
double confidence_for_z(double z);
inline const double kThreeSigma = 0.99730020393673979;

struct MonteCarloCheck {
  double mc_estimate = 0.0;
  double quadrature_value = 0.0;
  double se = 0.0;
  bool pass = false;
  double deviation_in_se() const;
};

// E <\int f dg, \int h dg> against \int\int <f(s), h(s')> phi(s, s') ds ds'.
// The stochastic integrals use the midpoint rule.
MonteCarloCheck verify_isometry(const PiecewiseFunction& f, const PiecewiseFunction& h,
                                const CovarianceKernel& k, const GaussianEnsemble& e,
                                double confidence = kThreeSigma);

struct IntegralCovarianceReport {
  MonteCarloCheck pairing;  // E(<I1, x><I2, y>)
  MonteCarloCheck trace;    // E<I1, I2>
};

// Both covariance identities of the H-valued integral against dG:
//   E(<I1, x><I2, y>) = \int\int <h2(s') Q h1(s)^* x, y> phi ds ds'
//   E<I1, I2>         = \int\int Tr(h2(s') Q h1(s)^*) phi ds ds'
// with I_j = \int_0^T h_j dG.
IntegralCovarianceReport verify_integral_covariance(const OperatorValuedIntegrand& h1, const OperatorValuedIntegrand& h2,
                           const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                           const NoiseSpec& spec, const CovarianceKernel& k,
                           const GaussianEnsemble& G, double confidence = kThreeSigma);

// Right-hand sides of the two identities, via weighted_double_integral.
double integral_pairing_oracle(const PiecewiseFunction& h1, const PiecewiseFunction& h2,
                             const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                             const NoiseSpec& spec, const CovarianceKernel& k);
double integral_trace_oracle(const PiecewiseFunction& h1, const PiecewiseFunction& h2,
                           const NoiseSpec& spec, const CovarianceKernel& k);

struct CovarianceFidelity {
  std::vector<std::size_t> nodes;
  Eigen::MatrixXd empirical;
  Eigen::MatrixXd exact;
  Eigen::MatrixXd se;
  double max_deviation_in_se = 0.0;
  bool pass = false;
};

// Empirical E[g(t_i) g(t_j)] on n_sub nodes spread over the grid (node 0
// excluded) against R(t_i, t_j), entrywise within z standard errors.
CovarianceFidelity covariance_fidelity(const GaussianEnsemble& e, const CovarianceKernel& k,
                                       std::size_t n_sub = 8, double z = 3.0,
                                       std::size_t coord = 0, double scale = 1.0);

struct NormalityStats {
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
  double se_skewness = 0.0;
  double se_kurtosis = 0.0;
};
NormalityStats normality_stats(const GaussianEnsemble& e, std::size_t node, std::size_t coord = 0);

// q-quantile over paths of max_k ||w(t_{k+1}) - w(t_k)||.
double max_increment_quantile(const NoisePaths& w, double q);

}  // namespace gspde
