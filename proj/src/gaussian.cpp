#include "gspde/gaussian.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "gspde/ensemble_kernels.hpp"
#include "gspde/errors.hpp"

namespace gspde {

namespace {

double evaluation_point(const TimeGrid& grid, std::size_t cell, EvaluationRule rule) {
  return rule == EvaluationRule::kMidpoint ? grid.midpoint(cell) : grid.node(cell);
}

struct Moments {
  double mean = 0.0;
  double sd = 0.0;
};

Moments mean_and_sd(std::span<const double> v) {
  const double n = double(v.size());
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, v.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0};
}

MonteCarloCheck make_check(std::span<const double> samples, double oracle, double z) {
  MonteCarloCheck c;
  const Moments mom = mean_and_sd(samples);
  c.mc_estimate = mom.mean;
  c.se = mom.sd / std::sqrt(double(samples.size()));
  c.quadrature_value = oracle;
  c.pass = std::abs(c.mc_estimate - oracle) <= z * c.se;
  return c;
}

// Per-path \int_0^T h dG as rows of an (n_paths x dim H) matrix.
Eigen::MatrixXd terminal_integrals(const PiecewiseFunction& h, const GaussianEnsemble& G,
                                   EvaluationRule rule) {
  const TimeGrid& grid = G.grid();
  const std::size_t m = grid.size();
  const std::size_t nc = G.n_coords();
  if (std::size_t(h.cols()) != nc)
    throw DimensionMismatch("integrand has " + std::to_string(h.cols()) +
                            " columns but the noise has " + std::to_string(nc) + " coordinates");
  std::vector<Eigen::MatrixXd> weights(grid.cells());
  for (std::size_t i = 0; i < grid.cells(); ++i) weights[i] = h(evaluation_point(grid, i, rule));

  Eigen::MatrixXd out(Eigen::Index(G.n_paths()), h.rows());
  const auto data = G.data();
  const long long np = static_cast<long long>(G.n_paths());
#pragma omp parallel
  {
    Eigen::VectorXd acc(h.rows());
    Eigen::VectorXd dG{Eigen::Index(nc)};
#pragma omp for schedule(static)
    for (long long pl = 0; pl < np; ++pl) {
      const std::size_t p = std::size_t(pl);
      acc.setZero();
      for (std::size_t i = 0; i + 1 < m; ++i) {
        for (std::size_t c = 0; c < nc; ++c)
          dG[Eigen::Index(c)] = data[(p * m + i + 1) * nc + c] - data[(p * m + i) * nc + c];
        acc.noalias() += weights[i] * dG;
      }
      out.row(pl) = acc.transpose();
    }
  }
  return out;
}

}  // namespace

GaussianEnsemble::GaussianEnsemble(TimeGrid grid, std::size_t n_paths, std::size_t n_coords,
                                   std::vector<double> data, std::uint64_t seed,
                                   std::string kernel_label)
    : grid_(std::move(grid)),
      n_paths_(n_paths),
      n_coords_(n_coords),
      data_(std::move(data)),
      seed_(seed),
      kernel_label_(std::move(kernel_label)) {
  if (data_.size() != n_paths_ * grid_.size() * n_coords_)
    throw DimensionMismatch("ensemble data does not match paths x nodes x coordinates");
}

GaussianEnsemble GaussianEnsemble::restrict_to(std::size_t stride) const {
  TimeGrid coarse = grid_.coarsen(stride);
  const std::size_t mc = coarse.size();
  const std::size_t m = grid_.size();
  std::vector<double> data(n_paths_ * mc * n_coords_);
  for (std::size_t p = 0; p < n_paths_; ++p)
    for (std::size_t i = 0; i < mc; ++i)
      for (std::size_t c = 0; c < n_coords_; ++c)
        data[(p * mc + i) * n_coords_ + c] = data_[(p * m + i * stride) * n_coords_ + c];
  return GaussianEnsemble(std::move(coarse), n_paths_, n_coords_, std::move(data), seed_,
                          kernel_label_);
}

Eigen::MatrixXd increment_covariance(const CovarianceKernel& k, const TimeGrid& grid) {
  if (grid.horizon() > k.horizon() * (1.0 + 1e-12))
    throw DomainError("time grid extends beyond the kernel horizon");
  const Eigen::Index d = Eigen::Index(grid.cells());
  Eigen::MatrixXd C(d, d);
  if (k.kind() == KernelKind::kStationaryFbm) {
    // Cov(dg_i, dg_j) = 1/2 (|t_{i+1} - t_j|^{2H} + |t_i - t_{j+1}|^{2H}
    //                       - |t_{i+1} - t_{j+1}|^{2H} - |t_i - t_j|^{2H})
    const double e = 2.0 * k.hurst();
    auto pw = [e](double x) { return std::pow(std::abs(x), e); };
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j <= i; ++j) {
        const double ti = grid.node(std::size_t(i)), ti1 = grid.node(std::size_t(i) + 1);
        const double tj = grid.node(std::size_t(j)), tj1 = grid.node(std::size_t(j) + 1);
        C(i, j) = C(j, i) = 0.5 * (pw(ti1 - tj) + pw(ti - tj1) - pw(ti1 - tj1) - pw(ti - tj));
      }
    }
    return C;
  }
  const std::size_t m = grid.size();
  Eigen::MatrixXd R{Eigen::Index(m), Eigen::Index(m)};
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j <= i; ++j)
      R(Eigen::Index(i), Eigen::Index(j)) = R(Eigen::Index(j), Eigen::Index(i)) =
          covariance_R(k, grid.node(i), grid.node(j));
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      C(i, j) = R(i + 1, j + 1) - R(i, j + 1) - R(i + 1, j) + R(i, j);
  return 0.5 * (C + C.transpose());
}

IncrementFactor::IncrementFactor(const CovarianceKernel& k, const TimeGrid& grid)
    : grid_(grid), kernel_label_(k.label()), covariance_(increment_covariance(k, grid)) {
  Eigen::LLT<Eigen::MatrixXd> llt(covariance_);
  if (llt.info() != Eigen::Success) {
    jitter_ = 1e-12 * covariance_.trace();
    Eigen::MatrixXd repaired = covariance_;
    repaired.diagonal().array() += jitter_;
    llt.compute(repaired);
    if (llt.info() != Eigen::Success) {
      std::ostringstream os;
      os << "increment covariance of " << k.label() << " on " << grid.size()
         << " nodes is indefinite beyond jitter " << jitter_;
      throw FactorizationError(os.str());
    }
  }
  lower_ = llt.matrixL();
}

GaussianEnsemble sample_scalar(const IncrementFactor& factor, std::size_t n_paths,
                               std::uint64_t seed, Backend backend) {
  if (n_paths < 1) throw DomainError("n_paths must be >= 1");
  const std::size_t m = factor.grid().size();
  std::vector<double> data(n_paths * m);
  const double scale[1] = {1.0};
  if (backend == Backend::kSerial)
    kernels::correlate_paths_serial(factor.lower(), scale, seed, n_paths, data);
  else
    kernels::correlate_paths_omp(factor.lower(), scale, seed, n_paths, data);
  return GaussianEnsemble(factor.grid(), n_paths, 1, std::move(data), seed, factor.kernel_label());
}

GaussianEnsemble sample_scalar(const CovarianceKernel& k, const TimeGrid& grid,
                               std::size_t n_paths, std::uint64_t seed, Backend backend) {
  if (n_paths < 1) throw DomainError("n_paths must be >= 1");
  return sample_scalar(IncrementFactor(k, grid), n_paths, seed, backend);
}

GaussianEnsemble sample_G(const IncrementFactor& factor, const NoiseSpec& spec,
                          std::size_t n_paths, std::uint64_t seed, Backend backend) {
  if (n_paths < 1) throw DomainError("n_paths must be >= 1");
  const std::size_t m = factor.grid().size();
  const std::size_t N = spec.size();
  std::vector<double> scales(N);
  for (std::size_t n = 0; n < N; ++n) scales[n] = std::sqrt(spec.lambda(n));
  std::vector<double> data(n_paths * m * N);
  if (backend == Backend::kSerial)
    kernels::correlate_paths_serial(factor.lower(), scales, seed, n_paths, data);
  else
    kernels::correlate_paths_omp(factor.lower(), scales, seed, n_paths, data);
  return GaussianEnsemble(factor.grid(), n_paths, N, std::move(data), seed, factor.kernel_label());
}

GaussianEnsemble sample_G(const CovarianceKernel& k, const NoiseSpec& spec, const TimeGrid& grid,
                          std::size_t n_paths, std::uint64_t seed, Backend backend) {
  if (n_paths < 1) throw DomainError("n_paths must be >= 1");
  return sample_G(IncrementFactor(k, grid), spec, n_paths, seed, backend);
}

Eigen::MatrixXd integrate_scalar(const PiecewiseFunction& f, const GaussianEnsemble& e,
                                 EvaluationRule rule) {
  if (f.cols() != 1) throw DimensionMismatch("integrate_scalar needs a vector-valued integrand");
  if (e.n_coords() != 1) throw DimensionMismatch("integrate_scalar needs a scalar ensemble");
  return terminal_integrals(f, e, rule);
}

void OperatorValuedIntegrand::validate(double kernel_p) const {
  if (p_eps_exponent && !(*p_eps_exponent > kernel_p)) {
    std::ostringstream os;
    os << "declared integrability exponent " << *p_eps_exponent << " must exceed p = " << kernel_p;
    throw DomainError(os.str());
  }
  std::vector<double> probes;
  for (const auto& piece : h.pieces()) {
    probes.push_back(piece.lo);
    probes.push_back(0.5 * (piece.lo + piece.hi));
  }
  probes.push_back(h.horizon());
  std::vector<bool> in_range(dim_h(), !range_projection.has_value());
  if (range_projection) {
    for (std::size_t idx : *range_projection) {
      if (idx >= dim_h())
        throw RangeError("projection index " + std::to_string(idx) + " outside the coefficient space");
      in_range[idx] = true;
    }
  }
  for (double t : probes) {
    const Eigen::MatrixXd v = h(t);
    if (!v.allFinite()) throw DomainError("integrand h is not finite at t = " + std::to_string(t));
    for (std::size_t r = 0; r < dim_h(); ++r)
      if (!in_range[r] && !v.row(Eigen::Index(r)).isZero(0.0))
        throw RangeError("h has components outside its declared projection range (row " +
                         std::to_string(r) + ")");
  }
}

Eigen::MatrixXd NoisePaths::path_matrix(std::size_t path) const {
  Eigen::MatrixXd out(Eigen::Index(grid.size()), Eigen::Index(dim));
  for (std::size_t k = 0; k < grid.size(); ++k) out.row(Eigen::Index(k)) = at(path, k).transpose();
  return out;
}

NoisePaths integrate_operator(const OperatorValuedIntegrand& h, const GaussianEnsemble& G,
                              EvaluationRule rule, Backend backend) {
  if (h.dim_u() != G.n_coords())
    throw DimensionMismatch("h has " + std::to_string(h.dim_u()) +
                            " columns but G has " + std::to_string(G.n_coords()) + " coordinates");
  const TimeGrid& grid = G.grid();
  std::vector<Eigen::MatrixXd> weights(grid.cells());
  for (std::size_t i = 0; i < grid.cells(); ++i) weights[i] = h.h(evaluation_point(grid, i, rule));
  NoisePaths w{grid, G.n_paths(), h.dim_h(), std::vector<double>(G.n_paths() * grid.size() * h.dim_h())};
  if (backend == Backend::kSerial)
    kernels::accumulate_integrals_serial(weights, G.data(), G.n_paths(), grid.size(), G.n_coords(),
                                         w.data);
  else
    kernels::accumulate_integrals_omp(weights, G.data(), G.n_paths(), grid.size(), G.n_coords(),
                                      w.data);
  return w;
}

double z_for_confidence(double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) throw DomainError("confidence must lie in (0, 1)");
  boost::math::normal_distribution<double> nd;
  return boost::math::quantile(nd, 0.5 + 0.5 * confidence);
}

double confidence_for_z(double z) { return std::erf(z / std::sqrt(2.0)); }

double MonteCarloCheck::deviation_in_se() const {
  const double diff = std::abs(mc_estimate - quadrature_value);
  if (se > 0.0) return diff / se;
  return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

MonteCarloCheck verify_isometry(const PiecewiseFunction& f, const PiecewiseFunction& h,
                                const CovarianceKernel& k, const GaussianEnsemble& e,
                                double confidence) {
  const Eigen::MatrixXd If = integrate_scalar(f, e, EvaluationRule::kMidpoint);
  const Eigen::MatrixXd Ih = integrate_scalar(h, e, EvaluationRule::kMidpoint);
  std::vector<double> products(e.n_paths());
  kernels::rowwise_dot_omp(If, Ih, products);
  return make_check(products, weighted_double_integral(k, f, h), z_for_confidence(confidence));
}

double integral_pairing_oracle(const PiecewiseFunction& h1, const PiecewiseFunction& h2,
                             const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                             const NoiseSpec& spec, const CovarianceKernel& k) {
  const Eigen::MatrixXd root = spec.sqrt_lambdas().asDiagonal();
  // <h2(s') Q h1(s)^* x, y> = <Q^{1/2} h1(s)^T x, Q^{1/2} h2(s')^T y>
  return weighted_double_integral(k, h1.times(root).transpose_times(x),
                                  h2.times(root).transpose_times(y));
}

double integral_trace_oracle(const PiecewiseFunction& h1, const PiecewiseFunction& h2,
                           const NoiseSpec& spec, const CovarianceKernel& k) {
  const Eigen::MatrixXd root = spec.sqrt_lambdas().asDiagonal();
  // Tr(h2(s') Q h1(s)^*) = <h1(s) Q^{1/2}, h2(s') Q^{1/2}>_F
  return weighted_double_integral(k, h1.times(root), h2.times(root));
}

IntegralCovarianceReport verify_integral_covariance(const OperatorValuedIntegrand& h1, const OperatorValuedIntegrand& h2,
                           const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                           const NoiseSpec& spec, const CovarianceKernel& k,
                           const GaussianEnsemble& G, double confidence) {
  if (h1.dim_h() != h2.dim_h() || h1.dim_u() != h2.dim_u())
    throw DimensionMismatch("h1 and h2 must share their shape");
  if (std::size_t(x.size()) != h1.dim_h() || std::size_t(y.size()) != h1.dim_h())
    throw DimensionMismatch("x and y must live in the range space of h");
  if (h1.dim_u() != spec.size() || G.n_coords() != spec.size())
    throw DimensionMismatch("noise truncation does not match the integrands");

  const Eigen::MatrixXd I1 = terminal_integrals(h1.h, G, EvaluationRule::kMidpoint);
  const Eigen::MatrixXd I2 = terminal_integrals(h2.h, G, EvaluationRule::kMidpoint);
  const Eigen::VectorXd px = I1 * x;
  const Eigen::VectorXd py = I2 * y;
  std::vector<double> pairing(G.n_paths());
  for (std::size_t p = 0; p < G.n_paths(); ++p)
    pairing[p] = px[Eigen::Index(p)] * py[Eigen::Index(p)];
  std::vector<double> inner(G.n_paths());
  kernels::rowwise_dot_omp(I1, I2, inner);

  const double z = z_for_confidence(confidence);
  IntegralCovarianceReport report;
  report.pairing = make_check(pairing, integral_pairing_oracle(h1.h, h2.h, x, y, spec, k), z);
  report.trace = make_check(inner, integral_trace_oracle(h1.h, h2.h, spec, k), z);
  return report;
}

CovarianceFidelity covariance_fidelity(const GaussianEnsemble& e, const CovarianceKernel& k,
                                       std::size_t n_sub, double z, std::size_t coord,
                                       double scale) {
  const TimeGrid& grid = e.grid();
  if (n_sub < 1 || n_sub > grid.cells()) throw DomainError("subgrid size out of range");
  CovarianceFidelity out;
  for (std::size_t j = 1; j <= n_sub; ++j)
    out.nodes.push_back(std::size_t(std::llround(double(j) * double(grid.cells()) / double(n_sub))));
  const Eigen::Index s = Eigen::Index(n_sub);
  out.empirical.resize(s, s);
  out.exact.resize(s, s);
  out.se.resize(s, s);
  std::vector<double> prod(e.n_paths());
  out.pass = true;
  for (Eigen::Index a = 0; a < s; ++a) {
    for (Eigen::Index b = 0; b < s; ++b) {
      const std::size_t ia = out.nodes[std::size_t(a)], ib = out.nodes[std::size_t(b)];
      for (std::size_t p = 0; p < e.n_paths(); ++p)
        prod[p] = e.value(p, ia, coord) * e.value(p, ib, coord);
      const Moments mom = mean_and_sd(prod);
      out.empirical(a, b) = mom.mean;
      out.se(a, b) = mom.sd / std::sqrt(double(e.n_paths()));
      out.exact(a, b) = scale * scale * covariance_R(k, grid.node(ia), grid.node(ib));
      const double dev = std::abs(out.empirical(a, b) - out.exact(a, b)) / out.se(a, b);
      out.max_deviation_in_se = std::max(out.max_deviation_in_se, dev);
      if (!(dev <= z)) out.pass = false;
    }
  }
  return out;
}

NormalityStats normality_stats(const GaussianEnsemble& e, std::size_t node, std::size_t coord) {
  const double n = double(e.n_paths());
  double mean = 0.0;
  for (std::size_t p = 0; p < e.n_paths(); ++p) mean += e.value(p, node, coord);
  mean /= n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (std::size_t p = 0; p < e.n_paths(); ++p) {
    const double d = e.value(p, node, coord) - mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  NormalityStats s;
  s.skewness = m3 / std::pow(m2, 1.5);
  s.excess_kurtosis = m4 / (m2 * m2) - 3.0;
  s.se_skewness = std::sqrt(6.0 / n);
  s.se_kurtosis = std::sqrt(24.0 / n);
  return s;
}

double max_increment_quantile(const NoisePaths& w, double q) {
  if (w.n_paths == 0) throw DomainError("no paths");
  std::vector<double> maxima(w.n_paths, 0.0);
  for (std::size_t p = 0; p < w.n_paths; ++p)
    for (std::size_t k = 0; k + 1 < w.grid.size(); ++k)
      maxima[p] = std::max(maxima[p], (w.at(p, k + 1) - w.at(p, k)).norm());
  const std::size_t idx = std::min(w.n_paths - 1, std::size_t(q * double(w.n_paths - 1) + 0.5));
  std::nth_element(maxima.begin(), maxima.begin() + std::ptrdiff_t(idx), maxima.end());
  return maxima[idx];
}

}  // namespace gspde
