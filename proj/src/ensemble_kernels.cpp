#include "gspde/ensemble_kernels.hpp"

#include <vector>

#include "gspde/errors.hpp"
#include "gspde/rng.hpp"

namespace gspde::kernels {

namespace {

void check_correlate(const Eigen::MatrixXd& lower, std::span<const double> scales,
                     std::size_t n_paths, std::span<double> out) {
  const std::size_t m = std::size_t(lower.rows()) + 1;
  if (out.size() != n_paths * m * scales.size())
    throw DimensionMismatch("correlate_paths: output buffer has the wrong size");
}

}  // namespace

void correlate_paths_serial(const Eigen::MatrixXd& lower, std::span<const double> scales,
                            std::uint64_t seed, std::size_t n_paths, std::span<double> out) {
  check_correlate(lower, scales, n_paths, out);
  const std::size_t cells = std::size_t(lower.rows());
  const std::size_t m = cells + 1;
  const std::size_t d = scales.size();
  std::vector<double> z(cells);
  for (std::size_t p = 0; p < n_paths; ++p) {
    for (std::size_t c = 0; c < d; ++c) {
      NormalStream rng(seed, Stream::kGaussianPaths, p, c);
      for (auto& zi : z) zi = rng();
      double level = 0.0;
      out[(p * m) * d + c] = 0.0;
      for (std::size_t i = 0; i < cells; ++i) {
        double incr = 0.0;
        for (std::size_t j = 0; j <= i; ++j) incr += lower(Eigen::Index(i), Eigen::Index(j)) * z[j];
        level += incr;
        out[(p * m + i + 1) * d + c] = scales[c] * level;
      }
    }
  }
}

void correlate_paths_omp(const Eigen::MatrixXd& lower, std::span<const double> scales,
                         std::uint64_t seed, std::size_t n_paths, std::span<double> out) {
  check_correlate(lower, scales, n_paths, out);
  const Eigen::Index cells = lower.rows();
  const std::size_t m = std::size_t(cells) + 1;
  const std::size_t d = scales.size();
  const long long total = static_cast<long long>(n_paths * d);

#pragma omp parallel
  {
    Eigen::VectorXd z(cells);
    Eigen::VectorXd incr(cells);
#pragma omp for schedule(static)
    for (long long task = 0; task < total; ++task) {
      const std::size_t p = std::size_t(task) / d;
      const std::size_t c = std::size_t(task) % d;
      NormalStream rng(seed, Stream::kGaussianPaths, p, c);
      for (Eigen::Index i = 0; i < cells; ++i) z[i] = rng();
      incr.noalias() = lower.triangularView<Eigen::Lower>() * z;
      double level = 0.0;
      out[(p * m) * d + c] = 0.0;
      for (Eigen::Index i = 0; i < cells; ++i) {
        level += incr[i];
        out[(p * m + std::size_t(i) + 1) * d + c] = scales[c] * level;
      }
    }
  }
}

void accumulate_integrals_serial(std::span<const Eigen::MatrixXd> weights,
                                 std::span<const double> paths, std::size_t n_paths,
                                 std::size_t m, std::size_t n_coords, std::span<double> out) {
  if (weights.size() + 1 != m) throw DimensionMismatch("accumulate: one weight per cell required");
  const std::size_t dim = std::size_t(weights.front().rows());
  if (out.size() != n_paths * m * dim || paths.size() != n_paths * m * n_coords)
    throw DimensionMismatch("accumulate: buffer sizes do not match");
  for (std::size_t p = 0; p < n_paths; ++p) {
    std::vector<double> acc(dim, 0.0);
    for (std::size_t r = 0; r < dim; ++r) out[(p * m) * dim + r] = 0.0;
    for (std::size_t i = 0; i + 1 < m; ++i) {
      const Eigen::MatrixXd& W = weights[i];
      for (std::size_t r = 0; r < dim; ++r) {
        double s = 0.0;
        for (std::size_t c = 0; c < n_coords; ++c) {
          const double dG = paths[(p * m + i + 1) * n_coords + c] - paths[(p * m + i) * n_coords + c];
          s += W(Eigen::Index(r), Eigen::Index(c)) * dG;
        }
        acc[r] += s;
        out[(p * m + i + 1) * dim + r] = acc[r];
      }
    }
  }
}

void accumulate_integrals_omp(std::span<const Eigen::MatrixXd> weights,
                              std::span<const double> paths, std::size_t n_paths, std::size_t m,
                              std::size_t n_coords, std::span<double> out) {
  if (weights.size() + 1 != m) throw DimensionMismatch("accumulate: one weight per cell required");
  const Eigen::Index dim = weights.front().rows();
  const Eigen::Index nc = Eigen::Index(n_coords);
  if (out.size() != n_paths * m * std::size_t(dim) || paths.size() != n_paths * m * n_coords)
    throw DimensionMismatch("accumulate: buffer sizes do not match");
  const long long np = static_cast<long long>(n_paths);

#pragma omp parallel
  {
    Eigen::VectorXd acc(dim);
    Eigen::VectorXd dG(nc);
#pragma omp for schedule(static)
    for (long long pl = 0; pl < np; ++pl) {
      const std::size_t p = std::size_t(pl);
      acc.setZero();
      Eigen::Map<Eigen::VectorXd>(out.data() + p * m * std::size_t(dim), dim).setZero();
      for (std::size_t i = 0; i + 1 < m; ++i) {
        Eigen::Map<const Eigen::VectorXd> g0(paths.data() + (p * m + i) * n_coords, nc);
        Eigen::Map<const Eigen::VectorXd> g1(paths.data() + (p * m + i + 1) * n_coords, nc);
        dG = g1 - g0;
        acc.noalias() += weights[i] * dG;
        Eigen::Map<Eigen::VectorXd>(out.data() + (p * m + i + 1) * std::size_t(dim), dim) = acc;
      }
    }
  }
}

void rowwise_dot_serial(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, std::span<double> out) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || out.size() != std::size_t(a.rows()))
    throw DimensionMismatch("rowwise_dot: shapes differ");
  for (Eigen::Index p = 0; p < a.rows(); ++p) {
    double s = 0.0;
    for (Eigen::Index c = 0; c < a.cols(); ++c) s += a(p, c) * b(p, c);
    out[std::size_t(p)] = s;
  }
}

void rowwise_dot_omp(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, std::span<double> out) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || out.size() != std::size_t(a.rows()))
    throw DimensionMismatch("rowwise_dot: shapes differ");
  const long long rows = a.rows();
#pragma omp parallel for schedule(static)
  for (long long p = 0; p < rows; ++p) out[std::size_t(p)] = a.row(p).dot(b.row(p));
}

}  // namespace gspde::kernels
