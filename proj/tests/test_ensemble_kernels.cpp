#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "gspde/ensemble_kernels.hpp"
#include "gspde/gaussian.hpp"
#include "gspde/kernel.hpp"

namespace k = gspde::kernels;

namespace {

Eigen::MatrixXd fbm_lower(std::size_t m) {
  const gspde::IncrementFactor f(gspde::CovarianceKernel::fbm(0.75),
                                 gspde::TimeGrid::uniform(1.0, m));
  return f.lower();
}

}  // namespace

namespace {

void expect_close(const std::vector<double>& a, const std::vector<double>& b) {
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-12 * (1.0 + std::abs(a[i]))) << i;
}

}  // namespace

TEST(EnsembleKernels, CorrelatePathsSerialEqualsOmp) {
  const std::size_t m = 33, n_paths = 57;
  const Eigen::MatrixXd lower = fbm_lower(m);
  const std::vector<double> scales{1.0, 0.5, 0.25};
  std::vector<double> a(n_paths * m * 3), b(a.size());
  k::correlate_paths_serial(lower, scales, 11, n_paths, a);
  k::correlate_paths_omp(lower, scales, 11, n_paths, b);
  expect_close(a, b);
  for (std::size_t p = 0; p < n_paths; ++p)
    for (std::size_t c = 0; c < 3; ++c) EXPECT_EQ(a[(p * m) * 3 + c], 0.0);
}

TEST(EnsembleKernels, AccumulateIntegralsSerialEqualsOmp) {
  const std::size_t m = 17, n_paths = 23, n_coords = 2, dim = 3;
  std::vector<double> paths(n_paths * m * n_coords);
  k::correlate_paths_serial(fbm_lower(m), std::vector<double>{1.0, 0.3}, 5, n_paths, paths);
  std::vector<Eigen::MatrixXd> weights;
  for (std::size_t i = 0; i + 1 < m; ++i)
    weights.push_back(Eigen::MatrixXd::Constant(dim, n_coords, 0.1 * double(i)) +
                      Eigen::MatrixXd::Identity(dim, n_coords));
  std::vector<double> a(n_paths * m * dim), b(a.size());
  k::accumulate_integrals_serial(weights, paths, n_paths, m, n_coords, a);
  k::accumulate_integrals_omp(weights, paths, n_paths, m, n_coords, b);
  expect_close(a, b);
  // unit weights on coordinate 0 of row 0 telescope to the path itself
  std::vector<Eigen::MatrixXd> unit(m - 1, Eigen::MatrixXd::Zero(1, n_coords));
  for (auto& w : unit) w(0, 0) = 1.0;
  std::vector<double> c(n_paths * m);
  k::accumulate_integrals_serial(unit, paths, n_paths, m, n_coords, c);
  for (std::size_t p = 0; p < n_paths; ++p)
    EXPECT_NEAR(c[p * m + m - 1], paths[(p * m + m - 1) * n_coords], 1e-13);
}

TEST(EnsembleKernels, RowwiseDotSerialEqualsOmp) {
  const Eigen::MatrixXd a = Eigen::MatrixXd::Random(101, 7);
  const Eigen::MatrixXd b = Eigen::MatrixXd::Random(101, 7);
  std::vector<double> s(101), o(101);
  k::rowwise_dot_serial(a, b, s);
  k::rowwise_dot_omp(a, b, o);
  expect_close(s, o);
  EXPECT_NEAR(s[3], a.row(3).dot(b.row(3)), 1e-14);
}
