#include <gtest/gtest.h>

#include <cmath>

#include "gspde/errors.hpp"
#include "gspde/gaussian.hpp"

using namespace gspde;

TEST(Gaussian, IncrementCovarianceSumsToR) {
  const auto k = CovarianceKernel::fbm(0.75);
  const auto grid = TimeGrid::uniform(1.0, 9);
  const Eigen::MatrixXd c = increment_covariance(k, grid);
  // Var g(1) is the sum of all increment covariances
  EXPECT_NEAR(c.sum(), 1.0, 1e-13);
  EXPECT_NEAR(c.topLeftCorner(4, 4).sum(), std::pow(0.5, 1.5), 1e-13);
  EXPECT_TRUE(c.isApprox(c.transpose()));
}

TEST(Gaussian, SameSeedSameEnsemble) {
  const auto k = CovarianceKernel::fbm(0.6);
  const auto grid = TimeGrid::uniform(1.0, 17);
  const auto a = sample_scalar(k, grid, 50, 3);
  EXPECT_EQ(a, sample_scalar(k, grid, 50, 3));
  const auto b = sample_scalar(k, grid, 50, 3, Backend::kSerial);
  for (std::size_t i = 0; i < a.data().size(); ++i) EXPECT_NEAR(a.data()[i], b.data()[i], 1e-12);
  EXPECT_NE(a.data()[20], sample_scalar(k, grid, 50, 4).data()[20]);
}

TEST(Gaussian, PathPrefixIsStable) {
  // adding paths must not change earlier ones
  const auto k = CovarianceKernel::fbm(0.75);
  const auto grid = TimeGrid::uniform(1.0, 9);
  const auto small = sample_scalar(k, grid, 5, 9);
  const auto large = sample_scalar(k, grid, 50, 9);
  for (std::size_t p = 0; p < 5; ++p)
    for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_EQ(small.value(p, i), large.value(p, i));
}

TEST(Gaussian, CoordinateZeroOfGMatchesScalar) {
  const auto k = CovarianceKernel::fbm(0.75);
  const auto grid = TimeGrid::uniform(1.0, 9);
  const auto spec = NoiseSpec::explicit_values({4.0, 1.0});
  const auto G = sample_G(k, spec, grid, 10, 21);
  const auto g = sample_scalar(k, grid, 10, 21);
  for (std::size_t p = 0; p < 10; ++p)
    for (std::size_t i = 0; i < grid.size(); ++i)
      EXPECT_DOUBLE_EQ(G.value(p, i, 0), 2.0 * g.value(p, i));
}

TEST(Gaussian, RestrictKeepsPathValues) {
  const auto k = CovarianceKernel::fbm(0.75);
  const auto e = sample_scalar(k, TimeGrid::uniform(1.0, 17), 4, 1);
  const auto r = e.restrict_to(4);
  ASSERT_EQ(r.grid().size(), 5u);
  for (std::size_t p = 0; p < 4; ++p)
    for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(r.value(p, i), e.value(p, 4 * i));
  EXPECT_THROW(e.restrict_to(3), DomainError);
}

TEST(Gaussian, CovarianceFidelity) {
  const auto k = CovarianceKernel::fbm(0.75);
  const auto e = sample_scalar(k, TimeGrid::uniform(1.0, 33), 20000, 17);
  const auto f = covariance_fidelity(e, k);
  EXPECT_TRUE(f.pass) << f.max_deviation_in_se;
}

TEST(Gaussian, MarginalsLookNormal) {
  const auto k = CovarianceKernel::fbm(0.75);
  const auto e = sample_scalar(k, TimeGrid::uniform(1.0, 9), 20000, 5);
  const auto s = normality_stats(e, 8);
  EXPECT_LT(std::abs(s.skewness), 4.0 * s.se_skewness);
  EXPECT_LT(std::abs(s.excess_kurtosis), 4.0 * s.se_kurtosis);
}

TEST(Gaussian, StepIntegrandIsExactUnderBothRules) {
  const auto k = CovarianceKernel::fbm(0.75);
  const auto e = sample_scalar(k, TimeGrid::uniform(1.0, 9), 3, 2);
  const auto ind = PiecewiseFunction::indicator(0.0, 0.5, 1.0);
  const Eigen::MatrixXd left = integrate_scalar(ind, e);
  const Eigen::MatrixXd mid = integrate_scalar(ind, e, EvaluationRule::kMidpoint);
  for (std::size_t p = 0; p < 3; ++p) {
    EXPECT_NEAR(left(p, 0), e.value(p, 4), 1e-15);
    EXPECT_NEAR(mid(p, 0), e.value(p, 4), 1e-15);
  }
}

TEST(Gaussian, IsometryWithinThreeStandardErrors) {
  const auto k = CovarianceKernel::fbm(0.75);
  const auto e = sample_scalar(k, TimeGrid::uniform(1.0, 65), 20000, 8);
  const auto lin = PiecewiseFunction::polynomial({0.0, 1.0}, 1.0);
  const auto c = verify_isometry(lin, lin, k, e);
  EXPECT_NEAR(c.quadrature_value, 1.0 / 3.5, 1e-11);
  EXPECT_TRUE(c.pass) << c.deviation_in_se();
}

TEST(Gaussian, OperatorIntegralSerialEqualsOmp) {
  const auto k = CovarianceKernel::fbm(0.75);
  const auto spec = NoiseSpec::power_law(1.0, 3.0, 4);
  const auto G = sample_G(k, spec, TimeGrid::uniform(1.0, 17), 30, 4);
  OperatorValuedIntegrand h{PiecewiseFunction::constant(Eigen::MatrixXd::Identity(4, 4), 1.0), {},
                            {}};
  const auto a = integrate_operator(h, G, EvaluationRule::kLeftEndpoint, Backend::kSerial);
  const auto b = integrate_operator(h, G, EvaluationRule::kLeftEndpoint, Backend::kOpenMP);
  for (std::size_t i = 0; i < a.data.size(); ++i) EXPECT_NEAR(a.data[i], b.data[i], 1e-12);
  // identity h reproduces G itself
  EXPECT_NEAR(a.at(7, 16)(2), G.value(7, 16, 2), 1e-14);
}

TEST(Gaussian, IntegralCovarianceOraclesOnDiagonalCase) {
  const auto k = CovarianceKernel::fbm(0.75);
  const auto spec = NoiseSpec::explicit_values({2.0, 1.0});
  const auto id = PiecewiseFunction::constant(Eigen::MatrixXd::Identity(2, 2), 1.0);
  // Tr Q times R(1,1)
  EXPECT_NEAR(integral_trace_oracle(id, id, spec, k), 3.0, 1e-12);
  Eigen::VectorXd x(2), y(2);
  x << 1.0, 0.0;
  y << 1.0, 1.0;
  EXPECT_NEAR(integral_pairing_oracle(id, id, x, y, spec, k), 2.0, 1e-12);
}

TEST(Gaussian, ConfidenceHelpers) {
  EXPECT_NEAR(z_for_confidence(kThreeSigma), 3.0, 1e-10);
  EXPECT_NEAR(confidence_for_z(1.959963984540054), 0.95, 1e-12);
}
