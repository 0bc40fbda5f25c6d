#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "gspde/errors.hpp"
#include "gspde/operators.hpp"

using namespace gspde;

namespace {

Eigen::VectorXd unit(std::size_t n, std::size_t k) {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(Eigen::Index(n));
  e(Eigen::Index(k)) = 1.0;
  return e;
}

Eigen::VectorXd some_state(std::size_t n) {
  Eigen::VectorXd v{Eigen::Index(n)};
  for (std::size_t k = 0; k < n; ++k) v(Eigen::Index(k)) = std::cos(1.3 * double(k) + 0.2) / double(k + 1);
  return v;
}

}  // namespace

TEST(Operators, LinearHeatIsMinusLaplacian) {
  const auto a = make_linear_heat(GalerkinSpace::energy(6));
  const Eigen::VectorXd out = a(0.0, unit(6, 2));
  EXPECT_NEAR(out(2), -9.0 * std::numbers::pi * std::numbers::pi, 1e-12);
  EXPECT_NEAR(out.norm(), std::abs(out(2)), 1e-12);
  EXPECT_EQ(a.constants().c, 0.0);
  EXPECT_EQ(a.constants().c2, 2.0);
}

TEST(Operators, PLaplaceAtTwoRecoversEigenvalue) {
  const auto a = make_p_laplace(GalerkinSpace::sobolev(64, 2.0), 2.0);
  const Eigen::VectorXd out = a(0.0, unit(64, 0));
  EXPECT_NEAR(-out(0), std::numbers::pi * std::numbers::pi, 0.02 * std::numbers::pi * std::numbers::pi);
  EXPECT_LT(out.tail(63).norm(), 1e-10);
}

TEST(Operators, HomogeneityOfDegreePMinusOne) {
  const auto a = make_p_laplace(GalerkinSpace::sobolev(8, 4.0), 4.0);
  const Eigen::VectorXd v = some_state(8);
  EXPECT_TRUE(a(0.0, 2.0 * v).isApprox(8.0 * a(0.0, v), 1e-13));
  EXPECT_TRUE(a(0.0, -v).isApprox(-a(0.0, v), 1e-15));
}

TEST(Operators, PorousMediumScalesExactly) {
  const auto a = make_porous_medium(GalerkinSpace::lebesgue_hminus1(8, 4.0), 3.0);
  const Eigen::VectorXd v = some_state(8);
  const Eigen::VectorXd lhs = a(0.0, 2.0 * v), rhs = 8.0 * a(0.0, v);
  for (Eigen::Index i = 0; i < lhs.size(); ++i) EXPECT_EQ(lhs(i), rhs(i));
}

TEST(Operators, ZeroInputGivesZero) {
  const Eigen::VectorXd z = Eigen::VectorXd::Zero(8);
  EXPECT_EQ(make_p_laplace(GalerkinSpace::sobolev(8, 3.0), 3.0)(0.0, z).norm(), 0.0);
  EXPECT_EQ(make_porous_medium(GalerkinSpace::lebesgue_hminus1(8, 3.0), 2.0)(0.0, z).norm(), 0.0);
  EXPECT_EQ(make_zero_drift(GalerkinSpace::energy(8))(0.0, some_state(8)).norm(), 0.0);
}

TEST(Operators, AnalyticJacobiansMatchDifferences) {
  const std::vector<DriftOperator> ops{make_p_laplace(GalerkinSpace::sobolev(6, 3.0), 3.0),
                                       make_porous_medium(GalerkinSpace::lebesgue_hminus1(6, 4.0), 3.0)};
  for (const auto& a : ops) {
    ASSERT_TRUE(a.has_jacobian());
    const Eigen::VectorXd v = some_state(6);
    const Eigen::MatrixXd j = a.jacobian(0.0, v);
    for (Eigen::Index k = 0; k < 6; ++k) {
      Eigen::VectorXd d = Eigen::VectorXd::Zero(6);
      d(k) = 1e-6;
      const Eigen::VectorXd fd = (a(0.0, v + d) - a(0.0, v - d)) / 2e-6;
      EXPECT_LT((j.col(k) - fd).norm(), 1e-5 * (1.0 + fd.norm())) << a.name();
    }
  }
}

TEST(Operators, RejectsBadParameters) {
  EXPECT_THROW(make_p_laplace(GalerkinSpace::sobolev(8, 1.5), 1.5), DomainError);
  EXPECT_THROW(make_p_laplace(GalerkinSpace::sobolev(8, 3.0), 4.0), DomainError);
  EXPECT_THROW(make_porous_medium(GalerkinSpace::lebesgue_hminus1(8, 2.0), 0.5), DomainError);
  EXPECT_THROW(make_porous_medium(GalerkinSpace::lebesgue_hminus1(8, 3.0), 3.0), DomainError);
  EXPECT_THROW(make_linear_heat(GalerkinSpace::sobolev(8, 2.0)), DomainError);
}

TEST(Operators, DiffusionShapesAndNorms) {
  const auto s = GalerkinSpace::energy(4);
  const auto b = make_lipschitz_multiplication(s, 0.5);
  const Eigen::VectorXd v = some_state(4);
  EXPECT_NEAR(b.hs_norm(b(0.0, v)), 0.5 * s.h_norm(v), 1e-15);
  EXPECT_EQ(b.noise_dim(), 1u);
  EXPECT_TRUE(make_zero_diffusion(s, 3).is_zero());
  EXPECT_THROW(b(0.0, Eigen::VectorXd::Zero(5)), DimensionMismatch);
  const auto c = make_constant_diffusion(s, Eigen::MatrixXd::Identity(4, 2));
  EXPECT_TRUE(c.state_independent());
  EXPECT_NEAR(c.hs_norm(c(0.0, v)), std::sqrt(2.0), 1e-15);
}

TEST(Operators, ShiftEvaluatesAtPathNodes) {
  const auto s = GalerkinSpace::energy(4);
  const auto a = make_linear_heat(s);
  const auto b = make_lipschitz_multiplication(s, 1.0);
  auto w = std::make_shared<NoisePath>(NoisePath{TimeGrid::uniform(1.0, 3), Eigen::MatrixXd::Zero(3, 4), {}});
  w->values.row(1) = some_state(4).transpose();
  const auto sh = shift_operators(a, b, w);
  const Eigen::VectorXd v = unit(4, 0);
  EXPECT_TRUE(sh.drift(0.5, v).isApprox(a(0.5, v + some_state(4))));
  EXPECT_TRUE(sh.diffusion(0.5, v).isApprox(b(0.5, v + some_state(4))));
  EXPECT_TRUE(sh.drift(0.0, v).isApprox(a(0.0, v)));
  EXPECT_THROW(sh.drift(0.3, v), RangeError);
  EXPECT_EQ(sh.drift.name().rfind("shifted(", 0), 0u);
}

TEST(Operators, ShiftValidatesPath) {
  const auto s = GalerkinSpace::energy(4);
  const auto a = make_linear_heat(s);
  const auto b = make_zero_diffusion(s, 1);
  auto wrong_dim = std::make_shared<NoisePath>(NoisePath{TimeGrid::uniform(1.0, 3), Eigen::MatrixXd::Zero(3, 5), {}});
  EXPECT_THROW(shift_operators(a, b, wrong_dim), RangeError);
  auto nan_path = std::make_shared<NoisePath>(NoisePath{TimeGrid::uniform(1.0, 3), Eigen::MatrixXd::Zero(3, 4), {}});
  nan_path->values(2, 1) = std::nan("");
  EXPECT_THROW(shift_operators(a, b, nan_path), RangeError);
  auto outside = std::make_shared<NoisePath>(
      NoisePath{TimeGrid::uniform(1.0, 3), Eigen::MatrixXd::Zero(3, 4), std::vector<std::size_t>{0}});
  outside->values(1, 2) = 1.0;
  EXPECT_THROW(shift_operators(a, b, outside), RangeError);
}
