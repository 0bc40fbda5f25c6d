#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "gspde/quadrature.hpp"

namespace quad = gspde::quad;

TEST(Quadrature, SmoothIntegrand) {
  EXPECT_NEAR(quad::integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi), 2.0,
              1e-12);
}

TEST(Quadrature, EndpointSingularity) {
  // \int_0^1 x^{-1/2} dx = 2
  EXPECT_NEAR(quad::integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0), 2.0, 1e-9);
  EXPECT_NEAR(quad::integrate_offset([](double d) { return std::pow(d, -0.5); }, 1.0), 2.0, 1e-9);
}

TEST(Quadrature, TinyIntervalsStayRelative) {
  const double a = 0.3, b = 0.3 + 1e-9;
  const double v = quad::integrate([](double x) { return x * x; }, a, b);
  EXPECT_NEAR(v, (b - a) * (a * a + a * b + b * b) / 3.0, 1e-12 * std::abs(v));
}

TEST(Quadrature, RectangleSeparable) {
  const double v = quad::rectangle([](double x, double y, double) { return x * y; }, 0, 1, 0, 2);
  EXPECT_NEAR(v, 1.0, 1e-12);
}

TEST(Quadrature, DiagonalSingularity) {
  // \int_0^1 \int_0^1 |x - y|^{-1/2} = 8/3
  const double v = quad::rectangle_with_diagonal(
      [](double, double, double lag) { return std::pow(lag, -0.5); }, 0, 1, 0, 1);
  EXPECT_NEAR(v, 8.0 / 3.0, 1e-8);
}

TEST(Quadrature, PartiallyOverlappingSquares) {
  // \int_0^1 \int_{1/2}^2 |x - y| dy dx = 7/6
  const double v = quad::rectangle_with_diagonal(
      [](double, double, double lag) { return lag; }, 0, 1, 0.5, 2);
  EXPECT_NEAR(v, 7.0 / 6.0, 1e-9);
}
