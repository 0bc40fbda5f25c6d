#include <gtest/gtest.h>

#include <cmath>

#include "gspde/rng.hpp"

using gspde::NormalStream;
using gspde::Stream;

TEST(Rng, SubstreamsAreReproducible) {
  NormalStream a(42, Stream::kWiener, 3, 1), b(42, Stream::kWiener, 3, 1);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
}

TEST(Rng, SubstreamSeedsDifferAcrossEveryArgument) {
  const auto base = gspde::substream_seed(1, Stream::kWiener, 0, 0);
  EXPECT_NE(base, gspde::substream_seed(2, Stream::kWiener, 0, 0));
  EXPECT_NE(base, gspde::substream_seed(1, Stream::kGaussianPaths, 0, 0));
  EXPECT_NE(base, gspde::substream_seed(1, Stream::kWiener, 1, 0));
  EXPECT_NE(base, gspde::substream_seed(1, Stream::kWiener, 0, 1));
}

TEST(Rng, NormalMoments) {
  NormalStream z(7, Stream::kGaussianPaths, 0);
  const int n = 200000;
  double s1 = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    const double x = z();
    s1 += x;
    s2 += x * x;
  }
  EXPECT_NEAR(s1 / n, 0.0, 4.0 / std::sqrt(n));
  EXPECT_NEAR(s2 / n, 1.0, 4.0 * std::sqrt(2.0 / n));
}
