#include <gtest/gtest.h>

#include <sstream>

#include "gspde/ensemble_io.hpp"
#include "gspde/errors.hpp"

using namespace gspde;

TEST(EnsembleIo, FormatDoubleRoundTrips) {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) {
    EXPECT_EQ(std::stod(io::format_double(x)), x);
  }
}

TEST(EnsembleIo, BinaryRoundTrip) {
  const auto e = sample_G(CovarianceKernel::fbm(0.75), NoiseSpec::explicit_values({1.0, 0.5}),
                          TimeGrid::uniform(1.0, 5), 3, 77);
  std::stringstream ss;
  io::write_ensemble_binary(ss, e, R"({"type":"fbm"})");
  const auto back = io::read_ensemble_binary(ss);
  EXPECT_EQ(back.kernel_config, R"({"type":"fbm"})");
  EXPECT_EQ(back.ensemble.data().size(), e.data().size());
  for (std::size_t i = 0; i < e.data().size(); ++i) EXPECT_EQ(back.ensemble.data()[i], e.data()[i]);
  EXPECT_EQ(back.ensemble.grid(), e.grid());
  EXPECT_EQ(back.ensemble.seed(), 77u);
}

TEST(EnsembleIo, BinaryRejectsBadMagic) {
  std::stringstream ss("NOTANENSEMBLE");
  EXPECT_ANY_THROW(io::read_ensemble_binary(ss));
}

TEST(EnsembleIo, CsvLayout) {
  const auto e = sample_scalar(CovarianceKernel::fbm(0.75), TimeGrid::uniform(1.0, 3), 2, 1);
  std::stringstream ss;
  io::write_ensemble_csv(ss, e, {"kernel fbm"});
  std::string line;
  std::getline(ss, line);
  EXPECT_EQ(line, "# kernel fbm");
  std::getline(ss, line);
  EXPECT_EQ(line.rfind("path,node,t,", 0), 0u);
  int rows = 0;
  while (std::getline(ss, line)) ++rows;
  EXPECT_EQ(rows, 6);
}
