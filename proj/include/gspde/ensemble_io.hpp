#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gspde/gaussian.hpp"

namespace gspde::io {

// Decimal with 17 significant digits, round-trip exact for doubles.
std::string format_double(double x);

// One row per (path, node): "path,node,t,c1,...,cN". Header lines are written
// first, each prefixed with "# ".
void write_ensemble_csv(std::ostream& os, const GaussianEnsemble& e,
                        const std::vector<std::string>& header);

// Binary dump, all integers and floats little-endian:
//   magic "GSPDEENS" | u32 version = 1 | u64 seed | u32 len | len bytes of
//   kernel config (JSON text) | f64 T | u64 m | m x f64 nodes | u64 N |
//   u64 n_paths | n_paths * m * N f64 values, path-major then node then coord.
void write_ensemble_binary(std::ostream& os, const GaussianEnsemble& e,
                           const std::string& kernel_config);

struct BinaryEnsemble {
  GaussianEnsemble ensemble;
  std::string kernel_config;
};
BinaryEnsemble read_ensemble_binary(std::istream& is);

}  // namespace gspde::io
