#include "gspde/ensemble_io.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>

#include "gspde/errors.hpp"

namespace gspde::io {

namespace {

constexpr std::array<char, 8> kMagic{'G', 'S', 'P', 'D', 'E', 'E', 'N', 'S'};
constexpr std::uint32_t kVersion = 1;

template <typename U>
void put_le(std::ostream& os, U v) {
  std::array<char, sizeof(U)> bytes;
  for (std::size_t i = 0; i < sizeof(U); ++i) bytes[i] = char((v >> (8 * i)) & 0xFF);
  os.write(bytes.data(), bytes.size());
}

void put_f64(std::ostream& os, double x) { put_le(os, std::bit_cast<std::uint64_t>(x)); }

template <typename U>
U get_le(std::istream& is) {
  std::array<unsigned char, sizeof(U)> bytes;
  if (!is.read(reinterpret_cast<char*>(bytes.data()), bytes.size()))
    throw ConfigError("truncated ensemble dump");
  U v = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) v |= U(bytes[i]) << (8 * i);
  return v;
}

double get_f64(std::istream& is) { return std::bit_cast<double>(get_le<std::uint64_t>(is)); }

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_ensemble_csv(std::ostream& os, const GaussianEnsemble& e,
                        const std::vector<std::string>& header) {
  for (const auto& line : header) os << "# " << line << '\n';
  os << "path,node,t";
  for (std::size_t c = 0; c < e.n_coords(); ++c) os << ",g" << (c + 1);
  os << '\n';
  for (std::size_t p = 0; p < e.n_paths(); ++p) {
    for (std::size_t i = 0; i < e.grid().size(); ++i) {
      os << p << ',' << i << ',' << format_double(e.grid().node(i));
      for (std::size_t c = 0; c < e.n_coords(); ++c) os << ',' << format_double(e.value(p, i, c));
      os << '\n';
    }
  }
}

void write_ensemble_binary(std::ostream& os, const GaussianEnsemble& e,
                           const std::string& kernel_config) {
  os.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(os, kVersion);
  put_le<std::uint64_t>(os, e.seed());
  put_le<std::uint32_t>(os, std::uint32_t(kernel_config.size()));
  os.write(kernel_config.data(), std::streamsize(kernel_config.size()));
  put_f64(os, e.grid().horizon());
  put_le<std::uint64_t>(os, e.grid().size());
  for (double t : e.grid().nodes()) put_f64(os, t);
  put_le<std::uint64_t>(os, e.n_coords());
  put_le<std::uint64_t>(os, e.n_paths());
  for (double v : e.data()) put_f64(os, v);
}

BinaryEnsemble read_ensemble_binary(std::istream& is) {
  std::array<char, 8> magic{};
  if (!is.read(magic.data(), magic.size()) || magic != kMagic)
    throw ConfigError("not an ensemble dump (bad magic)");
  if (get_le<std::uint32_t>(is) != kVersion) throw ConfigError("unsupported ensemble dump version");
  const std::uint64_t seed = get_le<std::uint64_t>(is);
  const std::uint32_t len = get_le<std::uint32_t>(is);
  std::string config(len, '\0');
  if (!is.read(config.data(), len)) throw ConfigError("truncated ensemble dump");
  get_f64(is);  // T, implied by the last node
  const std::uint64_t m = get_le<std::uint64_t>(is);
  std::vector<double> nodes(m);
  for (auto& t : nodes) t = get_f64(is);
  const std::uint64_t n_coords = get_le<std::uint64_t>(is);
  const std::uint64_t n_paths = get_le<std::uint64_t>(is);
  std::vector<double> data(n_paths * m * n_coords);
  for (auto& v : data) v = get_f64(is);
  return {GaussianEnsemble(TimeGrid(std::move(nodes)), n_paths, n_coords, std::move(data), seed, ""),
          std::move(config)};
}

}  // namespace gspde::io
