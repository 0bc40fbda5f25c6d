#pragma once

#include <cstdint>
#include <random>

namespace gspde {

// Stream identifiers keep the noise sources of one experiment disjoint.
enum class Stream : std::uint64_t {
  kGaussianPaths = 0x47,  // g_n and G
  kWiener = 0x57,         // increments of W
  kInitial = 0x58,        // random initial conditions
  kConditions = 0x43,     // sampling inside the (H1)-(H4) checkers
};

std::uint64_t splitmix64(std::uint64_t x);

// Seed of the substream (master, stream, index, coordinate). Every path and
// coordinate owns its own engine, so results do not depend on how paths are
// distributed across threads.
std::uint64_t substream_seed(std::uint64_t master, Stream stream, std::uint64_t index,
                             std::uint64_t coordinate = 0);

class NormalStream {
 public:
  NormalStream(std::uint64_t master, Stream stream, std::uint64_t index,
               std::uint64_t coordinate = 0)
      : engine_(substream_seed(master, stream, index, coordinate)) {}

  double operator()() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace gspde
