#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace gspde {

// Discretization of [0, T]: strictly increasing nodes, first 0, last T.
class TimeGrid {
 public:
  explicit TimeGrid(std::vector<double> nodes);

  // m equally spaced nodes (m - 1 cells).
  static TimeGrid uniform(double horizon, std::size_t m);

  std::size_t size() const { return nodes_.size(); }
  std::size_t cells() const { return nodes_.size() - 1; }
  double horizon() const { return nodes_.back(); }
  double node(std::size_t i) const { return nodes_[i]; }
  double step(std::size_t i) const { return nodes_[i + 1] - nodes_[i]; }
  double midpoint(std::size_t i) const { return 0.5 * (nodes_[i] + nodes_[i + 1]); }
  std::span<const double> nodes() const { return nodes_; }
  bool is_uniform(double rel_tol = 1e-12) const;

  // Index of the node equal to t up to a relative tolerance of the local step.
  std::optional<std::size_t> index_of(double t) const;

  // Every stride-th node; (size() - 1) must be divisible by stride.
  TimeGrid coarsen(std::size_t stride) const;

  bool operator==(const TimeGrid&) const = default;

 private:
  std::vector<double> nodes_;
};

}  // namespace gspde
