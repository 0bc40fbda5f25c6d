#include "gspde/time_grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gspde/errors.hpp"

namespace gspde {

TimeGrid::TimeGrid(std::vector<double> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.size() < 2) throw DomainError("time grid needs at least 2 nodes");
  if (nodes_.front() != 0.0) throw DomainError("time grid must start at 0");
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    if (!(nodes_[i] > nodes_[i - 1]) || !std::isfinite(nodes_[i]))
      throw DomainError("time grid nodes must be finite and strictly increasing (node " +
                        std::to_string(i) + ")");
  }
}

TimeGrid TimeGrid::uniform(double horizon, std::size_t m) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw DomainError("horizon T must be > 0");
  if (m < 2) throw DomainError("time grid needs at least 2 nodes");
  std::vector<double> nodes(m);
  const double cells = static_cast<double>(m - 1);
  for (std::size_t i = 0; i < m; ++i) nodes[i] = horizon * (static_cast<double>(i) / cells);
  nodes.back() = horizon;
  return TimeGrid(std::move(nodes));
}

bool TimeGrid::is_uniform(double rel_tol) const {
  const double h = step(0);
  for (std::size_t i = 1; i < cells(); ++i)
    if (std::abs(step(i) - h) > rel_tol * h) return false;
  return true;
}

std::optional<std::size_t> TimeGrid::index_of(double t) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), t);
  const double tol = 1e-9 * horizon() / static_cast<double>(cells());
  std::optional<std::size_t> best;
  if (it != nodes_.end() && std::abs(*it - t) <= tol) best = std::size_t(it - nodes_.begin());
  if (it != nodes_.begin() && std::abs(*(it - 1) - t) <= tol)
    best = std::size_t(it - nodes_.begin() - 1);
  return best;
}

TimeGrid TimeGrid::coarsen(std::size_t stride) const {
  if (stride == 0 || cells() % stride != 0)
    throw DomainError("cannot coarsen grid with " + std::to_string(cells()) +
                      " cells by stride " + std::to_string(stride));
  std::vector<double> nodes;
  for (std::size_t i = 0; i < size(); i += stride) nodes.push_back(nodes_[i]);
  return TimeGrid(std::move(nodes));
}

}  // namespace gspde
