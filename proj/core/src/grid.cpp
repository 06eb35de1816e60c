#include "isslab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "isslab/errors.hpp"

namespace isslab {

SpatialGrid::SpatialGrid(std::size_t n_cells) : n_cells_(n_cells), h_(0.0) {
  if (n_cells < 2) {
    throw Error(ErrorCode::invalid_argument, "grid needs at least 2 cells");
  }
  h_ = 1.0 / static_cast<double>(n_cells);
}

std::vector<double> SpatialGrid::nodes() const {
  std::vector<double> xs(n_nodes());
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = x(i);
  return xs;
}

GridProfile::GridProfile(SpatialGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.n_nodes()) {
    throw Error(ErrorCode::invalid_argument,
                "profile has " + std::to_string(values_.size()) + " values, grid has " +
                    std::to_string(grid_.n_nodes()) + " nodes");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::invalid_argument, "non-finite profile value");
  }
}

GridProfile GridProfile::zeros(SpatialGrid grid) {
  return GridProfile(grid, std::vector<double>(grid.n_nodes(), 0.0));
}

double GridProfile::sup_norm() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double GridProfile::l2_norm() const noexcept {
  const std::size_t n = values_.size();
  double s = 0.5 * (values_.front() * values_.front() + values_.back() * values_.back());
  for (std::size_t i = 1; i + 1 < n; ++i) s += values_[i] * values_[i];
  return std::sqrt(s * grid_.h());
}

}  // namespace isslab
