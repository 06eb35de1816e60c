#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace isslab {

/// Uniform grid on [0,1] with nodes x_i = i*h, i = 0..n_cells.
class SpatialGrid {
 public:
  explicit SpatialGrid(std::size_t n_cells);

  std::size_t n_cells() const noexcept { return n_cells_; }
  std::size_t n_nodes() const noexcept { return n_cells_ + 1; }
  double h() const noexcept { return h_; }
  double x(std::size_t i) const noexcept {
    return i == n_cells_ ? 1.0 : static_cast<double>(i) * h_;
  }
  std::vector<double> nodes() const;

  friend bool operator==(const SpatialGrid&, const SpatialGrid&) = default;

 private:
  std::size_t n_cells_;
  double h_;
};

/// A state snapshot u[t] sampled on a grid. Values are always finite.
class GridProfile {
 public:
  GridProfile(SpatialGrid grid, std::vector<double> values);
  static GridProfile zeros(SpatialGrid grid);
  template <class F>
  static GridProfile sample(SpatialGrid grid, F&& fn) {
    std::vector<double> v(grid.n_nodes());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(grid.x(i));
    return GridProfile(grid, std::move(v));
  }

  const SpatialGrid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> mutable_values() noexcept { return values_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  std::size_t size() const noexcept { return values_.size(); }

  double sup_norm() const noexcept;
  /// L2 norm via the trapezoid rule.
  double l2_norm() const noexcept;

 private:
  SpatialGrid grid_;
  std::vector<double> values_;
};

}  // namespace isslab
