#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "windlab/grid.hpp"

namespace windlab {

/// Lattice of standard Gaussian increments, one per (time step, cell of one
/// period). The increment driving cell c during step s is
/// beta * sqrt(dt/dx) * increments(s, c), the cell average of the white
/// noise over that step. Immutable after construction.
class NoiseGrid {
 public:
  NoiseGrid(const GridSpec& spec, std::uint64_t seed, int horizon);

  /// Grid with caller-provided increments, row-major (step, cell).
  static NoiseGrid from_increments(const GridSpec& spec, int horizon, std::vector<double> increments);

  const GridSpec& spec() const noexcept { return spec_; }
  std::uint64_t seed() const noexcept { return seed_; }
  int horizon() const noexcept { return horizon_; }
  long total_steps() const noexcept { return static_cast<long>(horizon_) * spec_.steps_per_unit; }

  /// Raw increment at a global step (0-based) and a cell of the period.
  double at(long step, int cell) const { return increments_[static_cast<std::size_t>(step) * spec_.cells() + cell]; }
  std::span<const double> row(long step) const;
  std::span<const double> increments() const noexcept { return increments_; }

 private:
  NoiseGrid() = default;

  GridSpec spec_;
  std::uint64_t seed_ = 0;
  int horizon_ = 0;
  std::vector<double> increments_;
};

/// The steps of time unit [k-1, k]. Holds a pointer into the grid, which
/// must outlive the slab.
class NoiseSlab {
 public:
  NoiseSlab(const NoiseGrid& grid, int unit);

  int unit() const noexcept { return unit_; }
  int steps() const noexcept { return grid_->spec().steps_per_unit; }
  const GridSpec& spec() const noexcept { return grid_->spec(); }

  /// 1-based global step range (first, last), inclusive.
  long first_step() const noexcept { return static_cast<long>(unit_ - 1) * steps() + 1; }
  long last_step() const noexcept { return static_cast<long>(unit_) * steps(); }

  /// Row of `local_step` in [0, steps()).
  std::span<const double> row(int local_step) const;

  /// Value at any integer cell; reduced modulo the period.
  double tiled_value(int local_step, long cell) const;

 private:
  const NoiseGrid* grid_;
  int unit_;
};

NoiseGrid new_noise(const GridSpec& spec, std::uint64_t seed, int horizon);

NoiseSlab slab(const NoiseGrid& grid, int unit);

}  // namespace windlab
