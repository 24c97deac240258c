#include "windlab/noise.hpp"

#include <random>
#include <string>

#include "windlab/errors.hpp"
#include "windlab/rng.hpp"

namespace windlab {

NoiseGrid::NoiseGrid(const GridSpec& spec, std::uint64_t seed, int horizon)
    : spec_(spec), seed_(seed), horizon_(horizon) {
  spec_.validate();
  if (horizon < 1) throw ConfigError("horizon: must be >= 1, got " + std::to_string(horizon));
  increments_.resize(static_cast<std::size_t>(total_steps()) * spec_.cells());
  Rng rng = make_rng(seed, Stream::noise);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (double& v : increments_) v = normal(rng);
}

NoiseGrid NoiseGrid::from_increments(const GridSpec& spec, int horizon, std::vector<double> increments) {
  spec.validate();
  if (horizon < 1) throw ConfigError("horizon: must be >= 1, got " + std::to_string(horizon));
  const std::size_t expected = static_cast<std::size_t>(horizon) * spec.steps_per_unit * spec.cells();
  if (increments.size() != expected) {
    throw ConfigError("increments: expected " + std::to_string(expected) + " values, got " +
                      std::to_string(increments.size()));
  }
  NoiseGrid grid;
  grid.spec_ = spec;
  grid.horizon_ = horizon;
  grid.increments_ = std::move(increments);
  return grid;
}

std::span<const double> NoiseGrid::row(long step) const {
  if (step < 0 || step >= total_steps()) throw IndexError("noise step " + std::to_string(step) + " out of range");
  return std::span<const double>(increments_).subspan(static_cast<std::size_t>(step) * spec_.cells(), spec_.cells());
}

NoiseSlab::NoiseSlab(const NoiseGrid& grid, int unit) : grid_(&grid), unit_(unit) {
  if (unit < 1 || unit > grid.horizon()) {
    throw IndexError("slab " + std::to_string(unit) + " outside [1, " + std::to_string(grid.horizon()) + "]");
  }
}

std::span<const double> NoiseSlab::row(int local_step) const {
  if (local_step < 0 || local_step >= steps()) {
    throw IndexError("slab step " + std::to_string(local_step) + " out of range");
  }
  return grid_->row(first_step() - 1 + local_step);
}

double NoiseSlab::tiled_value(int local_step, long cell) const {
  const long n = spec().cells();
  long c = cell % n;
  if (c < 0) c += n;
  return row(local_step)[static_cast<std::size_t>(c)];
}

NoiseGrid new_noise(const GridSpec& spec, std::uint64_t seed, int horizon) { return NoiseGrid(spec, seed, horizon); }

NoiseSlab slab(const NoiseGrid& grid, int unit) { return NoiseSlab(grid, unit); }

}  // namespace windlab
