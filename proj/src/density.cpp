#include "windlab/density.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "windlab/errors.hpp"

namespace windlab {

double TorusDensity::total() const noexcept {
  return dx * std::accumulate(values.begin(), values.end(), 0.0);
}

double TorusDensity::normalize() {
  const double mass = total();
  if (!(mass > 0.0) || !std::isfinite(mass)) throw DegenerateInput("torus density has no mass to normalize");
  const double inv = 1.0 / mass;
  for (double& v : values) v *= inv;
  return std::log(mass);
}

TorusDensity TorusDensity::uniform(int cells, double dx) {
  if (cells < 1) throw ConfigError("cells: must be positive");
  return TorusDensity{std::vector<double>(static_cast<std::size_t>(cells), 1.0 / (cells * dx)), dx, 0.0};
}

TorusDensity TorusDensity::delta(int cells, double dx, int cell) {
  if (cell < 0 || cell >= cells) throw IndexError("delta cell " + std::to_string(cell) + " outside the grid");
  TorusDensity d{std::vector<double>(static_cast<std::size_t>(cells), 0.0), dx, 0.0};
  d.values[static_cast<std::size_t>(cell)] = 1.0 / dx;
  return d;
}

double LineDensity::total() const noexcept {
  return dx * std::accumulate(values.begin(), values.end(), 0.0);
}

BoundaryCondition BoundaryCondition::delta(int cell) {
  if (cell < 0) throw IndexError("delta cell must be nonnegative");
  BoundaryCondition b;
  b.kind_ = Kind::delta;
  b.cell_ = cell;
  return b;
}

BoundaryCondition BoundaryCondition::lebesgue() { return BoundaryCondition{}; }

BoundaryCondition BoundaryCondition::density(TorusDensity d) {
  const double mass = d.total();
  if (!(mass > 0.0)) throw DegenerateInput("boundary density has zero mass");
  if (std::abs(mass - 1.0) > 1e-10) throw ConfigError("boundary density must have unit mass");
  for (double v : d.values) {
    if (!(v >= 0.0)) throw ConfigError("boundary density must be nonnegative");
  }
  BoundaryCondition b;
  b.kind_ = Kind::density;
  b.density_ = std::move(d);
  return b;
}

TorusDensity BoundaryCondition::to_density(int cells, double dx) const {
  switch (kind_) {
    case Kind::delta:
      return TorusDensity::delta(cells, dx, cell_);
    case Kind::lebesgue:
      return TorusDensity::uniform(cells, dx);
    case Kind::density:
      if (density_.size() != cells) throw ConfigError("boundary density does not match the grid");
      return density_;
  }
  return TorusDensity::uniform(cells, dx);
}

}  // namespace windlab
