#pragma once

#include <string>
#include <vector>

namespace windlab {

/// Probability density on the torus grid, normalized so that
/// dx * sum(values) == 1. `log_mass` accumulates the log-normalizers divided
/// out so far (a quenched free energy when produced by evolution).
struct TorusDensity {
  std::vector<double> values;
  double dx = 1.0;
  double log_mass = 0.0;

  int size() const noexcept { return static_cast<int>(values.size()); }
  double total() const noexcept;

  /// Rescales to unit dx-weighted mass and returns the log of the old mass.
  /// Throws DegenerateInput on zero or non-finite mass.
  double normalize();

  static TorusDensity uniform(int cells, double dx);
  static TorusDensity delta(int cells, double dx, int cell);
};

/// Endpoint law on the line, resolved into (winding index j, cell x) with
/// position j * L + x * dx.
struct LineDensity {
  int j_max = 0;  // windings j in [-j_max, j_max]
  int cells = 0;
  double dx = 1.0;
  int period = 1;
  std::vector<double> values;  // row j + j_max holds the cells of winding j
  double log_mass = 0.0;
  double mass_lost = 0.0;  // fraction dropped past |j| = j_max
  std::vector<std::string> warnings;

  int windings() const noexcept { return 2 * j_max + 1; }
  double& at(int j, int x) { return values[static_cast<std::size_t>(j + j_max) * cells + x]; }
  double at(int j, int x) const { return values[static_cast<std::size_t>(j + j_max) * cells + x]; }
  double total() const noexcept;
  double position(int j, int x) const noexcept { return j * static_cast<double>(period) + x * dx; }
};

/// Start or end law of a torus path: a grid delta, the uniform law, or an
/// explicit density.
class BoundaryCondition {
 public:
  enum class Kind { delta, lebesgue, density };

  static BoundaryCondition delta(int cell);
  static BoundaryCondition lebesgue();
  /// Throws ConfigError unless the density has unit mass within 1e-10.
  static BoundaryCondition density(TorusDensity d);

  Kind kind() const noexcept { return kind_; }
  int cell() const noexcept { return cell_; }

  /// Density on a grid of `cells` points; a delta becomes 1/dx at its cell.
  TorusDensity to_density(int cells, double dx) const;

 private:
  Kind kind_ = Kind::lebesgue;
  int cell_ = 0;
  TorusDensity density_;
};

}  // namespace windlab
