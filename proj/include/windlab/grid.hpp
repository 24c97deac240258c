#pragma once

#include <string>

namespace windlab {

/// Discretization of one spatial period [0, L) and one unit of time.
///
/// Space is sampled at `cells_per_unit` points per unit length, so a period
/// holds `cells()` = M * L points at x_c = c * dx. Time is split into
/// `steps_per_unit` equal steps.
struct GridSpec {
  int cells_per_unit = 32;     // M
  int steps_per_unit = 100;
  int winding_half_width = 4;  // J
  int period = 1;              // L
  double beta = 1.0;

  int cells() const noexcept { return cells_per_unit * period; }
  int windings() const noexcept { return 2 * winding_half_width + 1; }
  double dx() const noexcept { return 1.0 / cells_per_unit; }
  double dt() const noexcept { return 1.0 / steps_per_unit; }
  double length() const noexcept { return static_cast<double>(period); }

  /// Throws ConfigError naming the offending field.
  void validate() const;

  /// Stable textual form used in config hashes.
  std::string canonical() const;

  bool operator==(const GridSpec&) const = default;
};

}  // namespace windlab
