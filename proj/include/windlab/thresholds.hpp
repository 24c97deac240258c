#pragma once

#include <map>
#include <string>

namespace windlab {

/// Acceptance tolerances used by `--assert` and the acceptance suite.
/// Bump `kThresholdsVersion` whenever a default changes.
inline constexpr int kThresholdsVersion = 1;

struct Thresholds {
  double periodization = 1e-10;   // max relative error, reduced vs direct torus solve
  double heat_reference = 1e-6;   // beta = 0 kernel vs periodized Gaussian
  double winding_law = 1e-4;      // beta = 0 increment law from (0, 0)
  double oracle = 1e-10;          // line law vs exhaustive path sum
  double z = 3.0;                 // standard errors allowed in statistical gates
  double quenched_relative = 0.05;
  double ks_noisy = 0.05;
  double ks_free = 0.04;
  double sigma_margin = 0.05;     // discretization margin below 1
  double free_sigma = 0.05;       // |sigma^2 - 1| at beta = 0
  double mixing_r2 = 0.9;
  double free_rate_relative = 0.10;
  double tail_r2 = 0.99;
  double free_tail_slope = 0.02;  // relative error of the j^2 slope at beta = 0

  /// Overrides one field by name; throws ConfigError for unknown names.
  void set(const std::string& name, double value);
  std::map<std::string, double> as_map() const;
};

}  // namespace windlab
