#pragma once

// Reference computations that share no code with the library.

#include <cmath>
#include <numbers>
#include <vector>

#include "windlab/kernel.hpp"

namespace oracle {

inline double gaussian(double x, double t = 1.0) {
  return std::exp(-x * x / (2.0 * t)) / std::sqrt(2.0 * std::numbers::pi * t);
}

/// Heat kernel on a circle of length L by the image sum.
inline double periodic_heat(double t, double x, double L, int images = 60) {
  double s = 0.0;
  for (int k = -images; k <= images; ++k) s += gaussian(x + k * L, t);
  return s;
}

/// Winding law of a two-step path from cell `start`, summing every
/// (j1, y1, j2) with kernel entries K(j, to, from).
inline std::vector<double> two_step_winding_law(const windlab::WindingKernel& k1, const windlab::WindingKernel& k2,
                                                int start) {
  const int J = k1.half_width;
  const int n = k1.cells;
  std::vector<double> p(static_cast<std::size_t>(4 * J + 1), 0.0);
  for (int j1 = -J; j1 <= J; ++j1) {
    for (int y1 = 0; y1 < n; ++y1) {
      const double a = k1(j1, y1, start);
      for (int j2 = -J; j2 <= J; ++j2) {
        double s = 0.0;
        for (int y2 = 0; y2 < n; ++y2) s += k2(j2, y2, y1);
        p[static_cast<std::size_t>(j1 + j2 + 2 * J)] += a * s;
      }
    }
  }
  double total = 0.0;
  for (double v : p) total += v;
  for (double& v : p) v /= total;
  return p;
}

/// Variance of the grid-sampled heat law on the line started at 0, time t:
/// weights p_t(j L + x dx) on every cell of every winding.
inline double grid_heat_variance(double t, int cells, double dx, double L, int windings = 40) {
  double m0 = 0.0, m1 = 0.0, m2 = 0.0;
  for (int j = -windings; j <= windings; ++j) {
    for (int x = 0; x < cells; ++x) {
      const double pos = j * L + x * dx;
      const double w = gaussian(pos, t);
      m0 += w;
      m1 += w * pos;
      m2 += w * pos * pos;
    }
  }
  const double mean = m1 / m0;
  return m2 / m0 - mean * mean;
}

}  // namespace oracle
