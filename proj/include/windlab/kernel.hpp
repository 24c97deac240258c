#pragma once

#include <span>
#include <utility>
#include <vector>

#include "windlab/density.hpp"
#include "windlab/grid.hpp"
#include "windlab/noise.hpp"

namespace windlab {

/// Unit-time propagators resolved by winding: layer j holds
/// Z(x + j*L, y) for x, y on the period grid. True values are
/// stored * exp(log_norm).
struct WindingKernel {
  int half_width = 0;  // J
  int cells = 0;
  double dx = 1.0;
  std::vector<double> data;  // [j + J][x][y]
  double log_norm = 0.0;

  int windings() const noexcept { return 2 * half_width + 1; }
  double operator()(int j, int x, int y) const {
    return data[(static_cast<std::size_t>(j + half_width) * cells + x) * cells + y];
  }
  std::span<const double> layer(int j) const {
    const std::size_t n2 = static_cast<std::size_t>(cells) * cells;
    return std::span<const double>(data).subspan(static_cast<std::size_t>(j + half_width) * n2, n2);
  }
};

/// Periodic propagator G(x, y) on the period grid; true values are
/// stored * exp(log_norm).
struct TorusKernel {
  int cells = 0;
  double dx = 1.0;
  std::vector<double> data;  // [x][y]
  double log_norm = 0.0;

  double operator()(int x, int y) const { return data[static_cast<std::size_t>(x) * cells + y]; }
  std::span<const double> row(int x) const {
    return std::span<const double>(data).subspan(static_cast<std::size_t>(x) * cells, cells);
  }
};

/// Solves the multiplicative-noise heat equation over one time unit from a
/// delta at every cell of the period, on an extended periodic domain of
/// (2J+1) periods with the noise tiled across copies.
///
/// Strang splitting per step: exact spectral half heat step, pointwise
/// factor exp(beta*W*sqrt(dt/dx) - beta^2*dt/(2dx)), half heat step.
/// Consecutive half steps are fused.
WindingKernel unit_kernel(const NoiseSlab& slab, const GridSpec& spec);

/// G(x, y) = sum_j Z_j(x, y).
TorusKernel torus_reduce(const WindingKernel& kernel);

/// Same scheme solved directly on one period.
TorusKernel direct_torus_kernel(const NoiseSlab& slab, const GridSpec& spec);

/// Normalized image dx * G d; second member is log(mass) + log_norm.
std::pair<TorusDensity, double> apply(const TorusKernel& kernel, const TorusDensity& density);

/// Transposed application: dx * G^T d, normalized.
std::pair<TorusDensity, double> apply_transpose(const TorusKernel& kernel, const TorusDensity& density);

/// One time unit of the equation started from `density`, without forming the
/// kernel. Same result as apply(direct_torus_kernel(slab, spec), density) at
/// a fraction of the cost.
std::pair<TorusDensity, double> solve_unit(const NoiseSlab& slab, const GridSpec& spec, const TorusDensity& density);

/// Periodized Gaussian heat kernel sum_j q_t(x - y + j L) on the grid.
TorusKernel heat_reference(double t, const GridSpec& spec);

/// q_t(x) = (2 pi t)^{-1/2} exp(-x^2 / (2t)).
double heat_density(double t, double x) noexcept;

/// Kernel summary exported to diagnostics.
struct KernelChecksum {
  double sum = 0.0;
  double max = 0.0;
  double min = 0.0;
  double log_norm = 0.0;
};
KernelChecksum checksum(const TorusKernel& kernel);

/// Largest fraction of a column's mass carried by the outermost windings
/// |j| = J.
double boundary_winding_fraction(const WindingKernel& kernel);

/// Max relative entrywise difference between two torus kernels, log-norms
/// included.
double max_relative_difference(const TorusKernel& a, const TorusKernel& b);

}  // namespace windlab
