#pragma once

#include <span>
#include <vector>

#include "windlab/density.hpp"
#include "windlab/kernel.hpp"

namespace windlab {

/// Forward endpoint density after all kernels; log_mass carries the free energy.
TorusDensity evolve_density(std::span<const TorusKernel> kernels, const BoundaryCondition& nu);

/// Time-reversed evolution: transposed kernels applied last to first.
TorusDensity backward_density(std::span<const TorusKernel> kernels, const BoundaryCondition& nu);

/// Default line truncation ceil(4 sqrt(N)) + J.
int default_line_width(int N, int J);

/// Mass-loss levels for line_evolve.
inline constexpr double kLineLossWarn = 1e-4;
inline constexpr double kLineLossFail = 1e-2;

/// Winding-resolved endpoint law on the line, truncated to |j| <= j_tot.
/// `j_tot` <= 0 selects default_line_width. Throws DegenerateInput when the
/// dropped mass exceeds kLineLossFail.
LineDensity line_evolve(std::span<const WindingKernel> kernels, int j_tot = 0,
                        const BoundaryCondition& nu0 = BoundaryCondition::delta(0));

/// P(floor(w) = j) for j = j_min .. j_min + p.size() - 1.
struct IntegerLaw {
  int j_min = 0;
  std::vector<double> p;

  double at(int j) const {
    const int i = j - j_min;
    return i < 0 || i >= static_cast<int>(p.size()) ? 0.0 : p[static_cast<std::size_t>(i)];
  }
};

IntegerLaw integer_part_law(const LineDensity& d);

struct QuenchedMoments {
  double mean = 0.0;
  double variance = 0.0;
};

QuenchedMoments quenched_moments(const LineDensity& d);

/// Sup-norm distance between the two evolved densities after all kernels.
double contraction_gap(std::span<const TorusKernel> kernels, const BoundaryCondition& nu,
                       const BoundaryCondition& nu_prime);

/// Gap after each of the kernels, entry t-1 for time t.
std::vector<double> contraction_profile(std::span<const TorusKernel> kernels, const BoundaryCondition& nu,
                                        const BoundaryCondition& nu_prime);

}  // namespace windlab
