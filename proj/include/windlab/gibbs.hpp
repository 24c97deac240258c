#pragma once

#include <complex>
#include <span>
#include <vector>

#include "windlab/density.hpp"
#include "windlab/kernel.hpp"
#include "windlab/rng.hpp"

namespace windlab {

/// Normalized forward vectors a_0..a_N of the transfer recursion
/// a_k ∝ dx * G_k a_{k-1}, with a_0 = g.
struct ForwardPass {
  std::vector<TorusDensity> forward;
  /// log of the path partition function with end weight f.
  double log_partition = 0.0;
};

ForwardPass forward_pass(std::span<const TorusKernel> kernels, const BoundaryCondition& g,
                         const BoundaryCondition& f = BoundaryCondition::lebesgue());

/// Grid path x_0..x_N drawn from the polymer measure with end weight f and
/// start weight g.
struct PathSample {
  std::vector<int> x;
  double log_partition = 0.0;

  int steps() const noexcept { return static_cast<int>(x.size()) - 1; }
};

/// Backward sampling from a precomputed forward pass.
PathSample sample_path(std::span<const TorusKernel> kernels, const ForwardPass& pass, const BoundaryCondition& f,
                       Rng& rng);

PathSample sample_path(std::span<const TorusKernel> kernels, const BoundaryCondition& f, const BoundaryCondition& g,
                       Rng& rng);

/// Law of one winding increment, j in [-J, J].
struct WindingLaw {
  int half_width = 0;
  std::vector<double> p;

  double operator()(int j) const { return p[static_cast<std::size_t>(j + half_width)]; }
};

WindingLaw increment_law(const WindingKernel& kernel, int x_to, int x_from);

/// Conditional summaries of one increment law.
struct StepMoments {
  double mean = 0.0;
  double second = 0.0;
  double p_pos = 0.0;
  double p_neg = 0.0;
  double edge = 0.0;  // mass on |j| = J
};

StepMoments step_moments(const WindingLaw& law);

struct WindingSample {
  std::vector<int> eta;
  std::vector<long> Y;  // Y[k-1] = eta_1 + ... + eta_k

  long total() const noexcept { return Y.empty() ? 0 : Y.back(); }
};

WindingSample sample_increments(const PathSample& path, std::span<const WindingKernel> kernels, Rng& rng);

/// Product over k in [k_lo, k_hi] (1-based) of sum_j P[eta_k = j] exp(i theta j / sqrt(N)),
/// N the number of path steps.
std::complex<double> conditional_cf(const PathSample& path, std::span<const WindingKernel> kernels, double theta,
                                    int k_lo, int k_hi);

/// Inverse-CDF draw over nonnegative weights in index order.
int sample_categorical(std::span<const double> weights, Rng& rng);

}  // namespace windlab
