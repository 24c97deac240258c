#pragma once

#include <utility>
#include <vector>

#include "windlab/density.hpp"
#include "windlab/grid.hpp"
#include "windlab/rng.hpp"

namespace windlab {

/// Brownian bridge on [0, L] sampled at the M*L + 1 grid points, both ends 0.
struct BridgeSample {
  std::vector<double> values;
  double dx = 1.0;
};

BridgeSample sample_bridge(Rng& rng, const GridSpec& spec);

/// exp(beta * B) on the period grid, normalized. At beta = 1 this is the
/// normalized exponential of the bridge.
TorusDensity bridge_density(const BridgeSample& b, double beta = 1.0);

/// Two independent draws from the invariant law at the spec's beta.
std::pair<TorusDensity, TorusDensity> stationary_boundaries(Rng& rng, const GridSpec& spec);

/// dx * sum rho^2.
double l2_mass(const TorusDensity& rho);

}  // namespace windlab
