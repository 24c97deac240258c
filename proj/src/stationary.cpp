#include "windlab/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "windlab/errors.hpp"

namespace windlab {

BridgeSample sample_bridge(Rng& rng, const GridSpec& spec) {
  spec.validate();
  const int n = spec.cells();
  const double dx = spec.dx();
  std::normal_distribution<double> normal(0.0, std::sqrt(dx));
  BridgeSample b;
  b.dx = dx;
  b.values.assign(static_cast<std::size_t>(n) + 1, 0.0);
  for (int i = 1; i <= n; ++i) b.values[static_cast<std::size_t>(i)] = b.values[static_cast<std::size_t>(i - 1)] + normal(rng);
  const double end = b.values.back();
  for (int i = 1; i < n; ++i) b.values[static_cast<std::size_t>(i)] -= end * i / n;
  b.values.back() = 0.0;
  return b;
}

TorusDensity bridge_density(const BridgeSample& b, double beta) {
  if (b.values.size() < 2) throw ConfigError("bridge: needs at least two points");
  const std::size_t n = b.values.size() - 1;
  // Shift by the max so exp never overflows.
  const double top = beta * *std::max_element(b.values.begin(), b.values.end() - 1);
  TorusDensity rho{std::vector<double>(n), b.dx, 0.0};
  for (std::size_t i = 0; i < n; ++i) rho.values[i] = std::exp(beta * b.values[i] - top);
  rho.normalize();
  return rho;
}

std::pair<TorusDensity, TorusDensity> stationary_boundaries(Rng& rng, const GridSpec& spec) {
  TorusDensity rho = bridge_density(sample_bridge(rng, spec), spec.beta);
  TorusDensity rho_tilde = bridge_density(sample_bridge(rng, spec), spec.beta);
  return {std::move(rho), std::move(rho_tilde)};
}

double l2_mass(const TorusDensity& rho) {
  double s = 0.0;
  for (double v : rho.values) s += v * v;
  return s * rho.dx;
}

}  // namespace windlab
