#include <cmath>

#include "doctest.h"
#include "windlab/stationary.hpp"
#include "windlab/stats.hpp"

using namespace windlab;

TEST_CASE("bridge is pinned at both ends") {
  GridSpec s;
  s.cells_per_unit = 16;
  Rng rng(1);
  const BridgeSample b = sample_bridge(rng, s);
  REQUIRE(b.values.size() == 17u);
  CHECK(b.values.front() == 0.0);
  CHECK(std::abs(b.values.back()) < 1e-14);
}

TEST_CASE("bridge covariance") {
  GridSpec s;
  s.cells_per_unit = 16;
  Rng rng(2);
  RunningStats mid, quarter, cross;
  for (int i = 0; i < 20000; ++i) {
    const BridgeSample b = sample_bridge(rng, s);
    mid.add(b.values[8] * b.values[8]);
    quarter.add(b.values[4] * b.values[4]);
    cross.add(b.values[4] * b.values[12]);
  }
  CHECK(std::abs(mid.mean() - 0.25) < 4 * mid.std_error());
  CHECK(std::abs(quarter.mean() - 0.1875) < 4 * quarter.std_error());
  CHECK(std::abs(cross.mean() - 0.0625) < 4 * cross.std_error());
}

TEST_CASE("bridge density normalization") {
  GridSpec s;
  s.cells_per_unit = 32;
  Rng rng(3);
  const BridgeSample b = sample_bridge(rng, s);
  const TorusDensity rho = bridge_density(b, 1.0);
  CHECK(rho.size() == 32);
  CHECK(rho.total() == doctest::Approx(1.0).epsilon(1e-12));
  for (double v : rho.values) CHECK(v > 0.0);
  const TorusDensity flat = bridge_density(b, 0.0);
  for (double v : flat.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(l2_mass(flat) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(l2_mass(rho) > 1.0);
}

TEST_CASE("stationary boundaries are independent draws") {
  GridSpec s;
  s.cells_per_unit = 16;
  Rng rng(4);
  const auto [a, b] = stationary_boundaries(rng, s);
  CHECK(a.values != b.values);
}
