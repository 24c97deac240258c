#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "windlab/endpoint.hpp"
#include "windlab/errors.hpp"
#include "windlab/study.hpp"

using namespace windlab;

namespace {
GridSpec spec16(double beta) {
  GridSpec s;
  s.cells_per_unit = 16;
  s.beta = beta;
  return s;
}
}  // namespace

TEST_CASE("line law equals the exhaustive two-step sum") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const KernelStack k = replica_kernels(spec16(1.0), seed, 2);
    const IntegerLaw law = integer_part_law(line_evolve(k.winding));
    const auto exact = oracle::two_step_winding_law(k.winding[0], k.winding[1], 0);
    double worst = 0.0;
    for (int j = -8; j <= 8; ++j) worst = std::max(worst, std::abs(law.at(j) - exact[static_cast<std::size_t>(j + 8)]));
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("free quenched variance is the grid Gaussian variance") {
  const GridSpec s = spec16(0.0);
  for (int N : {1, 2, 4}) {
    const KernelStack k = replica_kernels(s, 1, N);
    const LineDensity d = line_evolve(k.winding);
    const QuenchedMoments q = quenched_moments(d);
    CHECK(q.variance == doctest::Approx(oracle::grid_heat_variance(N, 16, s.dx(), 1.0)).epsilon(1e-4));
    CHECK(d.mass_lost < 1e-8);
  }
}

TEST_CASE("narrow line truncation is rejected") {
  const KernelStack k = replica_kernels(spec16(0.0), 1, 4);
  CHECK_THROWS_AS(line_evolve(k.winding, 1), ConfigError);
  CHECK(default_line_width(64, 4) == 36);
}

TEST_CASE("evolution keeps unit mass and the free flow fixes the uniform law") {
  const KernelStack k = replica_kernels(spec16(0.0), 1, 3);
  const TorusDensity u = evolve_density(k.torus, BoundaryCondition::lebesgue());
  const TorusDensity b = backward_density(k.torus, BoundaryCondition::lebesgue());
  CHECK(u.total() == doctest::Approx(1.0).epsilon(1e-12));
  for (double v : u.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-10));
  for (double v : b.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("free contraction gap of antipodal deltas") {
  const GridSpec s = spec16(0.0);
  const KernelStack k = replica_kernels(s, 1, 1);
  const double gap = contraction_gap(k.torus, BoundaryCondition::delta(0), BoundaryCondition::delta(8));
  double exact = 0.0;
  for (int x = 0; x < 16; ++x) {
    exact = std::max(exact, std::abs(oracle::periodic_heat(1.0, x * s.dx(), 1.0) -
                                     oracle::periodic_heat(1.0, (x - 8) * s.dx(), 1.0)));
  }
  CHECK(gap == doctest::Approx(exact).epsilon(1e-6));
  CHECK(gap == doctest::Approx(4 * std::exp(-2 * std::numbers::pi * std::numbers::pi)).epsilon(1e-3));
}

TEST_CASE("contraction profile decreases under noise") {
  const KernelStack k = replica_kernels(spec16(1.0), 5, 4);
  const auto p = contraction_profile(k.torus, BoundaryCondition::delta(0), BoundaryCondition::delta(8));
  REQUIRE(p.size() == 4u);
  for (std::size_t i = 1; i < p.size(); ++i) CHECK(p[i] < p[i - 1]);
}
