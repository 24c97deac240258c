#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "windlab/errors.hpp"
#include "windlab/gibbs.hpp"
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

TEST_CASE("categorical draws") {
  Rng rng(5);
  const std::vector<double> zero = {0.0, 0.0};
  const std::vector<double> negative = {1.0, -0.1};
  CHECK_THROWS_AS(sample_categorical(zero, rng), DegenerateInput);
  CHECK_THROWS_AS(sample_categorical(negative, rng), DegenerateInput);
  const std::vector<double> w = {1.0, 0.0, 3.0};
  int counts[3] = {0, 0, 0};
  for (int i = 0; i < 40000; ++i) ++counts[sample_categorical(w, rng)];
  CHECK(counts[1] == 0);
  CHECK(counts[0] / 40000.0 == doctest::Approx(0.25).epsilon(0.03));
}

TEST_CASE("free increment law is a sampled Gaussian") {
  const GridSpec s = spec16(0.0);
  const KernelStack k = replica_kernels(s, 1, 1);
  for (int to : {0, 3, 12}) {
    const WindingLaw law = increment_law(k.winding[0], to, 0);
    double total = 0.0, norm = 0.0;
    for (int j = -4; j <= 4; ++j) {
      total += law(j);
      norm += oracle::gaussian(j + to * s.dx());
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    for (int j = -3; j <= 3; ++j) CHECK(law(j) == doctest::Approx(oracle::gaussian(j + to * s.dx()) / norm).epsilon(1e-4));
  }
}

TEST_CASE("partition function of a two-step path") {
  const GridSpec s = spec16(1.0);
  const KernelStack k = replica_kernels(s, 8, 2);
  const ForwardPass pass = forward_pass(k.torus, BoundaryCondition::delta(0));
  const auto& g1 = k.torus[0];
  const auto& g2 = k.torus[1];
  double z = 0.0;
  for (int y1 = 0; y1 < 16; ++y1) {
    for (int y2 = 0; y2 < 16; ++y2) z += s.dx() * s.dx() * g2(y2, y1) * g1(y1, 0);
  }
  CHECK(pass.log_partition == doctest::Approx(std::log(z) + g1.log_norm + g2.log_norm).epsilon(1e-12));
}

TEST_CASE("path marginal matches the exact two-step law") {
  const GridSpec s = spec16(1.0);
  const KernelStack k = replica_kernels(s, 3, 2);
  const auto& g1 = k.torus[0];
  const auto& g2 = k.torus[1];
  std::vector<double> exact(16);
  double total = 0.0;
  for (int x1 = 0; x1 < 16; ++x1) {
    double tail = 0.0;
    for (int y = 0; y < 16; ++y) tail += g2(y, x1);
    exact[static_cast<std::size_t>(x1)] = g1(x1, 0) * tail;
    total += exact[static_cast<std::size_t>(x1)];
  }
  const ForwardPass pass = forward_pass(k.torus, BoundaryCondition::delta(0));
  Rng rng(17);
  const int draws = 20000;
  std::vector<int> counts(16, 0);
  for (int i = 0; i < draws; ++i) {
    const PathSample p = sample_path(k.torus, pass, BoundaryCondition::lebesgue(), rng);
    REQUIRE(p.steps() == 2);
    CHECK(p.x[0] == 0);
    ++counts[static_cast<std::size_t>(p.x[1])];
  }
  for (int x = 0; x < 16; ++x) {
    const double q = exact[static_cast<std::size_t>(x)] / total;
    const double se = std::sqrt(q * (1 - q) / draws);
    CHECK(std::abs(counts[static_cast<std::size_t>(x)] / double(draws) - q) < 5 * se + 1e-9);
  }
}

TEST_CASE("increments add up and the characteristic function starts at one") {
  const GridSpec s = spec16(1.0);
  const KernelStack k = replica_kernels(s, 4, 6);
  Rng rng(2);
  const PathSample p = sample_path(k.torus, BoundaryCondition::lebesgue(), BoundaryCondition::delta(0), rng);
  const WindingSample w = sample_increments(p, k.winding, rng);
  REQUIRE(w.eta.size() == 6u);
  long sum = 0;
  for (std::size_t i = 0; i < 6; ++i) {
    sum += w.eta[i];
    CHECK(w.Y[i] == sum);
    CHECK(std::abs(w.eta[i]) <= 4);
  }
  const auto cf = conditional_cf(p, k.winding, 0.0, 1, 6);
  CHECK(cf.real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(cf.imag()) < 1e-12);
  CHECK(std::abs(conditional_cf(p, k.winding, 2.0, 1, 6)) <= 1.0 + 1e-12);
}

TEST_CASE("step moments of a law") {
  WindingLaw law{2, {0.1, 0.2, 0.4, 0.2, 0.1}};
  const StepMoments m = step_moments(law);
  CHECK(m.mean == doctest::Approx(0.0));
  CHECK(m.second == doctest::Approx(2 * 0.2 + 2 * 0.4));
  CHECK(m.p_pos == doctest::Approx(0.3));
  CHECK(m.p_neg == doctest::Approx(0.3));
  CHECK(m.edge == doctest::Approx(0.2));
}
