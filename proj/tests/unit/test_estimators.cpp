#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "windlab/errors.hpp"
#include "windlab/estimators.hpp"

using namespace windlab;

namespace {
RunSettings free16() {
  RunSettings s;
  s.spec.cells_per_unit = 16;
  s.spec.beta = 0.0;
  s.seed = 3;
  return s;
}
}  // namespace

TEST_CASE("config hash is FNV-1a") {
  CHECK(config_hash("") == "cbf29ce484222325");
  CHECK(config_hash("a") == "af63dc4c8601ec8c");
}

TEST_CASE("lag correlation self-test") {
  Rng rng(1);
  std::normal_distribution<double> z;
  std::vector<std::vector<double>> seqs;
  for (int r = 0; r < 50; ++r) {
    std::vector<double> s(3);
    for (double& v : s) v = z(rng);
    std::vector<double> eta;
    for (int k = 0; k < 30; ++k) eta.push_back(s[static_cast<std::size_t>(k % 3)]);
    seqs.push_back(eta);
  }
  CHECK(lag_correlation(seqs, 3) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(std::abs(lag_correlation(seqs, 1)) < 0.5);
}

TEST_CASE("free quenched variance is deterministic") {
  const RunSettings s = free16();
  const EstimateReport r = quenched_variance(s, 2, 4);
  CHECK(r.value == doctest::Approx(oracle::grid_heat_variance(2, 16, 1.0 / 16, 1.0)).epsilon(1e-4));
  CHECK(r.std_error < 1e-12);
}

TEST_CASE("free first-step moment against quadrature") {
  // x_1 has law p_1(x) on the circle; given x_1 the winding has law
  // proportional to p_1(j + x_1).
  const RunSettings s = free16();
  const double dx = 1.0 / 16;
  double num = 0.0, den = 0.0;
  for (int x = 0; x < 16; ++x) {
    const double w = oracle::periodic_heat(1.0, x * dx, 1.0);
    double z = 0.0, m = 0.0;
    for (int j = -4; j <= 4; ++j) {
      z += oracle::gaussian(j + x * dx);
      m += j * j * oracle::gaussian(j + x * dx);
    }
    num += w * m / z;
    den += w;
  }
  const EstimateReport r = increment_moment(s, 2.0, 8, 1, 400);
  CHECK(std::abs(r.value - num / den) < 4 * r.std_error + 1e-3);
}

TEST_CASE("free mixing rate") {
  const EstimateReport r = mixing_rate(free16(), {1, 2, 3, 4}, 2);
  CHECK(r.value == doctest::Approx(2 * std::numbers::pi * std::numbers::pi).epsilon(1e-3));
}

TEST_CASE("free annealed sigma is close to one") {
  const EstimateReport r = sigma_annealed(free16(), 16, 200);
  CHECK(std::abs(r.value - 1.0) < 0.1);
  CHECK(r.extras.count("truncation_fraction") == 1);
}

TEST_CASE("preconditions") {
  const RunSettings s = free16();
  CHECK_THROWS_AS(sigma_annealed(s, 2, 10), ConfigError);
  CHECK_THROWS_AS(sigma_stationary(s, 8, 10, 4), ConfigError);
  CHECK_THROWS_AS(increment_moment(s, 2.0, 4, 5, 10), ConfigError);
  CHECK_THROWS_AS(mixing_rate(s, {1, 2}, 4), ConfigError);
  const std::vector<double> few(10, 0.0);
  CHECK_THROWS_AS(clt_test(few, 1.0, 4), ConfigError);
  const Study st = winding_study(s, StudyOptions{8, true, true, {}}, 4);
  CHECK_THROWS_AS(rho_mixing(st, {3}), ConfigError);
  CHECK_NOTHROW(rho_mixing(st, {2}));
}

TEST_CASE("reductions of a shared study are consistent") {
  RunSettings s = free16();
  s.spec.beta = 1.0;
  const Study st = winding_study(s, StudyOptions{8, true, true, {1.0}}, 20);
  const auto [stat, series] = sigma_stationary(st, 3);
  CHECK(series.estimate.size() == 4u);
  CHECK(stat.value == doctest::Approx(series.estimate[0] + 2 * (series.estimate[1] + series.estimate[2] +
                                                                series.estimate[3])));
  const Comparison c = compare_sigma(st, 3);
  CHECK(c.difference == doctest::Approx(sigma_annealed(st).value - stat.value));
  const EstimateReport cf = char_fn(st, 0, false);
  CHECK(std::hypot(cf.extras.at("re"), cf.extras.at("im")) <= 1.0 + 1e-12);
}
