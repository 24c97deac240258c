#include <cmath>
#include <vector>

#include "doctest.h"
#include "windlab/stats.hpp"

using namespace windlab;

TEST_CASE("running statistics agree with the two-pass formulas") {
  const std::vector<double> xs = {1.5, 2.0, -3.0, 4.25, 0.0, 7.0};
  const RunningStats r = summarize(xs);
  double m = 0;
  for (double x : xs) m += x;
  m /= 6;
  double v = 0;
  for (double x : xs) v += (x - m) * (x - m);
  v /= 5;
  CHECK(r.mean() == doctest::Approx(m).epsilon(1e-14));
  CHECK(r.variance() == doctest::Approx(v).epsilon(1e-14));
  CHECK(r.std_error() == doctest::Approx(std::sqrt(v / 6)).epsilon(1e-14));
}

TEST_CASE("normal cdf") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-12));
}

TEST_CASE("KS statistic of exact quantiles") {
  // Midpoint quantiles give the minimal distance 1/(2n).
  const int n = 400;
  std::vector<double> xs;
  for (int i = 0; i < n; ++i) {
    const double u = (i + 0.5) / n;
    double lo = -10, hi = 10;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (normal_cdf(mid) < u ? lo : hi) = mid;
    }
    xs.push_back(0.5 * (lo + hi));
  }
  const KsResult r = ks_normal(xs);
  CHECK(r.statistic == doctest::Approx(0.5 / n).epsilon(1e-6));
  CHECK(r.p_value > 0.999);
}

TEST_CASE("Kolmogorov tail") {
  // P(K > 1.3581) = 0.05 for the limiting distribution.
  CHECK(kolmogorov_p(1.3581 / std::sqrt(1e6), 1000000) == doctest::Approx(0.05).epsilon(0.01));
  CHECK(kolmogorov_p(0.0, 100) == doctest::Approx(1.0));
}

TEST_CASE("least squares on an exact line") {
  const std::vector<double> x = {0, 1, 2, 3, 4};
  std::vector<double> y;
  for (double v : x) y.push_back(2.0 - 0.5 * v);
  const LinearFit f = ols(x, y);
  CHECK(f.intercept == doctest::Approx(2.0));
  CHECK(f.slope == doctest::Approx(-0.5));
  CHECK(f.r2 == doctest::Approx(1.0));
  CHECK(f.slope_se < 1e-12);
}

TEST_CASE("jackknife of the mean is the usual standard error") {
  const std::vector<double> xs = {3, 1, 4, 1, 5, 9, 2, 6};
  const double total = 31;
  const double se = jackknife_se(xs.size(), [&](std::size_t i) { return (total - xs[i]) / 7.0; });
  CHECK(se == doctest::Approx(summarize(xs).std_error()).epsilon(1e-12));
}

TEST_CASE("correlation") {
  const std::vector<double> a = {1, 2, 3, 4};
  const std::vector<double> b = {2, 4, 6, 8};
  const std::vector<double> c = {1, 1, 1, 1};
  CHECK(correlation(a, b) == doctest::Approx(1.0));
  CHECK(correlation(a, c) == 0.0);
}
