#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace windlab {

/// Welford accumulator.
class RunningStats {
 public:
  void add(double x) noexcept {
    ++n_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);
  }
  std::size_t count() const noexcept { return n_; }
  double mean() const noexcept { return mean_; }
  /// Unbiased sample variance; 0 below two samples.
  double variance() const noexcept { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
  double std_error() const noexcept { return n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0; }

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

RunningStats summarize(std::span<const double> xs);

double normal_cdf(double x) noexcept;

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// One-sample Kolmogorov-Smirnov test against the standard normal.
KsResult ks_normal(std::span<const double> samples);

/// Asymptotic Kolmogorov tail P(sqrt(n) D > x) with the small-sample
/// correction of Stephens.
double kolmogorov_p(double statistic, std::size_t n) noexcept;

struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
  double intercept_se = 0.0;
  double slope_se = 0.0;
  double r2 = 0.0;
};

/// Ordinary least squares y = a + b x.
LinearFit ols(std::span<const double> x, std::span<const double> y);

/// Jackknife standard error of a statistic over `n` replicas; `leave_out(i)`
/// evaluates it without replica i.
double jackknife_se(std::size_t n, const std::function<double(std::size_t)>& leave_out);

/// Pearson correlation; 0 when either side is constant.
double correlation(std::span<const double> a, std::span<const double> b);

}  // namespace windlab
