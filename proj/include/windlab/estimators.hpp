#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "windlab/stats.hpp"
#include "windlab/study.hpp"

namespace windlab {

struct EstimateReport {
  std::string name;
  double value = 0.0;
  double std_error = 0.0;
  int replicas = 0;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::map<std::string, double> extras;
};

/// FNV-1a of the canonical text, as 16 hex digits.
std::string config_hash(const std::string& canonical);

/// Hash of the settings plus any experiment-specific text.
std::string settings_hash(const RunSettings& settings, const std::string& extra = "");

/// Lag covariances E[eta_0 eta_j], j = 0..n_max.
struct CovarianceSeries {
  std::vector<double> estimate;
  std::vector<double> std_error;
};

// Reductions of a shared study.

/// E[Y_N^2] / N under the pinned boundaries, from exact conditional second
/// moments. Extras hold the sampled-eta estimate and the paired z-score
/// between the two.
EstimateReport sigma_annealed(const Study& study);

/// Lag-sum of the covariance series under stationary boundaries. Extras hold
/// E[Y_N^2] / N under the same boundaries.
std::pair<EstimateReport, CovarianceSeries> sigma_stationary(const Study& study, int n_max = 12);

/// E[x_N - x_0 + L Y_N]^2 / N under the pinned boundaries.
EstimateReport sigma_displacement(const Study& study);

/// Mean increment over all steps and replicas; `stationary` picks the path.
EstimateReport eta_mean(const Study& study, bool stationary);

/// psi_N(theta) for study theta index `t`; value is the real part, extras
/// hold re, im and their standard errors.
EstimateReport char_fn(const Study& study, std::size_t t, bool stationary);

/// Comparison of two estimates. `joint_se` combines their standard errors;
/// `paired_se` is the standard error of the per-replica difference.
struct Comparison {
  double difference = 0.0;
  double joint_se = 0.0;
  double paired_se = 0.0;
};

Comparison compare_sigma(const Study& study, int n_max = 12);
Comparison compare_char_fn(const Study& study, std::size_t t);

/// r(n) lower-bound proxy over the dictionary {single increments, signs,
/// block sums of length 4}.
struct MixingRow {
  int lag = 0;
  double single = 0.0;
  double sign = 0.0;
  double block = 0.0;  // NaN when lag < block length
  double r_hat = 0.0;
};

inline constexpr int kMixingBlock = 4;

std::vector<MixingRow> rho_mixing(const Study& study, const std::vector<int>& lags);

/// Pooled lag-n correlation of raw sequences; used as the estimator self-test.
double lag_correlation(const std::vector<std::vector<double>>& sequences, int lag);

/// Kolmogorov-Smirnov test of samples / (sigma_hat sqrt(N)) against N(0,1).
KsResult clt_test(std::span<const double> samples, double sigma_hat, int N);

// Self-contained operations; each runs its own replicas.

EstimateReport sigma_annealed(const RunSettings& settings, int N, int replicas);
std::pair<EstimateReport, CovarianceSeries> sigma_stationary(const RunSettings& settings, int N, int replicas,
                                                             int n_max = 12);

/// Average over replicas and pinned paths of sum_j |j|^p P[eta_k = j].
EstimateReport increment_moment(const RunSettings& settings, double p, int N, int k, int replicas);

EstimateReport char_fn(const RunSettings& settings, double theta, int N, int replicas, bool stationary);

/// Replica-mean quenched variance (and mean) of the line endpoint law.
EstimateReport quenched_variance(const RunSettings& settings, int N, int replicas);

/// Mean contraction gap between delta(0) and delta(cells/2) at each t.
struct MixingProfile {
  std::vector<int> t;
  std::vector<double> mean_gap;
  std::vector<double> std_error;
};

MixingProfile contraction_study(const RunSettings& settings, int t_max, int replicas);

/// Fit of log mean gap against t; value is the decay rate.
EstimateReport mixing_rate(const RunSettings& settings, const std::vector<int>& t_list, int replicas);

struct TailProfile {
  std::vector<int> j;
  std::vector<double> log_mean_z2;
  LinearFit fit;  // log mean Z^2 against j^2
};

TailProfile tail_profile(const RunSettings& settings, int replicas);

struct RatioRow {
  double offset = 0.0;
  double mean = 0.0;
  double mean_se = 0.0;
  double variance = 0.0;
  double variance_se = 0.0;
};

struct RatioTable {
  std::vector<RatioRow> rows;
  double mean_discrepancy = 0.0;      // max pairwise |difference| / SE
  double variance_discrepancy = 0.0;
};

RatioTable ratio_stationarity(const RunSettings& settings, int replicas, const std::vector<double>& offsets);

/// Functionals of the bridge sampler against long-run evolved densities.
struct StationaryCheck {
  struct Side {
    RunningStats l2;
    RunningStats sup;
    RunningStats at0;
    double l2_variance_se = 0.0;
  };
  Side bridge;
  Side evolved;
  double mean_z = 0.0;      // |mean difference| / joint SE of l2
  double variance_z = 0.0;  // same for the variance of l2
};

StationaryCheck stationary_check(const RunSettings& settings, int replicas, int t);

struct SweepRow {
  int period = 1;
  EstimateReport displacement;
  EstimateReport annealed;
};

std::vector<SweepRow> sigma_sweep(const RunSettings& settings, const std::vector<int>& periods, int N, int replicas);

}  // namespace windlab
