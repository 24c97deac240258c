#include "windlab/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "windlab/endpoint.hpp"
#include "windlab/errors.hpp"
#include "windlab/noise.hpp"
#include "windlab/stationary.hpp"

namespace windlab {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kEdgeMass = 1e-6;

EstimateReport make_report(const std::string& name, const RunningStats& s, const std::string& hash,
                           std::uint64_t seed) {
  EstimateReport r;
  r.name = name;
  r.value = s.mean();
  r.std_error = s.std_error();
  r.replicas = static_cast<int>(s.count());
  r.config_hash = hash;
  r.seed = seed;
  return r;
}

std::string study_hash(const Study& study, const std::string& what) {
  std::ostringstream extra;
  extra.imbue(std::locale::classic());
  extra << what << ";N=" << study.options.N << ";replicas=" << study.replicas.size();
  return settings_hash(study.settings, extra.str());
}

void require_paths(const Study& study, bool stationary) {
  if (stationary ? !study.options.stationary : !study.options.pinned) {
    throw ConfigError(std::string("study has no ") + (stationary ? "stationary" : "pinned") + " paths");
  }
  if (study.replicas.size() < 2) throw ConfigError("replicas: at least 2 are required");
}

const PathRecord& path_of(const ReplicaRecord& r, bool stationary) { return stationary ? r.stationary : r.pinned; }

double truncation_fraction(const Study& study, bool stationary) {
  std::size_t hits = 0;
  for (const auto& r : study.replicas) hits += path_of(r, stationary).max_edge > kEdgeMass ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(study.replicas.size());
}

/// Jackknife standard error of the sample variance, O(n).
double variance_se(std::span<const double> xs) {
  const std::size_t n = xs.size();
  if (n < 3) return 0.0;
  double s1 = 0.0;
  double s2 = 0.0;
  for (double x : xs) {
    s1 += x;
    s2 += x * x;
  }
  return jackknife_se(n, [&](std::size_t i) {
    const double m = static_cast<double>(n - 1);
    const double a = s1 - xs[i];
    const double b = s2 - xs[i] * xs[i];
    return (b - a * a / m) / (m - 1.0);
  });
}

double sample_variance(std::span<const double> xs) { return summarize(xs).variance(); }

// Per replica lag-sum and lag covariances from exact conditional moments.
struct LagSums {
  std::vector<double> sigma;                 // per replica
  std::vector<std::vector<double>> lags;     // [lag][replica]
};

LagSums lag_sums(const Study& study, int n_max) {
  const int N = study.options.N;
  LagSums out;
  out.sigma.resize(study.replicas.size());
  out.lags.assign(static_cast<std::size_t>(n_max) + 1, std::vector<double>(study.replicas.size()));
  for (std::size_t r = 0; r < study.replicas.size(); ++r) {
    const auto& steps = study.replicas[r].stationary.steps;
    double c0 = 0.0;
    for (const auto& s : steps) c0 += s.second;
    c0 /= N;
    out.lags[0][r] = c0;
    double total = c0;
    for (int j = 1; j <= n_max; ++j) {
      double c = 0.0;
      for (int k = 0; k + j < N; ++k) c += steps[static_cast<std::size_t>(k)].mean * steps[static_cast<std::size_t>(k + j)].mean;
      c /= (N - j);
      out.lags[static_cast<std::size_t>(j)][r] = c;
      total += 2.0 * c;
    }
    out.sigma[r] = total;
  }
  return out;
}

struct ComplexStats {
  RunningStats re;
  RunningStats im;
};

ComplexStats cf_stats(const Study& study, std::size_t t, bool stationary) {
  if (t >= study.options.thetas.size()) throw IndexError("theta index out of range");
  ComplexStats s;
  for (const auto& r : study.replicas) {
    const auto z = path_of(r, stationary).cf[t];
    s.re.add(z.real());
    s.im.add(z.imag());
  }
  return s;
}

double log_mean_exp(const std::vector<double>& logs) {
  const double top = *std::max_element(logs.begin(), logs.end());
  double s = 0.0;
  for (double v : logs) s += std::exp(v - top);
  return top + std::log(s / static_cast<double>(logs.size()));
}

void require_replicas(int replicas) {
  if (replicas < 2) throw ConfigError("replicas: at least 2 are required, got " + std::to_string(replicas));
}

std::string op_hash(const RunSettings& settings, const std::string& what, int N, int replicas) {
  std::ostringstream extra;
  extra.imbue(std::locale::classic());
  extra << what << ";N=" << N << ";replicas=" << replicas;
  return settings_hash(settings, extra.str());
}

}  // namespace

std::string config_hash(const std::string& canonical) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

std::string settings_hash(const RunSettings& settings, const std::string& extra) {
  return config_hash(settings.spec.canonical() + ";seed=" + std::to_string(settings.seed) + ";" + extra);
}

EstimateReport sigma_annealed(const Study& study) {
  require_paths(study, false);
  const double N = study.options.N;
  RunningStats exact;
  RunningStats sampled;
  RunningStats diff;
  for (const auto& r : study.replicas) {
    const double a = r.pinned.exact_Y2 / N;
    const double b = static_cast<double>(r.pinned.Y) * static_cast<double>(r.pinned.Y) / N;
    exact.add(a);
    sampled.add(b);
    diff.add(b - a);
  }
  EstimateReport rep = make_report("sigma_annealed", exact, study_hash(study, "sigma"), study.settings.seed);
  rep.extras["N"] = N;
  rep.extras["sampled"] = sampled.mean();
  rep.extras["sampled_se"] = sampled.std_error();
  rep.extras["self_consistency_z"] = diff.std_error() > 0.0 ? diff.mean() / diff.std_error() : 0.0;
  rep.extras["truncation_fraction"] = truncation_fraction(study, false);
  return rep;
}

std::pair<EstimateReport, CovarianceSeries> sigma_stationary(const Study& study, int n_max) {
  require_paths(study, true);
  const int N = study.options.N;
  if (n_max < 0 || 2 * n_max >= N) {
    throw ConfigError("n_max: lag cutoff must satisfy 0 <= n_max < N/2, got " + std::to_string(n_max));
  }
  const LagSums sums = lag_sums(study, n_max);
  CovarianceSeries series;
  for (const auto& lag : sums.lags) {
    const RunningStats s = summarize(lag);
    series.estimate.push_back(s.mean());
    series.std_error.push_back(s.std_error());
  }
  EstimateReport rep =
      make_report("sigma_stationary", summarize(sums.sigma), study_hash(study, "sigma-stationary"), study.settings.seed);
  RunningStats direct;
  for (const auto& r : study.replicas) direct.add(r.stationary.exact_Y2 / N);
  rep.extras["N"] = N;
  rep.extras["n_max"] = n_max;
  rep.extras["direct"] = direct.mean();
  rep.extras["direct_se"] = direct.std_error();
  rep.extras["truncation_fraction"] = truncation_fraction(study, true);

  // Geometric tail beyond n_max from a log-linear fit of |c_j|, j >= 1.
  std::vector<double> xs;
  std::vector<double> ys;
  for (int j = 1; j <= n_max; ++j) {
    const double c = std::abs(series.estimate[static_cast<std::size_t>(j)]);
    if (c > 0.0) {
      xs.push_back(j);
      ys.push_back(std::log(c));
    }
  }
  double tail = kNaN;
  if (xs.size() >= 3) {
    const LinearFit fit = ols(xs, ys);
    if (fit.slope < 0.0) {
      const double q = std::exp(fit.slope);
      tail = 2.0 * std::exp(fit.intercept + fit.slope * n_max) * q / (1.0 - q);
    }
  }
  rep.extras["tail_bound"] = tail;
  return {rep, series};
}

EstimateReport sigma_displacement(const Study& study) {
  require_paths(study, false);
  RunningStats s;
  for (const auto& r : study.replicas) s.add(r.pinned.exact_D2 / study.options.N);
  EstimateReport rep = make_report("sigma_displacement", s, study_hash(study, "sigma-displacement"), study.settings.seed);
  rep.extras["period"] = study.settings.spec.period;
  return rep;
}

EstimateReport eta_mean(const Study& study, bool stationary) {
  require_paths(study, stationary);
  const double N = study.options.N;
  RunningStats exact;
  RunningStats sampled;
  for (const auto& r : study.replicas) {
    const auto& p = path_of(r, stationary);
    exact.add(p.exact_Y / N);
    sampled.add(static_cast<double>(p.Y) / N);
  }
  EstimateReport rep = make_report(stationary ? "eta_mean_stationary" : "eta_mean_pinned", exact,
                                   study_hash(study, "eta-mean"), study.settings.seed);
  rep.extras["sampled"] = sampled.mean();
  rep.extras["sampled_se"] = sampled.std_error();
  return rep;
}

EstimateReport char_fn(const Study& study, std::size_t t, bool stationary) {
  require_paths(study, stationary);
  const ComplexStats s = cf_stats(study, t, stationary);
  EstimateReport rep = make_report(stationary ? "psi_stationary" : "psi_pinned", s.re, study_hash(study, "cf"),
                                   study.settings.seed);
  rep.extras["theta"] = study.options.thetas[t];
  rep.extras["re"] = s.re.mean();
  rep.extras["im"] = s.im.mean();
  rep.extras["re_se"] = s.re.std_error();
  rep.extras["im_se"] = s.im.std_error();
  rep.extras["modulus"] = std::hypot(s.re.mean(), s.im.mean());
  return rep;
}

Comparison compare_sigma(const Study& study, int n_max) {
  const EstimateReport a = sigma_annealed(study);
  const auto [s, series] = sigma_stationary(study, n_max);
  const LagSums sums = lag_sums(study, n_max);
  RunningStats paired;
  for (std::size_t r = 0; r < study.replicas.size(); ++r) {
    paired.add(study.replicas[r].pinned.exact_Y2 / study.options.N - sums.sigma[r]);
  }
  return {a.value - s.value, std::hypot(a.std_error, s.std_error), paired.std_error()};
}

Comparison compare_char_fn(const Study& study, std::size_t t) {
  require_paths(study, false);
  require_paths(study, true);
  const ComplexStats p = cf_stats(study, t, false);
  const ComplexStats s = cf_stats(study, t, true);
  const double dre = p.re.mean() - s.re.mean();
  const double dim = p.im.mean() - s.im.mean();
  const double mod = std::hypot(dre, dim);
  // Standard error of the modulus along the direction of the difference.
  const double ure = mod > 0.0 ? dre / mod : 1.0;
  const double uim = mod > 0.0 ? dim / mod : 0.0;
  const double var_re = p.re.std_error() * p.re.std_error() + s.re.std_error() * s.re.std_error();
  const double var_im = p.im.std_error() * p.im.std_error() + s.im.std_error() * s.im.std_error();
  RunningStats paired;
  for (const auto& r : study.replicas) {
    const auto d = r.pinned.cf[t] - r.stationary.cf[t];
    paired.add(d.real() * ure + d.imag() * uim);
  }
  return {mod, std::sqrt(ure * ure * var_re + uim * uim * var_im), paired.std_error()};
}

std::vector<MixingRow> rho_mixing(const Study& study, const std::vector<int>& lags) {
  require_paths(study, true);
  const int N = study.options.N;
  for (int n : lags) {
    if (n < 1 || 4 * n > N) throw ConfigError("n_list: lags must satisfy 1 <= n <= N/4");
  }
  // Marginal moments pooled over all steps and replicas.
  double m1 = 0.0;
  double m2 = 0.0;
  double s1 = 0.0;
  double s2 = 0.0;
  double count = 0.0;
  double b1 = 0.0;
  double b2 = 0.0;
  double bcount = 0.0;
  const int B = kMixingBlock;
  for (const auto& r : study.replicas) {
    const auto& st = r.stationary.steps;
    for (const auto& s : st) {
      m1 += s.mean;
      m2 += s.second;
      s1 += s.p_pos - s.p_neg;
      s2 += s.p_pos + s.p_neg;
      count += 1.0;
    }
    for (int k = 0; k + B <= N; ++k) {
      double mean = 0.0;
      double var = 0.0;
      for (int i = k; i < k + B; ++i) {
        mean += st[static_cast<std::size_t>(i)].mean;
        var += st[static_cast<std::size_t>(i)].second - st[static_cast<std::size_t>(i)].mean * st[static_cast<std::size_t>(i)].mean;
      }
      b1 += mean;
      b2 += var + mean * mean;
      bcount += 1.0;
    }
  }
  m1 /= count;
  m2 /= count;
  s1 /= count;
  s2 /= count;
  b1 /= bcount;
  b2 /= bcount;
  const double var_eta = m2 - m1 * m1;
  const double var_sign = s2 - s1 * s1;
  const double var_block = b2 - b1 * b1;

  std::vector<MixingRow> rows;
  for (int n : lags) {
    MixingRow row;
    row.lag = n;
    double pe = 0.0;
    double ps = 0.0;
    double pairs = 0.0;
    double pb = 0.0;
    double bpairs = 0.0;
    for (const auto& r : study.replicas) {
      const auto& st = r.stationary.steps;
      for (int k = 0; k + n < N; ++k) {
        const auto& a = st[static_cast<std::size_t>(k)];
        const auto& c = st[static_cast<std::size_t>(k + n)];
        pe += a.mean * c.mean;
        ps += (a.p_pos - a.p_neg) * (c.p_pos - c.p_neg);
        pairs += 1.0;
      }
      if (n >= B) {
        for (int k = 0; k + n + B <= N; ++k) {
          double x = 0.0;
          double y = 0.0;
          for (int i = 0; i < B; ++i) {
            x += st[static_cast<std::size_t>(k + i)].mean;
            y += st[static_cast<std::size_t>(k + n + i)].mean;
          }
          pb += x * y;
          bpairs += 1.0;
        }
      }
    }
    row.single = var_eta > 0.0 ? (pe / pairs - m1 * m1) / var_eta : 0.0;
    row.sign = var_sign > 0.0 ? (ps / pairs - s1 * s1) / var_sign : 0.0;
    row.block = bpairs > 0.0 && var_block > 0.0 ? (pb / bpairs - b1 * b1) / var_block : kNaN;
    row.r_hat = std::max(std::abs(row.single), std::abs(row.sign));
    if (!std::isnan(row.block)) row.r_hat = std::max(row.r_hat, std::abs(row.block));
    rows.push_back(row);
  }
  return rows;
}

double lag_correlation(const std::vector<std::vector<double>>& sequences, int lag) {
  if (lag < 1) throw ConfigError("lag: must be >= 1");
  std::vector<double> a;
  std::vector<double> b;
  for (const auto& s : sequences) {
    for (std::size_t k = 0; k + static_cast<std::size_t>(lag) < s.size(); ++k) {
      a.push_back(s[k]);
      b.push_back(s[k + static_cast<std::size_t>(lag)]);
    }
  }
  return correlation(a, b);
}

KsResult clt_test(std::span<const double> samples, double sigma_hat, int N) {
  if (!(sigma_hat > 0.0)) throw ConfigError("sigma_hat: must be positive");
  if (N < 1) throw ConfigError("N: must be >= 1");
  if (samples.size() < 500) {
    throw ConfigError("samples: the CLT test needs at least 500, got " + std::to_string(samples.size()));
  }
  std::vector<double> z(samples.begin(), samples.end());
  const double scale = 1.0 / (sigma_hat * std::sqrt(static_cast<double>(N)));
  for (double& v : z) v *= scale;
  return ks_normal(z);
}

EstimateReport sigma_annealed(const RunSettings& settings, int N, int replicas) {
  if (N < 4) throw ConfigError("N: sigma_annealed needs N >= 4, got " + std::to_string(N));
  require_replicas(replicas);
  return sigma_annealed(winding_study(settings, StudyOptions{N, true, false, {}}, replicas));
}

std::pair<EstimateReport, CovarianceSeries> sigma_stationary(const RunSettings& settings, int N, int replicas,
                                                             int n_max) {
  if (n_max < 0 || 2 * n_max >= N) {
    throw ConfigError("n_max: lag cutoff must satisfy 0 <= n_max < N/2, got " + std::to_string(n_max));
  }
  require_replicas(replicas);
  return sigma_stationary(winding_study(settings, StudyOptions{N, false, true, {}}, replicas), n_max);
}

EstimateReport increment_moment(const RunSettings& settings, double p, int N, int k, int replicas) {
  if (!(p >= 1.0)) throw ConfigError("p: must be >= 1");
  if (k < 1 || k > N) throw ConfigError("k: must lie in 1..N");
  require_replicas(replicas);
  std::vector<double> values(static_cast<std::size_t>(replicas));
  parallel_for(replicas, settings.threads, [&](int i) {
    const std::uint64_t seed = seed_of(settings, i);
    const KernelStack kernels = replica_kernels(settings.spec, seed, N);
    Rng rng = make_rng(seed, Stream::path);
    const auto path = sample_path(kernels.torus, BoundaryCondition::lebesgue(), BoundaryCondition::delta(0), rng);
    const auto law = increment_law(kernels.winding[static_cast<std::size_t>(k - 1)], path.x[static_cast<std::size_t>(k)],
                                   path.x[static_cast<std::size_t>(k - 1)]);
    double v = 0.0;
    for (int j = -law.half_width; j <= law.half_width; ++j) v += std::pow(std::abs(static_cast<double>(j)), p) * law(j);
    values[static_cast<std::size_t>(i)] = v;
  });
  EstimateReport rep = make_report("increment_moment", summarize(values), op_hash(settings, "moment", N, replicas),
                                   settings.seed);
  rep.extras["p"] = p;
  rep.extras["k"] = k;
  return rep;
}

EstimateReport char_fn(const RunSettings& settings, double theta, int N, int replicas, bool stationary) {
  require_replicas(replicas);
  const Study study = winding_study(settings, StudyOptions{N, !stationary, stationary, {theta}}, replicas);
  return char_fn(study, 0, stationary);
}

EstimateReport quenched_variance(const RunSettings& settings, int N, int replicas) {
  require_replicas(replicas);
  std::vector<double> var(static_cast<std::size_t>(replicas));
  std::vector<double> mean(static_cast<std::size_t>(replicas));
  std::vector<double> lost(static_cast<std::size_t>(replicas));
  parallel_for(replicas, settings.threads, [&](int i) {
    const KernelStack kernels = replica_kernels(settings.spec, seed_of(settings, i), N);
    const LineDensity u = line_evolve(kernels.winding);
    const QuenchedMoments m = quenched_moments(u);
    var[static_cast<std::size_t>(i)] = m.variance;
    mean[static_cast<std::size_t>(i)] = m.mean;
    lost[static_cast<std::size_t>(i)] = u.mass_lost;
  });
  EstimateReport rep =
      make_report("quenched_variance", summarize(var), op_hash(settings, "quenched", N, replicas), settings.seed);
  const RunningStats m = summarize(mean);
  rep.extras["N"] = N;
  rep.extras["mean"] = m.mean();
  rep.extras["mean_se"] = m.std_error();
  rep.extras["max_mass_lost"] = *std::max_element(lost.begin(), lost.end());
  return rep;
}

MixingProfile contraction_study(const RunSettings& settings, int t_max, int replicas) {
  if (t_max < 1) throw ConfigError("t: must be >= 1");
  require_replicas(replicas);
  const int n = settings.spec.cells();
  std::vector<std::vector<double>> gaps(static_cast<std::size_t>(replicas));
  parallel_for(replicas, settings.threads, [&](int i) {
    const KernelStack kernels = replica_kernels(settings.spec, seed_of(settings, i), t_max);
    gaps[static_cast<std::size_t>(i)] =
        contraction_profile(kernels.torus, BoundaryCondition::delta(0), BoundaryCondition::delta(n / 2));
  });
  MixingProfile p;
  for (int t = 1; t <= t_max; ++t) {
    RunningStats s;
    for (const auto& g : gaps) s.add(g[static_cast<std::size_t>(t - 1)]);
    p.t.push_back(t);
    p.mean_gap.push_back(s.mean());
    p.std_error.push_back(s.std_error());
  }
  return p;
}

namespace {

LinearFit decay_fit(const std::vector<int>& t_list, const std::vector<double>& mean_gap) {
  std::vector<double> x;
  std::vector<double> y;
  for (std::size_t i = 0; i < t_list.size(); ++i) {
    const double g = mean_gap[static_cast<std::size_t>(t_list[i] - 1)];
    if (!(g > 0.0)) throw DegenerateInput("mixing fit: contraction gap is zero at t=" + std::to_string(t_list[i]));
    x.push_back(t_list[i]);
    y.push_back(std::log(g));
  }
  return ols(x, y);
}

}  // namespace

EstimateReport mixing_rate(const RunSettings& settings, const std::vector<int>& t_list, int replicas) {
  if (t_list.size() < 3) throw ConfigError("t_list: at least three times are required");
  for (int t : t_list) {
    if (t < 1) throw ConfigError("t_list: times must be >= 1");
  }
  require_replicas(replicas);
  const int t_max = *std::max_element(t_list.begin(), t_list.end());
  const int n = settings.spec.cells();
  std::vector<std::vector<double>> gaps(static_cast<std::size_t>(replicas));
  parallel_for(replicas, settings.threads, [&](int i) {
    const KernelStack kernels = replica_kernels(settings.spec, seed_of(settings, i), t_max);
    gaps[static_cast<std::size_t>(i)] =
        contraction_profile(kernels.torus, BoundaryCondition::delta(0), BoundaryCondition::delta(n / 2));
  });
  std::vector<double> total(static_cast<std::size_t>(t_max), 0.0);
  for (const auto& g : gaps) {
    for (int t = 0; t < t_max; ++t) total[static_cast<std::size_t>(t)] += g[static_cast<std::size_t>(t)];
  }
  auto mean_of = [&](std::size_t skip) {
    std::vector<double> m(total);
    const double count = skip < gaps.size() ? replicas - 1.0 : replicas;
    for (int t = 0; t < t_max; ++t) {
      if (skip < gaps.size()) m[static_cast<std::size_t>(t)] -= gaps[skip][static_cast<std::size_t>(t)];
      m[static_cast<std::size_t>(t)] /= count;
    }
    return m;
  };
  const LinearFit fit = decay_fit(t_list, mean_of(gaps.size()));
  const double se = jackknife_se(gaps.size(), [&](std::size_t i) { return -decay_fit(t_list, mean_of(i)).slope; });

  EstimateReport rep;
  rep.name = "mixing_rate";
  rep.value = -fit.slope;
  rep.std_error = se;
  rep.replicas = replicas;
  rep.config_hash = op_hash(settings, "mixing", t_max, replicas);
  rep.seed = settings.seed;
  rep.extras["r2"] = fit.r2;
  rep.extras["fit_se"] = fit.slope_se;
  rep.extras["intercept"] = fit.intercept;
  rep.extras["lower95"] = rep.value - 1.959964 * se;
  return rep;
}

TailProfile tail_profile(const RunSettings& settings, int replicas) {
  require_replicas(replicas);
  const int J = settings.spec.winding_half_width;
  std::vector<std::vector<double>> logs(static_cast<std::size_t>(J) + 1, std::vector<double>(static_cast<std::size_t>(replicas)));
  parallel_for(replicas, settings.threads, [&](int i) {
    const KernelStack kernels = replica_kernels(settings.spec, seed_of(settings, i), 1);
    const WindingKernel& k = kernels.winding.front();
    for (int j = 0; j <= J; ++j) {
      logs[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = 2.0 * (std::log(k(j, 0, 0)) + k.log_norm);
    }
  });
  TailProfile p;
  std::vector<double> j2;
  for (int j = 0; j <= J; ++j) {
    p.j.push_back(j);
    p.log_mean_z2.push_back(log_mean_exp(logs[static_cast<std::size_t>(j)]));
    j2.push_back(static_cast<double>(j) * j);
  }
  p.fit = ols(j2, p.log_mean_z2);
  return p;
}

RatioTable ratio_stationarity(const RunSettings& settings, int replicas, const std::vector<double>& offsets) {
  require_replicas(replicas);
  const GridSpec& spec = settings.spec;
  std::vector<int> cells;
  for (double o : offsets) {
    const double c = o * spec.cells_per_unit;
    if (o < 0.0 || o >= spec.length() || std::abs(c - std::round(c)) > 1e-9) {
      throw ConfigError("offsets: each offset must be a grid point in [0, L)");
    }
    cells.push_back(static_cast<int>(std::lround(c)));
  }
  std::vector<std::vector<double>> ratio(offsets.size(), std::vector<double>(static_cast<std::size_t>(replicas)));
  parallel_for(replicas, settings.threads, [&](int i) {
    const KernelStack kernels = replica_kernels(spec, seed_of(settings, i), 1);
    const WindingKernel& k = kernels.winding.front();
    for (std::size_t o = 0; o < offsets.size(); ++o) {
      ratio[o][static_cast<std::size_t>(i)] =
          k(0, cells[o], 0) * std::exp(k.log_norm) / heat_density(1.0, cells[o] * spec.dx());
    }
  });
  RatioTable table;
  for (std::size_t o = 0; o < offsets.size(); ++o) {
    const RunningStats s = summarize(ratio[o]);
    table.rows.push_back({offsets[o], s.mean(), s.std_error(), s.variance(), variance_se(ratio[o])});
  }
  for (std::size_t a = 0; a < offsets.size(); ++a) {
    for (std::size_t b = a + 1; b < offsets.size(); ++b) {
      std::vector<double> d(static_cast<std::size_t>(replicas));
      for (int i = 0; i < replicas; ++i) d[static_cast<std::size_t>(i)] = ratio[a][static_cast<std::size_t>(i)] - ratio[b][static_cast<std::size_t>(i)];
      const RunningStats ds = summarize(d);
      if (ds.std_error() > 0.0) table.mean_discrepancy = std::max(table.mean_discrepancy, std::abs(ds.mean()) / ds.std_error());
      const double dv = sample_variance(ratio[a]) - sample_variance(ratio[b]);
      const double se = jackknife_se(static_cast<std::size_t>(replicas), [&](std::size_t skip) {
        RunningStats x;
        RunningStats y;
        for (std::size_t r = 0; r < static_cast<std::size_t>(replicas); ++r) {
          if (r == skip) continue;
          x.add(ratio[a][r]);
          y.add(ratio[b][r]);
        }
        return x.variance() - y.variance();
      });
      if (se > 0.0) table.variance_discrepancy = std::max(table.variance_discrepancy, std::abs(dv) / se);
    }
  }
  return table;
}

StationaryCheck stationary_check(const RunSettings& settings, int replicas, int t) {
  require_replicas(replicas);
  if (t < 1) throw ConfigError("t: must be >= 1");
  const GridSpec& spec = settings.spec;
  std::vector<double> l2_bridge(static_cast<std::size_t>(replicas));
  std::vector<double> l2_evolved(static_cast<std::size_t>(replicas));
  std::vector<double> sup_bridge(static_cast<std::size_t>(replicas));
  std::vector<double> sup_evolved(static_cast<std::size_t>(replicas));
  std::vector<double> at0_bridge(static_cast<std::size_t>(replicas));
  std::vector<double> at0_evolved(static_cast<std::size_t>(replicas));
  parallel_for(replicas, settings.threads, [&](int i) {
    const std::uint64_t seed = seed_of(settings, i);
    const std::size_t r = static_cast<std::size_t>(i);
    Rng rng = make_rng(seed, Stream::bridge);
    const TorusDensity b = bridge_density(sample_bridge(rng, spec), spec.beta);
    l2_bridge[r] = l2_mass(b);
    sup_bridge[r] = *std::max_element(b.values.begin(), b.values.end());
    at0_bridge[r] = b.values.front();
    const NoiseGrid noise(spec, seed, t);
    TorusDensity e = TorusDensity::uniform(spec.cells(), spec.dx());
    for (int unit = 1; unit <= t; ++unit) e = solve_unit(slab(noise, unit), spec, e).first;
    l2_evolved[r] = l2_mass(e);
    sup_evolved[r] = *std::max_element(e.values.begin(), e.values.end());
    at0_evolved[r] = e.values.front();
  });
  StationaryCheck c;
  c.bridge = {summarize(l2_bridge), summarize(sup_bridge), summarize(at0_bridge), variance_se(l2_bridge)};
  c.evolved = {summarize(l2_evolved), summarize(sup_evolved), summarize(at0_evolved), variance_se(l2_evolved)};
  const double mse = std::hypot(c.bridge.l2.std_error(), c.evolved.l2.std_error());
  const double vse = std::hypot(c.bridge.l2_variance_se, c.evolved.l2_variance_se);
  c.mean_z = mse > 0.0 ? std::abs(c.bridge.l2.mean() - c.evolved.l2.mean()) / mse : 0.0;
  c.variance_z = vse > 0.0 ? std::abs(c.bridge.l2.variance() - c.evolved.l2.variance()) / vse : 0.0;
  return c;
}

std::vector<SweepRow> sigma_sweep(const RunSettings& settings, const std::vector<int>& periods, int N, int replicas) {
  std::vector<SweepRow> rows;
  for (int L : periods) {
    RunSettings s = settings;
    s.spec.period = L;
    const Study study = winding_study(s, StudyOptions{N, true, false, {}}, replicas);
    rows.push_back({L, sigma_displacement(study), sigma_annealed(study)});
  }
  return rows;
}

}  // namespace windlab
