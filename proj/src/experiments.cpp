#include "windlab/experiments.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <numbers>
#include <sstream>

#include "windlab/endpoint.hpp"
#include "windlab/errors.hpp"
#include "windlab/estimators.hpp"
#include "windlab/noise.hpp"
#include "windlab/version.hpp"

namespace windlab {
namespace {

using nlohmann::json;

RunSettings settings_of(const ExperimentConfig& c) { return RunSettings{c.spec, c.seed, c.threads}; }

Check check_below(const std::string& name, double value, double limit) {
  return {name, value, "< " + format_number(limit), value < limit};
}

Check check_above(const std::string& name, double value, double limit) {
  return {name, value, "> " + format_number(limit), value > limit};
}

json report_json(const EstimateReport& r) {
  json j = {{"name", r.name},         {"value", r.value}, {"std_error", r.std_error},
            {"replicas", r.replicas}, {"seed", r.seed},   {"config_hash", r.config_hash}};
  for (const auto& [k, v] : r.extras) j["extras"][k] = std::isfinite(v) ? json(v) : json(format_number(v));
  return j;
}

void add_truncation_warning(ExperimentResult& out, double fraction) {
  if (fraction > 1e-3) {
    out.warnings.push_back("increment laws with mass > 1e-6 on |j| = J in a fraction " + format_number(fraction) +
                           " of paths");
  }
}

ExperimentResult kernel_check(const ExperimentConfig& c) {
  ExperimentResult out;
  out.table = CsvTable(c.hash(), {"replica", "seed", "beta", "periodization_error", "heat_error", "sum", "max", "min",
                                  "log_norm", "boundary_fraction"});
  const int R = c.replicas;
  const RunSettings s = settings_of(c);
  struct Row {
    double perio, heat, fraction;
    KernelChecksum sum;
  };
  std::vector<Row> rows(static_cast<std::size_t>(R));
  const TorusKernel reference = heat_reference(1.0, c.spec);
  parallel_for(R, c.threads, [&](int i) {
    const NoiseGrid noise(c.spec, seed_of(s, i), 1);
    const WindingKernel k = unit_kernel(slab(noise, 1), c.spec);
    const TorusKernel g = torus_reduce(k);
    const TorusKernel direct = direct_torus_kernel(slab(noise, 1), c.spec);
    rows[static_cast<std::size_t>(i)] = {max_relative_difference(g, direct),
                                         c.spec.beta == 0.0 ? max_relative_difference(g, reference) : std::nan(""),
                                         boundary_winding_fraction(k), checksum(g)};
  });
  double worst = 0.0;
  double worst_heat = 0.0;
  double worst_fraction = 0.0;
  for (int i = 0; i < R; ++i) {
    const Row& r = rows[static_cast<std::size_t>(i)];
    out.table.row().add(i).add(seed_of(s, i)).add(c.spec.beta).add(r.perio).add(r.heat).add(r.sum.sum).add(r.sum.max)
        .add(r.sum.min).add(r.sum.log_norm).add(r.fraction);
    worst = std::max(worst, r.perio);
    if (!std::isnan(r.heat)) worst_heat = std::max(worst_heat, r.heat);
    worst_fraction = std::max(worst_fraction, r.fraction);
  }
  out.summary = {{"max_periodization_error", worst}, {"max_boundary_fraction", worst_fraction}};
  out.checks.push_back(check_below("periodization_error", worst, c.thresholds.periodization));
  if (c.spec.beta == 0.0) {
    out.summary["max_heat_error"] = worst_heat;
    out.checks.push_back(check_below("heat_reference_error", worst_heat, c.thresholds.heat_reference));
  }
  if (worst_fraction > 1e-6) {
    out.warnings.push_back("outer windings |j| = J carry a column mass fraction up to " + format_number(worst_fraction));
  }
  return out;
}

// Shared by sigma and clt: one pinned study with per-replica rows.
ExperimentResult pinned_rows(const ExperimentConfig& c, const Study& study, const EstimateReport& sigma) {
  ExperimentResult out;
  out.table = CsvTable(c.hash(), {"replica", "seed", "Y", "w", "Y_over_sqrtN", "w_over_sqrtN", "exact_Y2_over_N",
                                  "standardized"});
  const double root = std::sqrt(static_cast<double>(c.N));
  const double d2 = sigma_displacement(study).value;
  const double scale = d2 > 0.0 ? 1.0 / (std::sqrt(d2) * root) : std::nan("");
  for (std::size_t i = 0; i < study.replicas.size(); ++i) {
    const auto& p = study.replicas[i].pinned;
    out.table.row().add(static_cast<int>(i)).add(study.replicas[i].seed).add(static_cast<long long>(p.Y))
        .add(p.displacement).add(static_cast<double>(p.Y) / root).add(p.displacement / root)
        .add(p.exact_Y2 / c.N).add(p.displacement * scale);
  }
  out.summary["sigma_annealed"] = report_json(sigma);
  add_truncation_warning(out, sigma.extras.at("truncation_fraction"));
  return out;
}

std::vector<Check> sigma_checks(const ExperimentConfig& c, const EstimateReport& sigma) {
  std::vector<Check> checks;
  const double floor = 1.0 - c.thresholds.z * sigma.std_error - c.thresholds.sigma_margin;
  checks.push_back({"sigma2_nondegenerate", sigma.value, ">= " + format_number(floor), sigma.value >= floor});
  if (c.spec.beta == 0.0) {
    checks.push_back(check_below("sigma2_free_error", std::abs(sigma.value - 1.0), c.thresholds.free_sigma));
  }
  return checks;
}

ExperimentResult sigma(const ExperimentConfig& c) {
  const Study study = winding_study(settings_of(c), StudyOptions{c.N, true, false, {}}, c.replicas);
  const EstimateReport s = sigma_annealed(study);
  ExperimentResult out = pinned_rows(c, study, s);
  out.checks = sigma_checks(c, s);
  return out;
}

ExperimentResult clt(const ExperimentConfig& c) {
  const Study study = winding_study(settings_of(c), StudyOptions{c.N, true, false, {}}, c.replicas);
  const EstimateReport s = sigma_annealed(study);
  ExperimentResult out = pinned_rows(c, study, s);
  std::vector<double> w;
  std::vector<double> y;
  for (const auto& r : study.replicas) {
    w.push_back(r.pinned.displacement);
    y.push_back(static_cast<double>(r.pinned.Y));
  }
  // The continuous displacement is scaled by its own variance; the integer
  // part is kept as a diagnostic, its lattice puts a floor under the KS distance.
  const EstimateReport d = sigma_displacement(study);
  const KsResult ks = clt_test(w, std::sqrt(d.value), c.N);
  const KsResult ks_floor = clt_test(y, std::sqrt(s.value), c.N);
  out.summary["sigma_displacement"] = report_json(d);
  out.summary["ks_statistic"] = ks.statistic;
  out.summary["ks_p_value"] = ks.p_value;
  out.summary["ks_statistic_integer_part"] = ks_floor.statistic;
  const double limit = c.spec.beta == 0.0 ? c.thresholds.ks_free : c.thresholds.ks_noisy;
  out.checks.push_back(check_below("ks_statistic", ks.statistic, limit));
  return out;
}

ExperimentResult sigma_stationary_exp(const ExperimentConfig& c) {
  const int n_max = std::min(12, (c.N - 1) / 2);
  const Study study = winding_study(settings_of(c), StudyOptions{c.N, true, true, {}}, c.replicas);
  const auto [s, series] = sigma_stationary(study, n_max);
  const EstimateReport a = sigma_annealed(study);
  const Comparison cmp = compare_sigma(study, n_max);
  const EstimateReport mean = eta_mean(study, true);
  ExperimentResult out;
  out.table = CsvTable(c.hash(), {"lag", "estimate", "std_error"});
  for (int j = 0; j <= n_max; ++j) {
    out.table.row().add(j).add(series.estimate[static_cast<std::size_t>(j)]).add(series.std_error[static_cast<std::size_t>(j)]);
  }
  out.summary = {{"sigma_stationary", report_json(s)},
                 {"sigma_annealed", report_json(a)},
                 {"eta_mean", report_json(mean)},
                 {"difference", cmp.difference},
                 {"joint_se", cmp.joint_se},
                 {"paired_se", cmp.paired_se}};
  out.checks.push_back({"route_agreement", std::abs(cmp.difference), "< " + format_number(c.thresholds.z) + " joint SE",
                        std::abs(cmp.difference) < c.thresholds.z * cmp.joint_se});
  for (int j = 6; j <= n_max; ++j) {
    const double v = series.estimate[static_cast<std::size_t>(j)];
    const double se = series.std_error[static_cast<std::size_t>(j)];
    out.checks.push_back({"lag_" + std::to_string(j) + "_zero", v, "|.| < " + format_number(c.thresholds.z) + " SE",
                          std::abs(v) < c.thresholds.z * se});
  }
  out.checks.push_back({"eta_mean_zero", mean.value, "|.| < " + format_number(c.thresholds.z) + " SE",
                        std::abs(mean.value) < c.thresholds.z * mean.std_error});
  add_truncation_warning(out, s.extras.at("truncation_fraction"));
  return out;
}

ExperimentResult mixing(const ExperimentConfig& c) {
  const RunSettings s = settings_of(c);
  std::vector<int> t_list;
  for (int t = 1; t <= c.N; ++t) t_list.push_back(t);
  const MixingProfile profile = contraction_study(s, c.N, c.replicas);
  const EstimateReport rate = mixing_rate(s, t_list, c.replicas);
  ExperimentResult out;
  out.table = CsvTable(c.hash(), {"t", "mean_gap", "std_error", "log_mean_gap"});
  for (std::size_t i = 0; i < profile.t.size(); ++i) {
    out.table.row().add(profile.t[i]).add(profile.mean_gap[i]).add(profile.std_error[i]).add(std::log(profile.mean_gap[i]));
  }
  out.summary["mixing_rate"] = report_json(rate);
  const double lower = rate.extras.at("lower95");
  const double r2 = rate.extras.at("r2");
  if (c.spec.beta == 0.0) {
    const double target = 2.0 * std::numbers::pi * std::numbers::pi;
    out.checks.push_back(
        check_below("free_rate_relative_error", std::abs(rate.value - target) / target, c.thresholds.free_rate_relative));
  } else {
    out.checks.push_back(check_above("rate_lower95", lower, 0.0));
    out.checks.push_back(check_above("fit_r2", r2, c.thresholds.mixing_r2));
  }
  return out;
}

ExperimentResult stationary_check_exp(const ExperimentConfig& c) {
  const StationaryCheck sc = stationary_check(settings_of(c), c.replicas, c.N);
  ExperimentResult out;
  out.table = CsvTable(c.hash(), {"source", "functional", "mean", "std_error", "variance", "variance_std_error"});
  auto side = [&](const char* name, const StationaryCheck::Side& sd) {
    out.table.row().add(name).add("l2").add(sd.l2.mean()).add(sd.l2.std_error()).add(sd.l2.variance()).add(sd.l2_variance_se);
    out.table.row().add(name).add("sup").add(sd.sup.mean()).add(sd.sup.std_error()).add(sd.sup.variance()).add(std::nan(""));
    out.table.row().add(name).add("at0").add(sd.at0.mean()).add(sd.at0.std_error()).add(sd.at0.variance()).add(std::nan(""));
  };
  side("bridge", sc.bridge);
  side("evolved", sc.evolved);
  out.summary = {{"t", c.N}, {"mean_z", sc.mean_z}, {"variance_z", sc.variance_z}};
  out.checks.push_back(check_below("l2_mean_z", sc.mean_z, c.thresholds.z));
  out.checks.push_back(check_below("l2_variance_z", sc.variance_z, c.thresholds.z));
  return out;
}

ExperimentResult tails(const ExperimentConfig& c) {
  const TailProfile p = tail_profile(settings_of(c), c.replicas);
  ExperimentResult out;
  out.table = CsvTable(c.hash(), {"j", "j2", "log_mean_z2", "fitted"});
  bool decreasing = true;
  for (std::size_t i = 0; i < p.j.size(); ++i) {
    const double j2 = static_cast<double>(p.j[i]) * p.j[i];
    out.table.row().add(p.j[i]).add(j2).add(p.log_mean_z2[i]).add(p.fit.intercept + p.fit.slope * j2);
    if (i > 0 && !(p.log_mean_z2[i] < p.log_mean_z2[i - 1])) decreasing = false;
  }
  out.summary = {{"slope", p.fit.slope}, {"intercept", p.fit.intercept}, {"r2", p.fit.r2}};
  out.checks.push_back({"decreasing_in_j", decreasing ? 1.0 : 0.0, "== 1", decreasing});
  if (c.spec.beta == 0.0) {
    out.checks.push_back(check_below("free_slope_error", std::abs(p.fit.slope + 1.0), c.thresholds.free_tail_slope));
  } else {
    out.checks.push_back(check_above("fit_r2", p.fit.r2, c.thresholds.tail_r2));
  }
  return out;
}

ExperimentResult ratio(const ExperimentConfig& c) {
  const RatioTable t = ratio_stationarity(settings_of(c), c.replicas, {0.0, 0.25, 0.5});
  ExperimentResult out;
  out.table = CsvTable(c.hash(), {"offset", "mean", "mean_std_error", "variance", "variance_std_error"});
  for (const auto& r : t.rows) out.table.row().add(r.offset).add(r.mean).add(r.mean_se).add(r.variance).add(r.variance_se);
  out.summary = {{"mean_discrepancy_se", t.mean_discrepancy}, {"variance_discrepancy_se", t.variance_discrepancy}};
  out.checks.push_back(check_below("mean_discrepancy_se", t.mean_discrepancy, c.thresholds.z));
  out.checks.push_back(check_below("variance_discrepancy_se", t.variance_discrepancy, c.thresholds.z));
  return out;
}

ExperimentResult moments(const ExperimentConfig& c) {
  const RunSettings s = settings_of(c);
  ExperimentResult out;
  out.table = CsvTable(c.hash(), {"kind", "N", "k", "p", "value", "std_error"});
  for (int N : {1, 2, 4}) {
    const EstimateReport q = quenched_variance(s, N, c.replicas);
    out.table.row().add("quenched_variance").add(N).add(N).add(2.0).add(q.value).add(q.std_error);
    out.table.row().add("quenched_mean").add(N).add(N).add(1.0).add(q.extras.at("mean")).add(q.extras.at("mean_se"));
    const double tol = std::max(c.thresholds.z * q.std_error, c.thresholds.quenched_relative * N);
    out.checks.push_back({"quenched_variance_N" + std::to_string(N), q.value,
                          "within " + format_number(tol) + " of " + std::to_string(N), std::abs(q.value - N) <= tol});
    out.summary["quenched_variance_N" + std::to_string(N)] = report_json(q);
  }
  std::vector<int> ks = {1, std::max(1, c.N / 2), c.N};
  for (int k : ks) {
    const EstimateReport m = increment_moment(s, 2.0, c.N, k, c.replicas);
    out.table.row().add("increment_moment").add(c.N).add(k).add(2.0).add(m.value).add(m.std_error);
  }
  return out;
}

ExperimentResult cf_compare(const ExperimentConfig& c) {
  const std::vector<double> thetas = {0.5, 1.0, 2.0};
  const Study study = winding_study(settings_of(c), StudyOptions{c.N, true, true, thetas}, c.replicas);
  ExperimentResult out;
  out.table = CsvTable(c.hash(), {"theta", "mode", "re", "im", "re_std_error", "im_std_error"});
  for (std::size_t t = 0; t < thetas.size(); ++t) {
    for (bool stationary : {false, true}) {
      const EstimateReport r = char_fn(study, t, stationary);
      out.table.row().add(thetas[t]).add(stationary ? "stationary" : "pinned").add(r.extras.at("re"))
          .add(r.extras.at("im")).add(r.extras.at("re_se")).add(r.extras.at("im_se"));
    }
    const Comparison cmp = compare_char_fn(study, t);
    const std::string key = "theta_" + format_number(thetas[t]);
    out.summary[key] = {{"difference", cmp.difference}, {"joint_se", cmp.joint_se}, {"paired_se", cmp.paired_se}};
    out.checks.push_back({"cf_difference_" + key, cmp.difference, "< " + format_number(c.thresholds.z) + " joint SE",
                          cmp.difference < c.thresholds.z * cmp.joint_se});
  }
  return out;
}

ExperimentResult sweep(const ExperimentConfig& c) {
  const std::vector<SweepRow> rows = sigma_sweep(settings_of(c), {1, 2, 4}, c.N, c.replicas);
  ExperimentResult out;
  out.table = CsvTable(c.hash(), {"L", "sigma2", "std_error", "sigma2_integer_part", "std_error_integer_part"});
  for (const auto& r : rows) {
    out.table.row().add(r.period).add(r.displacement.value).add(r.displacement.std_error).add(r.annealed.value)
        .add(r.annealed.std_error);
  }
  out.warnings.push_back("for L > 1 the stationary bridge normalization is an extrapolation; this sweep is exploratory");
  return out;
}

ExperimentResult replay(const ExperimentConfig& c) {
  const int i = *c.replay;
  const RunSettings s = settings_of(c);
  const std::uint64_t seed = seed_of(s, i);
  ExperimentResult out;
  const Experiment e = *c.experiment;
  const bool single_unit = e == Experiment::kernel_check || e == Experiment::tails || e == Experiment::ratio_stationarity;
  const int units = single_unit ? 1 : c.N;
  const KernelStack kernels = replica_kernels(c.spec, seed, units);
  out.table = CsvTable(c.hash(), {"replica", "seed", "unit", "sum", "max", "min", "log_norm"});
  for (int u = 0; u < units; ++u) {
    const KernelChecksum k = checksum(kernels.torus[static_cast<std::size_t>(u)]);
    out.table.row().add(i).add(seed).add(u + 1).add(k.sum).add(k.max).add(k.min).add(k.log_norm);
  }
  out.summary = {{"replica", i}, {"seed", seed}};
  if (e == Experiment::sigma || e == Experiment::clt || e == Experiment::sigma_stationary || e == Experiment::cf_compare) {
    const ReplicaRecord rec = study_replica(s, StudyOptions{c.N, true, true, {}}, i);
    out.summary["pinned"] = {{"Y", rec.pinned.Y}, {"w", rec.pinned.displacement}, {"exact_Y2", rec.pinned.exact_Y2}};
    out.summary["stationary"] = {{"Y", rec.stationary.Y}, {"exact_Y2", rec.stationary.exact_Y2}};
  }
  return out;
}

std::string timestamp() {
  const std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

json config_json(const ExperimentConfig& c) {
  json j = {{"experiment", to_string(*c.experiment)},
            {"seed", c.seed},
            {"replicas", c.replicas},
            {"beta", c.spec.beta},
            {"N", c.N},
            {"M", c.spec.cells_per_unit},
            {"L", c.spec.period},
            {"J", c.spec.winding_half_width},
            {"steps", c.spec.steps_per_unit},
            {"threads", c.threads},
            {"out", c.output_dir},
            {"assert", c.assert_thresholds}};
  if (c.replay) j["replay"] = *c.replay;
  return j;
}

json checks_json(const std::vector<Check>& checks) {
  json arr = json::array();
  for (const auto& ch : checks) {
    arr.push_back({{"name", ch.name}, {"value", std::isfinite(ch.value) ? json(ch.value) : json(format_number(ch.value))},
                   {"requirement", ch.requirement}, {"passed", ch.passed}});
  }
  return arr;
}

}  // namespace

bool ExperimentResult::passed() const {
  for (const auto& ch : checks) {
    if (!ch.passed) return false;
  }
  return true;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  if (config.replay) return replay(config);
  switch (*config.experiment) {
    case Experiment::kernel_check:
      return kernel_check(config);
    case Experiment::sigma:
      return sigma(config);
    case Experiment::sigma_stationary:
      return sigma_stationary_exp(config);
    case Experiment::mixing:
      return mixing(config);
    case Experiment::clt:
      return clt(config);
    case Experiment::stationary_check:
      return stationary_check_exp(config);
    case Experiment::tails:
      return tails(config);
    case Experiment::ratio_stationarity:
      return ratio(config);
    case Experiment::moments:
      return moments(config);
    case Experiment::cf_compare:
      return cf_compare(config);
    case Experiment::sweep_l:
      return sweep(config);
  }
  throw ConfigError("experiment: unhandled value");
}

RunOutcome run(const ExperimentConfig& config) {
  config.validate();
  namespace fs = std::filesystem;
  RunOutcome outcome;
  outcome.directory = fs::path(config.output_dir) / (to_string(*config.experiment) + "-" + config.hash());
  fs::create_directories(outcome.directory);

  json manifest = {{"name", to_string(*config.experiment)},
                   {"config", config_json(config)},
                   {"canonical", config.canonical()},
                   {"config_hash", config.hash()},
                   {"version", std::string("windlab ") + kVersion},
                   {"thresholds_version", kThresholdsVersion},
                   {"thresholds", config.thresholds.as_map()},
                   {"started", timestamp()},
                   {"status", "running"}};
  json seeds = json::array();
  const RunSettings s = settings_of(config);
  for (int i = 0; i < config.replicas; ++i) seeds.push_back(seed_of(s, i));
  manifest["replica_seeds"] = seeds;
  write_json(outcome.directory / "manifest.json", manifest);

  const auto start = std::chrono::steady_clock::now();
  std::vector<std::string> warnings;
  try {
    ExperimentResult result = run_experiment(config);
    result.table.write(outcome.directory / "results.csv");
    warnings = result.warnings;
    manifest["summary"] = result.summary;
    manifest["checks"] = checks_json(result.checks);
    manifest["status"] = result.passed() ? "ok" : "checks_failed";
    if (config.assert_thresholds && !result.passed()) {
      json failures = json::array();
      for (const auto& ch : result.checks) {
        if (!ch.passed) failures.push_back(checks_json({ch}).front());
      }
      write_json(outcome.directory / "failure.json",
                 {{"kind", "acceptance"}, {"config_hash", config.hash()}, {"failures", failures}});
      outcome.exit_code = kExitAssert;
    }
  } catch (const ReplicaError& e) {
    manifest["status"] = "error";
    manifest["error"] = e.what();
    write_json(outcome.directory / "failure.json",
               {{"kind", "error"},
                {"message", e.what()},
                {"replica", e.replica()},
                {"seed", e.seed()},
                {"replay", "windlab " + to_string(*config.experiment) + " --seed " + std::to_string(config.seed) +
                               " --replay " + std::to_string(e.replica())}});
    outcome.exit_code = kExitError;
  } catch (const std::exception& e) {
    manifest["status"] = "error";
    manifest["error"] = e.what();
    write_json(outcome.directory / "failure.json", {{"kind", "error"}, {"message", e.what()}});
    outcome.exit_code = kExitError;
  }
  manifest["wall_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  manifest["finished"] = timestamp();
  manifest["warnings"] = warnings;
  write_json(outcome.directory / "manifest.json", manifest);
  write_lines(outcome.directory / "warnings.log", warnings);
  return outcome;
}

}  // namespace windlab
