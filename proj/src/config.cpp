#include "windlab/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "windlab/errors.hpp"
#include "windlab/estimators.hpp"

namespace windlab {
namespace {

const std::vector<std::pair<Experiment, std::string>>& experiment_table() {
  static const std::vector<std::pair<Experiment, std::string>> table = {
      {Experiment::kernel_check, "kernel-check"},
      {Experiment::sigma, "sigma"},
      {Experiment::sigma_stationary, "sigma-stationary"},
      {Experiment::mixing, "mixing"},
      {Experiment::clt, "clt"},
      {Experiment::stationary_check, "stationary-check"},
      {Experiment::tails, "tails"},
      {Experiment::ratio_stationarity, "ratio-stationarity"},
      {Experiment::moments, "moments"},
      {Experiment::cf_compare, "cf-compare"},
      {Experiment::sweep_l, "sweep-L"},
  };
  return table;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string join_names() {
  std::string out;
  for (const auto& name : experiment_names()) {
    if (!out.empty()) out += ", ";
    out += name;
  }
  return out;
}

[[noreturn]] void bad_value(const std::string& key, const ConfigEntry& e, const std::string& why) {
  throw ConfigError(key + ": " + why + " (got '" + e.value + "' at " + e.where + ")");
}

long long to_integer(const std::string& key, const ConfigEntry& e) {
  long long v = 0;
  const char* first = e.value.data();
  const char* last = first + e.value.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) bad_value(key, e, "expected an integer");
  return v;
}

int to_int(const std::string& key, const ConfigEntry& e, long long lo, long long hi) {
  const long long v = to_integer(key, e);
  if (v < lo || v > hi) bad_value(key, e, "out of range [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return static_cast<int>(v);
}

double to_real(const std::string& key, const ConfigEntry& e) {
  double v = 0.0;
  const char* first = e.value.data();
  const char* last = first + e.value.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) bad_value(key, e, "expected a finite number");
  return v;
}

bool to_bool(const std::string& key, const ConfigEntry& e) {
  if (e.value == "1" || e.value == "true" || e.value == "yes" || e.value == "on") return true;
  if (e.value == "0" || e.value == "false" || e.value == "no" || e.value == "off") return false;
  bad_value(key, e, "expected a boolean");
}

void apply_entry(ExperimentConfig& c, const std::string& key, const ConfigEntry& e) {
  if (key == "experiment") {
    try {
      c.experiment = parse_experiment(e.value);
    } catch (const ConfigError&) {
      bad_value(key, e, "expected one of " + join_names());
    }
  } else if (key == "seed") {
    const long long v = to_integer(key, e);
    if (v < 0) bad_value(key, e, "must be nonnegative");
    c.seed = static_cast<std::uint64_t>(v);
  } else if (key == "replicas") {
    c.replicas = to_int(key, e, 2, 10'000'000);
  } else if (key == "beta") {
    const double v = to_real(key, e);
    if (v < 0.0) bad_value(key, e, "must be >= 0");
    c.spec.beta = v;
  } else if (key == "N") {
    c.N = to_int(key, e, 1, 100'000);
  } else if (key == "M") {
    c.spec.cells_per_unit = to_int(key, e, 8, 1 << 16);
  } else if (key == "L") {
    c.spec.period = to_int(key, e, 1, 1024);
  } else if (key == "J") {
    c.spec.winding_half_width = to_int(key, e, 2, 1024);
  } else if (key == "steps") {
    c.spec.steps_per_unit = to_int(key, e, 100, 1 << 24);
  } else if (key == "threads") {
    c.threads = to_int(key, e, 0, 4096);
  } else if (key == "out") {
    if (e.value.empty()) bad_value(key, e, "must not be empty");
    c.output_dir = e.value;
  } else if (key == "assert") {
    c.assert_thresholds = to_bool(key, e);
  } else if (key == "replay") {
    c.replay = to_int(key, e, 0, 10'000'000);
  } else if (key.rfind("threshold.", 0) == 0) {
    c.thresholds.set(key.substr(10), to_real(key, e));
  } else {
    throw ConfigError(key + ": unknown key at " + e.where);
  }
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [e, name] : experiment_table()) v.push_back(name);
    return v;
  }();
  return names;
}

std::string to_string(Experiment e) {
  for (const auto& [value, name] : experiment_table()) {
    if (value == e) return name;
  }
  return "unknown";
}

Experiment parse_experiment(const std::string& name) {
  for (const auto& [value, n] : experiment_table()) {
    if (n == name) return value;
  }
  throw ConfigError("experiment: unknown value '" + name + "'; expected one of " + join_names());
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {"experiment", "seed",  "replicas", "beta", "N",      "M",     "L",
                                                "J",          "steps", "threads",  "out",  "assert", "replay"};
  return keys;
}

std::string ExperimentConfig::canonical() const {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  out.precision(17);
  out << "experiment=" << (experiment ? to_string(*experiment) : "") << ";" << spec.canonical() << ";N=" << N
      << ";replicas=" << replicas << ";seed=" << seed;
  if (replay) out << ";replay=" << *replay;
  for (const auto& [name, value] : thresholds.as_map()) out << ";threshold." << name << "=" << value;
  return out.str();
}

std::string ExperimentConfig::hash() const { return config_hash(canonical()); }

void ExperimentConfig::validate() const {
  if (!experiment) throw ConfigError("experiment: missing; expected one of " + join_names());
  spec.validate();
  if (N < 1) throw ConfigError("N: must be >= 1");
  if (replicas < 2) throw ConfigError("replicas: must be >= 2");
  if (threads < 0) throw ConfigError("threads: must be >= 0");
  if (replay && *replay >= replicas) throw ConfigError("replay: index must be below replicas");
}

ConfigEntries read_config_text(const std::string& text, const std::string& source) {
  ConfigEntries entries;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string where = source + ":" + std::to_string(number);
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key = value at " + where);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const bool threshold = key.rfind("threshold.", 0) == 0;
    if (!threshold && std::find(config_keys().begin(), config_keys().end(), key) == config_keys().end()) {
      throw ConfigError(key + ": unknown key at " + where);
    }
    if (entries.count(key) != 0) throw ConfigError(key + ": duplicate key at " + where);
    entries[key] = {value, where};
  }
  return entries;
}

ConfigEntries read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return read_config_text(text.str(), path);
}

ExperimentConfig parse_config(const ConfigEntries& file_entries, const ConfigEntries& flag_entries) {
  ExperimentConfig c;
  for (const auto& [key, e] : file_entries) apply_entry(c, key, e);
  for (const auto& [key, e] : flag_entries) apply_entry(c, key, e);
  c.validate();
  return c;
}

}  // namespace windlab
