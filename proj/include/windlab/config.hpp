#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "windlab/grid.hpp"
#include "windlab/thresholds.hpp"

namespace windlab {

enum class Experiment {
  kernel_check,
  sigma,
  sigma_stationary,
  mixing,
  clt,
  stationary_check,
  tails,
  ratio_stationarity,
  moments,
  cf_compare,
  sweep_l,
};

const std::vector<std::string>& experiment_names();
std::string to_string(Experiment e);
/// Throws ConfigError listing the valid names.
Experiment parse_experiment(const std::string& name);

struct ExperimentConfig {
  GridSpec spec;
  int N = 64;
  int replicas = 200;
  std::uint64_t seed = 1;
  std::optional<Experiment> experiment;
  std::string output_dir = "out";
  int threads = 0;  // 0 = auto
  bool assert_thresholds = false;
  std::optional<int> replay;  // run only this replica
  Thresholds thresholds;

  /// Canonical text of everything that affects results (threads excluded).
  std::string canonical() const;
  std::string hash() const;
  void validate() const;
};

/// A raw value and where it came from ("run.cfg:3", "--beta").
struct ConfigEntry {
  std::string value;
  std::string where;
};
using ConfigEntries = std::map<std::string, ConfigEntry>;

/// Parses `key = value` lines; '#' starts a comment. Unknown keys and
/// duplicates raise ConfigError naming the key and line.
ConfigEntries read_config_text(const std::string& text, const std::string& source);
ConfigEntries read_config_file(const std::string& path);

/// Applies file entries, then flag entries (flags win), onto the defaults.
/// Type and range errors name the key and its origin.
ExperimentConfig parse_config(const ConfigEntries& file_entries, const ConfigEntries& flag_entries);

/// Keys accepted in config files and as flags, besides `threshold.<name>`.
const std::vector<std::string>& config_keys();

}  // namespace windlab
