#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "windlab/config.hpp"
#include "windlab/output.hpp"

namespace windlab {

/// One acceptance check of an experiment.
struct Check {
  std::string name;
  double value = 0.0;
  std::string requirement;
  bool passed = true;
};

struct ExperimentResult {
  CsvTable table{"", {}};
  nlohmann::json summary = nlohmann::json::object();
  std::vector<std::string> warnings;
  std::vector<Check> checks;

  bool passed() const;
};

/// Runs the configured experiment in memory.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Exit codes of `run`.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 2;
inline constexpr int kExitAssert = 3;

struct RunOutcome {
  int exit_code = kExitOk;
  std::filesystem::path directory;
};

/// Runs the experiment and writes <out>/<experiment>-<hash>/ with
/// results.csv, manifest.json (written before and finalized after the run),
/// warnings.log and, on failure, failure.json.
RunOutcome run(const ExperimentConfig& config);

}  // namespace windlab
