#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "windlab/config.hpp"
#include "windlab/errors.hpp"
#include "windlab/experiments.hpp"

int main(int argc, char** argv) {
  using namespace windlab;
  CLI::App app{"windlab: directed polymer winding experiments"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::map<std::string, std::string> flags;
  bool assert_flag = false;
  const std::vector<std::string> valued = {"seed", "replicas", "beta", "N", "M", "L", "J", "steps", "threads", "out", "replay"};

  for (const auto& name : experiment_names()) {
    CLI::App* sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->add_option("--config", config_path, "key = value config file");
    for (const auto& key : valued) sub->add_option("--" + key, flags[key]);
    sub->add_flag("--assert", assert_flag, "exit 3 when a threshold check fails");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitError;
  }

  try {
    const std::string experiment = app.get_subcommands().front()->get_name();
    CLI::App* sub = app.get_subcommands().front();
    ConfigEntries file_entries;
    if (!config_path.empty()) file_entries = read_config_file(config_path);
    ConfigEntries flag_entries;
    flag_entries["experiment"] = {experiment, "subcommand"};
    for (const auto& key : valued) {
      if (sub->count("--" + key) > 0) flag_entries[key] = {flags[key], "--" + key};
    }
    if (assert_flag) flag_entries["assert"] = {"true", "--assert"};
    const ExperimentConfig config = parse_config(file_entries, flag_entries);
    const RunOutcome outcome = run(config);
    std::cout << outcome.directory.string() << "\n";
    if (outcome.exit_code == kExitAssert) std::cerr << "threshold checks failed; see failure.json\n";
    if (outcome.exit_code == kExitError) std::cerr << "run failed; see failure.json\n";
    return outcome.exit_code;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
}
