#include <cstdlib>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "windlab/experiments.hpp"

using namespace windlab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const char* root = std::getenv("WINDLAB_TEST_TMP");
  fs::path p = fs::path(root ? root : fs::temp_directory_path().string()) / name;
  fs::remove_all(p);
  return p;
}

ExperimentConfig small(Experiment e) {
  ExperimentConfig c;
  c.experiment = e;
  c.spec.cells_per_unit = 16;
  c.N = 8;
  c.replicas = 6;
  c.threads = 1;
  return c;
}

nlohmann::json read_json(const fs::path& p) {
  std::ifstream in(p);
  return nlohmann::json::parse(in);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("a run writes manifest, results and warnings") {
  ExperimentConfig c = small(Experiment::kernel_check);
  c.output_dir = scratch("run").string();
  const RunOutcome o = run(c);
  CHECK(o.exit_code == kExitOk);
  CHECK(fs::exists(o.directory / "results.csv"));
  CHECK(fs::exists(o.directory / "warnings.log"));
  CHECK_FALSE(fs::exists(o.directory / "failure.json"));
  const auto m = read_json(o.directory / "manifest.json");
  CHECK(m["status"] == "ok");
  CHECK(m["config_hash"] == c.hash());
  CHECK(m["replica_seeds"].size() == 6u);
  CHECK(o.directory.filename().string() == "kernel-check-" + c.hash());
}

TEST_CASE("failed checks under --assert exit with the acceptance code") {
  ExperimentConfig c = small(Experiment::kernel_check);
  c.output_dir = scratch("assert").string();
  c.assert_thresholds = true;
  c.thresholds.periodization = 1e-30;
  const RunOutcome o = run(c);
  CHECK(o.exit_code == kExitAssert);
  const auto f = read_json(o.directory / "failure.json");
  CHECK(f["kind"] == "acceptance");
  CHECK(f["failures"][0]["name"] == "periodization_error");
  c.assert_thresholds = false;
  CHECK(run(c).exit_code == kExitOk);
}

TEST_CASE("errors write a failure record") {
  ExperimentConfig c = small(Experiment::clt);
  c.output_dir = scratch("error").string();
  const RunOutcome o = run(c);  // too few samples for the KS test
  CHECK(o.exit_code == kExitError);
  const auto f = read_json(o.directory / "failure.json");
  CHECK(f["kind"] == "error");
  CHECK(read_json(o.directory / "manifest.json")["status"] == "error");
}

TEST_CASE("results do not depend on the thread count") {
  for (Experiment e : {Experiment::sigma, Experiment::sigma_stationary, Experiment::mixing}) {
    ExperimentConfig c = small(e);
    c.output_dir = scratch("threads1").string();
    const std::string one = slurp(run(c).directory / "results.csv");
    c.threads = 3;
    c.output_dir = scratch("threads3").string();
    const std::string three = slurp(run(c).directory / "results.csv");
    CHECK(!one.empty());
    CHECK(one == three);
  }
}

TEST_CASE("replay reproduces one replica") {
  ExperimentConfig c = small(Experiment::sigma);
  const ExperimentResult full = run_experiment(c);
  c.replay = 4;
  const ExperimentResult one = run_experiment(c);
  const std::string text = full.table.text();
  // Y of replica 4 in the full table, as printed.
  std::istringstream lines(text);
  std::string line;
  for (int i = 0; i < 6; ++i) std::getline(lines, line);
  std::istringstream cells(line);
  std::string cell;
  for (int i = 0; i < 4; ++i) std::getline(cells, cell, ',');
  CHECK(std::to_string(one.summary["pinned"]["Y"].get<long>()) == cell);
  CHECK(one.table.rows() == 8u);
}

TEST_CASE("every experiment runs at toy scale") {
  for (const auto& name : experiment_names()) {
    ExperimentConfig c = small(parse_experiment(name));
    if (name == "clt") c.replicas = 500, c.N = 4;
    if (name == "sigma-stationary" || name == "cf-compare") c.N = 8;
    CAPTURE(name);
    CHECK_NOTHROW(run_experiment(c));
  }
}
