#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "windlab/config.hpp"
#include "windlab/errors.hpp"
#include "windlab/estimators.hpp"
#include "windlab/experiments.hpp"
#include "windlab/kernel.hpp"
#include "windlab/noise.hpp"
#include "windlab/rng.hpp"
#include "windlab/version.hpp"

namespace py = pybind11;
using namespace windlab;

namespace {

py::dict report_dict(const EstimateReport& r) {
  py::dict d;
  d["name"] = r.name;
  d["value"] = r.value;
  d["std_error"] = r.std_error;
  d["replicas"] = r.replicas;
  d["config_hash"] = r.config_hash;
  d["seed"] = r.seed;
  d["extras"] = r.extras;
  return d;
}

RunSettings settings(const GridSpec& spec, std::uint64_t seed, int threads) {
  spec.validate();
  return RunSettings{spec, seed, threads};
}

py::array_t<double> torus_array(const TorusKernel& k) {
  py::array_t<double> a({k.cells, k.cells});
  std::copy(k.data.begin(), k.data.end(), a.mutable_data());
  return a;
}

}  // namespace

PYBIND11_MODULE(_windlab, m) {
  m.doc() = "Directed polymer winding estimators on a cylinder";
  m.attr("__version__") = kVersion;

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericalInstability>(m, "NumericalInstability", PyExc_ArithmeticError);
  py::register_exception<DegenerateInput>(m, "DegenerateInput", PyExc_ValueError);

  py::class_<GridSpec>(m, "GridSpec")
      .def(py::init([](int M, int steps, int J, int L, double beta) {
             GridSpec s{M, steps, J, L, beta};
             s.validate();
             return s;
           }),
           py::arg("M") = 32, py::arg("steps") = 100, py::arg("J") = 4, py::arg("L") = 1, py::arg("beta") = 1.0)
      .def_readwrite("M", &GridSpec::cells_per_unit)
      .def_readwrite("steps", &GridSpec::steps_per_unit)
      .def_readwrite("J", &GridSpec::winding_half_width)
      .def_readwrite("L", &GridSpec::period)
      .def_readwrite("beta", &GridSpec::beta)
      .def_property_readonly("cells", &GridSpec::cells)
      .def_property_readonly("dx", &GridSpec::dx)
      .def("canonical", &GridSpec::canonical)
      .def("__repr__", [](const GridSpec& s) { return "GridSpec(" + s.canonical() + ")"; });

  m.def("replica_seed", &replica_seed, py::arg("master"), py::arg("replica"));

  m.def(
      "unit_kernel",
      [](const GridSpec& spec, std::uint64_t seed) {
        spec.validate();
        const NoiseGrid noise(spec, seed, 1);
        WindingKernel k;
        {
          py::gil_scoped_release release;
          k = unit_kernel(slab(noise, 1), spec);
        }
        py::array_t<double> a({k.windings(), k.cells, k.cells});
        std::copy(k.data.begin(), k.data.end(), a.mutable_data());
        return py::make_tuple(a, k.log_norm);
      },
      py::arg("spec"), py::arg("seed"),
      "Winding-resolved kernel [j + J, x, y] over one time unit, and its log normalization.");

  m.def(
      "heat_reference", [](double t, const GridSpec& spec) { return torus_array(heat_reference(t, spec)); },
      py::arg("t"), py::arg("spec"));

  m.def(
      "sigma_annealed",
      [](const GridSpec& spec, int N, int replicas, std::uint64_t seed, int threads) {
        EstimateReport r;
        {
          py::gil_scoped_release release;
          r = sigma_annealed(settings(spec, seed, threads), N, replicas);
        }
        return report_dict(r);
      },
      py::arg("spec"), py::arg("N"), py::arg("replicas"), py::arg("seed") = 1, py::arg("threads") = 1);

  m.def(
      "sigma_stationary",
      [](const GridSpec& spec, int N, int replicas, int n_max, std::uint64_t seed, int threads) {
        std::pair<EstimateReport, CovarianceSeries> r;
        {
          py::gil_scoped_release release;
          r = sigma_stationary(settings(spec, seed, threads), N, replicas, n_max);
        }
        py::dict d = report_dict(r.first);
        d["series"] = r.second.estimate;
        d["series_std_error"] = r.second.std_error;
        return d;
      },
      py::arg("spec"), py::arg("N"), py::arg("replicas"), py::arg("n_max") = 12, py::arg("seed") = 1,
      py::arg("threads") = 1);

  m.def(
      "char_fn",
      [](const GridSpec& spec, double theta, int N, int replicas, bool stationary, std::uint64_t seed, int threads) {
        EstimateReport r;
        {
          py::gil_scoped_release release;
          r = char_fn(settings(spec, seed, threads), theta, N, replicas, stationary);
        }
        return report_dict(r);
      },
      py::arg("spec"), py::arg("theta"), py::arg("N"), py::arg("replicas"), py::arg("stationary") = false,
      py::arg("seed") = 1, py::arg("threads") = 1);

  m.def(
      "quenched_variance",
      [](const GridSpec& spec, int N, int replicas, std::uint64_t seed, int threads) {
        EstimateReport r;
        {
          py::gil_scoped_release release;
          r = quenched_variance(settings(spec, seed, threads), N, replicas);
        }
        return report_dict(r);
      },
      py::arg("spec"), py::arg("N"), py::arg("replicas"), py::arg("seed") = 1, py::arg("threads") = 1);

  m.def(
      "mixing_rate",
      [](const GridSpec& spec, const std::vector<int>& t_list, int replicas, std::uint64_t seed, int threads) {
        EstimateReport r;
        {
          py::gil_scoped_release release;
          r = mixing_rate(settings(spec, seed, threads), t_list, replicas);
        }
        return report_dict(r);
      },
      py::arg("spec"), py::arg("t_list"), py::arg("replicas"), py::arg("seed") = 1, py::arg("threads") = 1);

  m.def("experiment_names", &experiment_names);

  m.def(
      "run_experiment",
      [](const std::string& experiment, const std::map<std::string, std::string>& options) {
        ConfigEntries entries;
        entries["experiment"] = {experiment, "argument"};
        for (const auto& [k, v] : options) entries[k] = {v, "option " + k};
        const ExperimentConfig config = parse_config({}, entries);
        ExperimentResult r;
        {
          py::gil_scoped_release release;
          r = run_experiment(config);
        }
        py::list checks;
        for (const auto& c : r.checks) {
          checks.append(py::dict(py::arg("name") = c.name, py::arg("value") = c.value,
                                 py::arg("requirement") = c.requirement, py::arg("passed") = c.passed));
        }
        py::dict d;
        d["csv"] = r.table.text();
        d["summary"] = r.summary.dump();
        d["warnings"] = r.warnings;
        d["checks"] = checks;
        d["passed"] = r.passed();
        d["config_hash"] = config.hash();
        return d;
      },
      py::arg("experiment"), py::arg("options") = std::map<std::string, std::string>{},
      "Runs an experiment in memory. Options take the config keys as strings.");
}
