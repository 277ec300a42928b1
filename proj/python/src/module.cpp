#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "stratest/cli.hpp"
#include "stratest/efficiency.hpp"
#include "stratest/errors.hpp"
#include "stratest/monte_carlo.hpp"
#include "stratest/mse_theory.hpp"

namespace py = pybind11;
using namespace stratest;

namespace {

MomentSet moments_from(const PopulationSummary& pop, const SampleDesign& design,
                       const std::string& policy) {
  ReconciliationOptions opts;
  opts.policy = parse_policy(policy);
  return moment_set(reconcile_covariances(pop, opts).summary, design);
}

MomentSet summary_moments(const std::string& document, std::optional<std::vector<long>> n_h,
                          const std::string& policy) {
  const auto doc = parse_summary_document(document);
  SampleDesign design;
  if (n_h)
    design.n_h = *n_h;
  else if (doc.design)
    design = *doc.design;
  else
    throw InputError("sample sizes missing: pass n_h or include it in the document");
  return moments_from(doc.population, design, policy);
}

EstimatorId estimator(const std::string& name, double m1, double m2) {
  const auto kind = parse_estimator(name);
  return kind == EstimatorKind::Tp ? EstimatorId::tp(m1, m2) : EstimatorId::of(kind);
}

py::list pre_rows(const MomentSet& m) {
  const auto report = pre_table(m);
  py::list rows;
  for (const auto& r : report.rows) {
    py::dict d;
    d["estimator"] = std::string(to_string(r.id.kind));
    d["m1"] = r.id.m1;
    d["m2"] = r.id.m2;
    d["mse"] = r.mse;
    d["pre"] = r.pre;
    d["rank"] = r.rank;
    d["delta_vs_tp"] = r.delta_vs_tp;
    rows.append(d);
  }
  return rows;
}

py::dict simulate(const std::string& config, std::uint64_t seed, std::size_t replications,
                  unsigned threads, std::optional<std::pair<double, double>> tp_fixed) {
  auto doc = cli::parse_synthetic_config(config);
  if (!doc.design) throw InputError("no sample sizes: include 'n_h' in the config");
  const auto pop = generate_population(doc.config);
  SimulationOptions opts;
  opts.replications = replications;
  opts.master_seed = seed;
  opts.threads = threads;
  opts.tp_fixed = tp_fixed;
  SimulationReport report;
  {
    py::gil_scoped_release release;
    report = run_simulation(pop.units, *doc.design, opts);
  }
  py::list rows;
  for (const auto& r : report.rows) {
    py::dict d;
    d["estimator"] = r.label;
    d["empirical_mean"] = r.empirical_mean;
    d["empirical_bias"] = r.empirical_bias;
    d["empirical_mse"] = r.empirical_mse;
    d["theoretical_mse"] = r.theoretical_mse;
    d["relative_gap"] = r.relative_gap;
    d["nonfinite"] = r.nonfinite;
    rows.append(d);
  }
  py::dict out;
  out["rows"] = rows;
  out["replications"] = report.replications;
  out["seed"] = report.master_seed;
  out["generator"] = report.generator;
  out["population_fingerprint"] = report.population_fingerprint;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Stratified estimators with two auxiliary variables";

  auto input_error = py::register_exception<InputError>(mod, "InputError", PyExc_ValueError);
  py::register_exception<NumericalError>(mod, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<ValidationError>(mod, "ValidationError", input_error.ptr());

  py::class_<MomentSet>(mod, "MomentSet")
      .def(py::init<>())
      .def_readwrite("V200", &MomentSet::V200)
      .def_readwrite("V020", &MomentSet::V020)
      .def_readwrite("V002", &MomentSet::V002)
      .def_readwrite("V110", &MomentSet::V110)
      .def_readwrite("V101", &MomentSet::V101)
      .def_readwrite("V011", &MomentSet::V011)
      .def_readwrite("Ybar", &MomentSet::Ybar)
      .def_readwrite("Xbar", &MomentSet::Xbar)
      .def_readwrite("Zbar", &MomentSet::Zbar)
      .def_readwrite("B1", &MomentSet::B1)
      .def_readwrite("B2", &MomentSet::B2)
      .def_readwrite("regression_kernel", &MomentSet::regression_kernel)
      .def("__repr__", [](const MomentSet& m) {
        return "<MomentSet V200=" + std::to_string(m.V200) + " Ybar=" + std::to_string(m.Ybar) +
               ">";
      });

  mod.def(
      "kk2009_moments",
      [](const std::string& policy) {
        const auto kk = embedded_kk2009();
        return moments_from(kk.population, kk.design, policy);
      },
      py::arg("policy") = "prefer-correlation",
      "Moments of the embedded school dataset after covariance reconciliation.");
  mod.def("summary_moments", &summary_moments, py::arg("document"), py::arg("n_h") = py::none(),
          py::arg("policy") = "prefer-correlation",
          "Moments from a JSON summary document.");
  mod.def(
      "mse",
      [](const MomentSet& m, const std::string& name, double m1, double m2) {
        return mse_of(estimator(name, m1, m2), m).mse;
      },
      py::arg("moments"), py::arg("estimator"), py::arg("m1") = 0.0, py::arg("m2") = 0.0);
  mod.def("bias_tp", &bias_tp, py::arg("moments"), py::arg("m1"), py::arg("m2"));
  mod.def(
      "optimal_m",
      [](const MomentSet& m) {
        const auto o = optimal_m(m);
        return std::pair{o.m1, o.m2};
      },
      py::arg("moments"));
  mod.def("pre_table", &pre_rows, py::arg("moments"));
  mod.def("simulate", &simulate, py::arg("config"), py::arg("seed") = 42,
          py::arg("replications") = 10000, py::arg("threads") = 1,
          py::arg("tp_fixed") = py::none(),
          "Generates the synthetic population in `config` (JSON) and runs the Monte Carlo.");
  mod.def(
      "run",
      [](const std::string& subcommand, std::optional<std::string> input,
         const std::string& format, const std::string& policy, std::uint64_t seed,
         std::size_t replications, std::optional<double> m1, std::optional<double> m2,
         std::optional<std::vector<long>> n_h, std::optional<std::string> config) {
        cli::CommandConfig c;
        c.subcommand = subcommand;
        c.input = std::move(input);
        c.config = std::move(config);
        c.format = render::parse_format(format);
        c.policy = parse_policy(policy);
        c.seed = seed;
        c.replications = replications;
        c.m1 = m1;
        c.m2 = m2;
        c.n_h = std::move(n_h);
        const auto r = cli::run(c);
        return py::make_tuple(r.exit_code, r.output, r.error);
      },
      py::arg("subcommand"), py::arg("input") = py::none(), py::arg("format") = "json",
      py::arg("policy") = "prefer-correlation", py::arg("seed") = 42,
      py::arg("replications") = 10000, py::arg("m1") = py::none(), py::arg("m2") = py::none(),
      py::arg("n_h") = py::none(), py::arg("config") = py::none(),
      "Runs a CLI subcommand; returns (exit_code, output, error).");
  mod.attr("PUBLISHED_PRE") = std::vector<double>(std::begin(cli::kPublishedPre),
                                                  std::end(cli::kPublishedPre));
}
