#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "fqsd/config.hpp"
#include "fqsd/master.hpp"
#include "fqsd/models.hpp"
#include "fqsd/observables.hpp"
#include "fqsd/qops.hpp"
#include "fqsd/verify.hpp"

namespace py = pybind11;
using namespace fqsd;

namespace {

CoeffMethod method_from(const std::string& s) {
  if (s == "grid") return CoeffMethod::Grid;
  if (s == "direct") return CoeffMethod::Direct;
  throw ConfigError("method: expected grid|direct");
}

CoeffSource source_from(const std::string& s) {
  if (s == "grid") return CoeffSource::Grid;
  if (s == "direct") return CoeffSource::Direct;
  if (s == "closed_form") return CoeffSource::ClosedForm;
  throw ConfigError("source: expected grid|direct|closed_form");
}

py::dict series_dict(const QbarSeries& s) {
  py::dict d;
  d["times"] = s.times;
  d["coeffs"] = s.coeffs;
  d["singular"] = s.singular;
  d["first_singular"] = s.first_singular();
  return d;
}

py::dict trajectory_dict(const Trajectory& tr) {
  py::dict d;
  d["times"] = tr.times;
  py::list states;
  for (const auto& rho : tr.states) states.append(rho);
  d["states"] = states;
  d["max_trace_err"] = tr.max_trace_err;
  d["max_herm_err"] = tr.max_herm_err;
  d["min_eig"] = tr.min_eig_min;
  d["truncated"] = tr.truncated;
  d["truncated_at"] = tr.truncated_at;
  d["note"] = tr.note;
  return d;
}

}  // namespace

PYBIND11_MODULE(_fqsd, m) {
  m.doc() = "Non-Markovian fermionic-bath dynamics: coefficient solvers, "
            "master-equation integration, and verification suites.";
  m.attr("__version__") = FQSD_VERSION;

  py::register_exception<ConfigError>(m, "FqsdConfigError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "FqsdNumericalError",
                                         PyExc_RuntimeError);

  py::class_<CorrelationKernel>(m, "Kernel")
      .def("eval", &CorrelationKernel::eval, py::arg("t"), py::arg("s"))
      .def("eval_tau", &CorrelationKernel::eval_tau, py::arg("tau"))
      .def_property_readonly("has_exponential_form",
                             &CorrelationKernel::has_exponential_form);

  m.def("kernel_single_mode",
        [](cplx g, double omega_b) {
          return CorrelationKernel::single_mode(g, omega_b);
        },
        py::arg("g"), py::arg("omega_b"));
  m.def("kernel_discrete_modes",
        [](const std::vector<std::pair<cplx, double>>& ms) {
          std::vector<Mode> modes;
          for (const auto& [g, w] : ms) modes.push_back({g, w});
          return CorrelationKernel::discrete_modes(std::move(modes));
        },
        py::arg("modes"));
  m.def("kernel_ornstein_uhlenbeck", &CorrelationKernel::ornstein_uhlenbeck,
        py::arg("gamma"), py::arg("Omega") = 0.0);
  m.def("kernel_ohmic", &CorrelationKernel::ohmic_zero_t, py::arg("Gamma"),
        py::arg("omega_c"));

  py::class_<ModelSpec>(m, "Model")
      .def_readonly("dim", &ModelSpec::dim)
      .def_readonly("H_s", &ModelSpec::H_s)
      .def_readonly("L", &ModelSpec::L)
      .def_readonly("q_basis", &ModelSpec::q_basis)
      .def("default_state", &ModelSpec::default_state);

  m.def("one_qubit", &build_one_qubit, py::arg("omega") = 1.0);
  m.def("two_qubit",
        [](double omega_A, double omega_B, double J_xy, double J_z,
           double kappa_A, double kappa_B) {
          TwoQubitParams p;
          p.omega_A = omega_A;
          p.omega_B = omega_B;
          p.J_xy = J_xy;
          p.J_z = J_z;
          p.kappa_A = kappa_A;
          p.kappa_B = kappa_B;
          return build_two_qubit(p);
        },
        py::arg("omega_A") = 1.0, py::arg("omega_B") = 1.0,
        py::arg("J_xy") = 0.0, py::arg("J_z") = 0.0, py::arg("kappa_A") = 1.0,
        py::arg("kappa_B") = 1.0);
  m.def("qbm", &build_qbm, py::arg("omega_m") = 1.0, py::arg("n_max") = 30);
  m.def("n_fermion", &build_n_fermion, py::arg("frequencies"));
  m.def("n_boson", &build_n_boson, py::arg("omega_1"), py::arg("omega_2"));

  m.def("solve_coefficients",
        [](const ModelSpec& model, const CorrelationKernel& kernel, double T,
           double h, const std::string& method) {
          return series_dict(
              solve_coefficients(model, kernel, T, h, method_from(method)));
        },
        py::arg("model"), py::arg("kernel"), py::arg("T"), py::arg("h"),
        py::arg("method") = "grid");

  m.def("integrate",
        [](const ModelSpec& model, const CorrelationKernel& kernel,
           const Mat& rho0, double T, double h, const std::string& source,
           int stored_samples) {
          IntegrateOptions opts;
          opts.source = source_from(source);
          opts.max_stored_samples = stored_samples;
          return trajectory_dict(integrate(model, kernel, rho0, T, h, opts));
        },
        py::arg("model"), py::arg("kernel"), py::arg("rho0"), py::arg("T"),
        py::arg("h"), py::arg("source") = "grid",
        py::arg("stored_samples") = 2001);

  m.def("lindblad_reference",
        [](const ModelSpec& model, double gamma_f, const Mat& rho0, double T,
           double h) {
          return trajectory_dict(lindblad_reference(model, gamma_f, rho0, T, h));
        },
        py::arg("model"), py::arg("gamma_f"), py::arg("rho0"), py::arg("T"),
        py::arg("h"));

  m.def("expectation", &expectation, py::arg("rho"), py::arg("op"));
  m.def("concurrence",
        [](const Mat& rho) { return concurrence(rho); }, py::arg("rho"));
  m.def("trace_distance", &trace_distance, py::arg("a"), py::arg("b"));

  m.def("verify",
        [](const std::string& suite) {
          const auto reports = run_verify(suite);
          bool ok = true;
          for (const auto& r : reports) ok = ok && r.all_passed();
          return py::make_tuple(ok, suites_to_json(reports));
        },
        py::arg("suite") = "all",
        "Run a verification suite; returns (all_passed, json_report).");

  m.def("run",
        [](const std::string& config_json) {
          const auto cfg = parse_run_config(nlohmann::json::parse(config_json));
          const auto res = execute_run(cfg);
          py::dict d;
          d["out_dir"] = res.out_dir.string();
          py::list files;
          for (const auto& f : res.files) files.append(f.path);
          d["files"] = files;
          d["numerical_failure"] = res.numerical_failure;
          d["message"] = res.message;
          d["max_trace_err"] = res.max_trace_err;
          d["max_herm_err"] = res.max_herm_err;
          return d;
        },
        py::arg("config_json"),
        "Execute a run config (JSON string); returns output metadata.");
}
