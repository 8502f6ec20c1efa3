#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "phasecon/curvature.hpp"
#include "phasecon/errors.hpp"
#include "phasecon/report.hpp"

namespace py = pybind11;
using namespace phasecon;

namespace {

template <std::size_t R>
py::array_t<double> to_numpy(const Tensor<R>& t) {
  std::vector<py::ssize_t> shape(R, 4);
  py::array_t<double> out(shape);
  std::copy(t.data().begin(), t.data().end(), out.mutable_data());
  return out;
}

SpacetimeEvent event(const std::array<double, 4>& x) { return SpacetimeEvent(x); }

// one row per sample, columns as in the CSV header
py::array_t<double> sample_table(const std::vector<TrajectorySample>& samples) {
  py::array_t<double> out({static_cast<py::ssize_t>(samples.size()), py::ssize_t{10}});
  auto v = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    v(i, 0) = s.state.tau;
    for (int m = 0; m < 4; ++m) {
      v(i, 1 + m) = s.state.x[m];
      v(i, 5 + m) = s.state.u[m];
    }
    v(i, 9) = s.norm_residual;
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_phasecon, m) {
  m.doc() = "Charged and neutral particle transport on curved spacetimes";

  auto base = py::register_exception<Error>(m, "PhaseconError");
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<IncompatibleChecker>(m, "IncompatibleChecker", base.ptr());
  py::register_exception<OutsideDomain>(m, "OutsideDomain", base.ptr());
  py::register_exception<InvalidParticle>(m, "InvalidParticle", base.ptr());

  m.attr("CSV_COLUMNS") = py::str(std::string(kCsvHeader));

  py::class_<MetricField>(m, "Metric")
      .def_static("minkowski", &MetricField::minkowski)
      .def_static("schwarzschild", &MetricField::schwarzschild, py::arg("mass"))
      .def_static("weak_field", &MetricField::weak_field, py::arg("mass"))
      .def_property_readonly("name", [](const MetricField& g) { return std::string(g.name()); })
      .def("at", [](const MetricField& g, const std::array<double, 4>& x) { return to_numpy(g.at(event(x))); })
      .def("__repr__", [](const MetricField& g) { return "Metric(" + std::string(g.name()) + ")"; });

  py::class_<VectorPotential>(m, "Potential")
      .def_static("uniform", &VectorPotential::uniform, py::arg("E"), py::arg("B"))
      .def_static("symmetric_gauge", &VectorPotential::symmetric_gauge, py::arg("B"))
      .def_static("coulomb", &VectorPotential::coulomb, py::arg("source_charge"))
      .def_static("wald", &VectorPotential::wald, py::arg("field_strength"));

  m.def("christoffel", [](const MetricField& g, const std::array<double, 4>& x) {
    return to_numpy(christoffel(g, event(x)));
  }, py::arg("metric"), py::arg("x"), "Gamma^a_{mn} as a (4, 4, 4) array");
  m.def("riemann", [](const MetricField& g, const std::array<double, 4>& x) {
    return to_numpy(riemann(g, event(x)));
  }, py::arg("metric"), py::arg("x"));
  m.def("ricci", [](const MetricField& g, const std::array<double, 4>& x) {
    return to_numpy(ricci(g, event(x)));
  }, py::arg("metric"), py::arg("x"));
  m.def("einstein", [](const MetricField& g, const std::array<double, 4>& x) {
    return to_numpy(einstein_tensor(g, event(x)));
  }, py::arg("metric"), py::arg("x"));
  m.def("bianchi_residual", [](const MetricField& g, const std::array<double, 4>& x, std::optional<double> h) {
    return bianchi_residual(g, event(x), h);
  }, py::arg("metric"), py::arg("x"), py::arg("step") = py::none());
  m.def("faraday", [](const VectorPotential& a, const std::array<double, 4>& x) {
    return to_numpy(faraday_from_potential(a, event(x)));
  }, py::arg("potential"), py::arg("x"));
  m.def("closure_residual", [](const VectorPotential& a, const std::array<double, 4>& x, std::optional<double> h) {
    return closure_residual(a, event(x), h);
  }, py::arg("potential"), py::arg("x"), py::arg("step") = py::none());

  py::class_<Scenario>(m, "Scenario")
      .def_readwrite("name", &Scenario::name)
      .def_property("step", [](const Scenario& s) { return s.integrator.step; },
                    [](Scenario& s, double h) { s.integrator.step = h; s.integrator.validate(); })
      .def_property("tau_max", [](const Scenario& s) { return s.integrator.tau_max; },
                    [](Scenario& s, double t) { s.integrator.tau_max = t; s.integrator.validate(); })
      .def_property_readonly("method", [](const Scenario& s) { return std::string(to_string(s.integrator.method)); })
      .def_property_readonly("mass", [](const Scenario& s) { return s.particle.mass(); })
      .def_property_readonly("charge", [](const Scenario& s) { return s.particle.charge(); })
      .def_property_readonly("initial_position", [](const Scenario& s) { return s.initial.x.coords(); })
      .def_property_readonly("initial_u", [](const Scenario& s) {
        std::array<double, 4> u;
        for (int i = 0; i < 4; ++i) u[i] = s.initial.u[i];
        return u;
      })
      .def("metric", &Scenario::metric_field)
      .def("__repr__", [](const Scenario& s) { return "Scenario(" + s.name + ")"; });

  py::class_<RunReport>(m, "Report")
      .def_readonly("scenario", &RunReport::scenario)
      .def_readonly("message", &RunReport::message)
      .def_readonly("summary", &RunReport::summary)
      .def_readonly("labels", &RunReport::labels)
      .def_property_readonly("status", [](const RunReport& r) { return std::string(to_string(r.status)); })
      .def_property_readonly("failed", &RunReport::integration_failed)
      .def_property_readonly("samples", [](const RunReport& r) { return sample_table(r.samples); },
                             "(N, 10) array with columns tau, t, x1..x3, u0..u3, norm_residual")
      .def("to_csv", [](const RunReport& r) {
        std::ostringstream out;
        emit(r, Format::Csv, out);
        return out.str();
      })
      .def("to_json", [](const RunReport& r) {
        std::ostringstream out;
        emit(r, Format::Json, out);
        return out.str();
      });

  m.def("builtin_scenarios", &builtin_scenario_names);
  m.def("builtin_scenario_text", [](const std::string& n) { return builtin_scenario_text(n); });
  m.def("load_scenario", [](const std::string& text) { return load_scenario(text); }, py::arg("text"));
  m.def("load_scenario_file", &load_scenario_file, py::arg("path"));
  m.def("resolve_scenario", &resolve_scenario, py::arg("name_or_path"));
  m.def("run", &run, py::arg("scenario"), py::call_guard<py::gil_scoped_release>());
  m.def("check", [](const Scenario& s, const std::string& checker) {
    const Checker c = parse_checker(checker);
    py::gil_scoped_release nogil;
    return check(s, c);
  }, py::arg("scenario"), py::arg("checker"));
}
