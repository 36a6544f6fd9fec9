#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sharpib/config.hpp"
#include "sharpib/coupling.hpp"
#include "sharpib/errors.hpp"
#include "sharpib/oracles.hpp"
#include "sharpib/simulation.hpp"
#include "sharpib/verification.hpp"

namespace py = pybind11;
using namespace sharpib;

namespace {

// Rows are j (y index), columns i (x index).
py::array_t<double> to_array(const CellScalarField& f) {
  const GridSpec& g = f.grid();
  py::array_t<double> a({g.ny, g.nx});
  auto m = a.mutable_unchecked<2>();
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) m(j, i) = f(i, j);
  return a;
}

py::array_t<double> to_array(const std::vector<Vec2>& v) {
  py::array_t<double> a({static_cast<py::ssize_t>(v.size()), py::ssize_t{2}});
  auto m = a.mutable_unchecked<2>();
  for (std::size_t k = 0; k < v.size(); ++k) {
    m(k, 0) = v[k].x();
    m(k, 1) = v[k].y();
  }
  return a;
}

py::dict run(const std::string& config_text, const std::string& output_dir) {
  SimulationConfig cfg = config_from_string(config_text);
  if (!output_dir.empty()) cfg.output_dir = output_dir;
  RunResult r;
  {
    py::gil_scoped_release release;
    r = run_scenario(cfg);
  }
  py::dict out;
  out["manifest"] = r.manifest.dump();
  out["p"] = to_array(r.p);
  out["pi"] = to_array(r.pi);
  out["position"] = to_array(r.mesh.position);
  out["phi"] = r.phi;
  return out;
}

}  // namespace

PYBIND11_MODULE(_sharpib, m) {
  m.doc() = "Immersed-boundary fluid-structure simulator";
  m.attr("__version__") = SHARPIB_VERSION;

  // Translators run newest first, so the derived type goes last.
  py::register_exception<Error>(m, "SolverError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def("config_json", [](const std::string& text) { return config_from_string(text).to_json().dump(); },
        py::arg("config_text"));
  m.def("run", &run, py::arg("config_text"), py::arg("output_dir") = "");
  m.def("ib4_kernel", &ib4_kernel, py::arg("r"));
  m.def("static_ring_pressure",
        [](double r) { return static_ring_pressure(r, StaticRingParams{}); }, py::arg("r"));
  m.def("inflating_ring_inner_pressure", []() { return inflating_ring_inner_pressure(InflatingRingParams{}); });
  m.def("property_suite", [](unsigned seed) {
    py::list out;
    for (const PropertyResult& r : run_property_suite(seed)) {
      py::dict d;
      d["name"] = r.name;
      d["value"] = r.value;
      d["threshold"] = r.threshold;
      d["comparison"] = r.comparison;
      d["passed"] = r.passed;
      out.append(d);
    }
    return out;
  }, py::arg("seed") = 20240521u);
}
