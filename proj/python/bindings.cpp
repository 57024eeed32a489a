#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <utility>
#include <vector>

#include "nystrom/errors.hpp"
#include "nystrom/geometry.hpp"
#include "nystrom/harness.hpp"
#include "nystrom/quadrature.hpp"
#include "nystrom/solve.hpp"

namespace py = pybind11;
using namespace nystrom;

namespace {

using Pair = std::pair<double, double>;

std::vector<Pair> to_pairs(const std::vector<Vec2>& pts) {
  std::vector<Pair> out;
  for (Vec2 p : pts) out.emplace_back(p.x, p.y);
  return out;
}

std::vector<Vec2> to_vec2(const std::vector<Pair>& pts) {
  std::vector<Vec2> out;
  for (auto [x, y] : pts) out.push_back({x, y});
  return out;
}

py::tuple rule_tuple(const QuadratureRule& r) { return py::make_tuple(r.nodes, r.weights); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Modified Nystrom solver for the exterior Neumann Laplace problem on corner domains";

  py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
  py::register_exception<GeometryError>(m, "GeometryError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  m.def("gauss_legendre", [](int n) { return rule_tuple(gauss_legendre(n)); }, py::arg("m"),
        "(nodes, weights) of the m-point Gauss-Legendre rule on [0, 1].");
  m.def("gauss_radau_left", [](int n) { return rule_tuple(gauss_radau_left(n)); }, py::arg("m"),
        "(nodes, weights) of the left Gauss-Radau rule on [0, 1], node 0 first.");
  m.def("log_moments", &log_moments, py::arg("s"), py::arg("count"),
        "Integrals of log|x - s| against orthonormal shifted Legendre polynomials.");

  m.def("example_names", &example_names);
  m.def("phi_range", &phi_range, py::arg("family"));
  m.def("sample_boundary",
        [](const std::string& name, double phi, int per_arc) {
          return to_pairs(make_example_domain(name, phi).sample(per_arc));
        },
        py::arg("name"), py::arg("phi") = 0.0, py::arg("per_arc") = 200);
  m.def("decompose",
        [](const std::string& name, double phi, double delta) {
          const Decomposition dec = decompose(make_example_domain(name, phi), delta);
          py::list out;
          for (const SubArc& s : dec.subarcs()) {
            py::dict d;
            d["index"] = s.index;
            d["kind"] = s.kind == SubArcKind::Gamma ? "gamma" : s.kind == SubArcKind::Upsilon ? "upsilon" : "central";
            d["corner"] = s.corner;
            d["macro"] = s.macro;
            d["interval"] = py::make_tuple(s.a, s.b);
            d["reversed"] = s.reversed;
            out.append(d);
          }
          return out;
        },
        py::arg("name"), py::arg("phi") = 0.0, py::arg("delta") = 1e-7,
        "Sub-arc pieces of a built-in domain.");

  py::class_<RunConfig>(m, "RunConfig")
      .def(py::init<>())
      .def_readwrite("domain", &RunConfig::domain)
      .def_readwrite("phi", &RunConfig::phi)
      .def_readwrite("solution", &RunConfig::solution)
      .def_readwrite("orders", &RunConfig::orders)
      .def_readwrite("c", &RunConfig::c)
      .def_readwrite("eps", &RunConfig::eps)
      .def_readwrite("delta", &RunConfig::delta)
      .def_readwrite("rhs_M", &RunConfig::rhs_M)
      .def_readwrite("rhs_M_ratio", &RunConfig::rhs_M_ratio)
      .def_readwrite("outer_N", &RunConfig::outer_N)
      .def_readwrite("outer_N_ratio", &RunConfig::outer_N_ratio)
      .def_property(
          "points", [](const RunConfig& c) { return to_pairs(c.points); },
          [](RunConfig& c, const std::vector<Pair>& p) { c.points = to_vec2(p); })
      .def_property(
          "solution_points", [](const RunConfig& c) { return to_pairs(c.solution_points); },
          [](RunConfig& c, const std::vector<Pair>& p) { c.solution_points = to_vec2(p); })
      .def_property(
          "vertices", [](const RunConfig& c) { return to_pairs(c.vertices); },
          [](RunConfig& c, const std::vector<Pair>& p) { c.vertices = to_vec2(p); })
      .def("to_json", [](const RunConfig& c) { return config_to_json(c); })
      .def_static("from_json", [](const std::string& text) { return config_from_json(text); });

  m.def("example_config", &example_config, py::arg("name"));
  m.def("validate_config", &validate_config, py::arg("config"));

  py::class_<TableRow>(m, "TableRow")
      .def_readonly("mu", &TableRow::mu)
      .def_readonly("nu", &TableRow::nu)
      .def_readonly("errors", &TableRow::errors)
      .def_readonly("approx", &TableRow::approx)
      .def_readonly("cond", &TableRow::cond)
      .def_readonly("dimension", &TableRow::dimension)
      .def_readonly("seconds", &TableRow::seconds)
      .def_readonly("ok", &TableRow::ok)
      .def_readonly("diagnostic", &TableRow::diagnostic);

  m.def("run_row", &run_row, py::arg("config"), py::arg("mu"), py::arg("nu"),
        py::call_guard<py::gil_scoped_release>());
  m.def("run_example", &run_example, py::arg("config"), py::call_guard<py::gil_scoped_release>());

  py::class_<AngleRow>(m, "AngleRow")
      .def_readonly("phi", &AngleRow::phi)
      .def_readonly("cond", &AngleRow::cond)
      .def_readonly("dimension", &AngleRow::dimension)
      .def_readonly("ok", &AngleRow::ok)
      .def_readonly("diagnostic", &AngleRow::diagnostic);

  m.def("angle_sweep", &angle_sweep, py::arg("family"), py::arg("phis"), py::arg("mu"),
        py::arg("nu"), py::arg("c") = 100.0, py::arg("eps") = 1e-3, py::arg("delta") = 1e-7,
        py::call_guard<py::gil_scoped_release>());
  m.def("angle_grid", &angle_grid, py::arg("family"), py::arg("n"));

  m.def("cond_inf", [](const Eigen::MatrixXd& a) { return cond_inf(a); }, py::arg("a"),
        "Infinity-norm condition number via LU.");
}
