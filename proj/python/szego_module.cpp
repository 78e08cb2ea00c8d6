// Python bindings: grids, rational data, direct integration, explicit formula.
#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "szego/config.hpp"
#include "szego/dynamics.hpp"
#include "szego/explicit.hpp"
#include "szego/selftest.hpp"

namespace py = pybind11;
using namespace szego;
using hardy::HardyField;

namespace {

using CArray = py::array_t<cd, py::array::c_style | py::array::forcecast>;

// (K, M, N) array of the base samples.
CArray to_array(const HardyField& u) {
  const HardyField b = u.base();
  CArray a({b.nodes(), b.rows(), b.cols()});
  auto m = a.mutable_unchecked<3>();
  for (int k = 0; k < b.nodes(); ++k)
    for (int i = 0; i < b.rows(); ++i)
      for (int j = 0; j < b.cols(); ++j) m(k, i, j) = b(k, i, j);
  return a;
}

HardyField from_array(const FreqGrid& g, const CArray& a) {
  if (a.ndim() != 3 || a.shape(0) != g.points()) throw ShapeError("samples must have shape (points, rows, cols)");
  const auto m = a.unchecked<3>();
  HardyField u(g, static_cast<int>(a.shape(1)), static_cast<int>(a.shape(2)));
  for (int k = 0; k < g.points(); ++k)
    for (int i = 0; i < u.rows(); ++i)
      for (int j = 0; j < u.cols(); ++j) u(k, i, j) = m(k, i, j);
  return u;
}

py::array_t<cd> to_matrix(const Mat& a) {
  py::array_t<cd> out({a.rows(), a.cols()});
  auto m = out.mutable_unchecked<2>();
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
  return out;
}

hardy::RationalDatum make_datum(const std::vector<cd>& poles, const CArray& residues) {
  if (residues.ndim() != 3 || static_cast<std::size_t>(residues.shape(0)) != poles.size())
    throw ShapeError("residues must have shape (len(poles), rows, cols)");
  hardy::RationalDatum d;
  d.rows = static_cast<int>(residues.shape(1));
  d.cols = static_cast<int>(residues.shape(2));
  d.poles = poles;
  const auto r = residues.unchecked<3>();
  for (std::size_t p = 0; p < poles.size(); ++p) {
    Mat a(d.rows, d.cols);
    for (int i = 0; i < d.rows; ++i)
      for (int j = 0; j < d.cols; ++j) a(i, j) = r(p, i, j);
    d.residues.push_back(a);
  }
  d.validate();
  return d;
}

spectral::Side side_of(const std::string& s) { return spectral::parse_side(s); }

}  // namespace

PYBIND11_MODULE(_szego, m) {
  m.doc() = "Cubic matrix Szego equation on a truncated frequency grid";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ShapeError>(m, "ShapeError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<config::ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<FreqGrid>(m, "Grid")
      .def(py::init<double, int, int>(), py::arg("xi_max") = 32.0, py::arg("points") = 512,
           py::arg("quadrature_order") = 6)
      .def_property_readonly("xi_max", &FreqGrid::xi_max)
      .def_property_readonly("points", &FreqGrid::points)
      .def_property_readonly("spacing", &FreqGrid::spacing)
      .def_property_readonly("quadrature_order", &FreqGrid::end_order)
      .def_property_readonly("weights", &FreqGrid::weights)
      .def("__repr__", [](const FreqGrid& g) {
        return "Grid(xi_max=" + std::to_string(g.xi_max()) + ", points=" + std::to_string(g.points()) +
               ", quadrature_order=" + std::to_string(g.end_order()) + ")";
      });

  py::class_<hardy::RationalDatum>(m, "Datum")
      .def(py::init(&make_datum), py::arg("poles"), py::arg("residues"),
           "U0(x) = sum_j residues[j] / (x - poles[j]), all poles below the real axis")
      .def_readonly("rows", &hardy::RationalDatum::rows)
      .def_readonly("cols", &hardy::RationalDatum::cols)
      .def("value", [](const hardy::RationalDatum& d, cd z) { return to_matrix(hardy::rational_value(d, z)); },
           py::arg("z"));

  m.def("sample", [](const hardy::RationalDatum& d, const FreqGrid& g) { return to_array(hardy::rational_to_field(d, g)); },
        py::arg("datum"), py::arg("grid"), "Fourier samples on the grid, shape (points, rows, cols)");

  m.def("poisson_eval",
        [](const FreqGrid& g, const CArray& samples, cd z) { return to_matrix(hardy::poisson_eval(from_array(g, samples), z)); },
        py::arg("grid"), py::arg("samples"), py::arg("z"));

  m.def(
      "integrate",
      [](const hardy::RationalDatum& d, const FreqGrid& g, double dt, double t_final, int stride,
         std::vector<double> extra_times) {
        dynamics::SimConfig c;
        c.xi_max = g.xi_max();
        c.points = g.points();
        c.end_order = g.end_order();
        c.dt = dt;
        c.t_final = t_final;
        c.snapshot_stride = stride;
        c.extra_times = std::move(extra_times);
        dynamics::Trajectory tr;
        {
          py::gil_scoped_release release;
          tr = dynamics::integrate(hardy::rational_to_field(d, g), c);
        }
        std::vector<double> t;
        py::list snaps;
        for (const auto& s : tr.snapshots) {
          t.push_back(s.t);
          snaps.append(to_array(s.u));
        }
        return py::make_tuple(t, snaps, tr.mass);
      },
      py::arg("datum"), py::arg("grid"), py::arg("dt") = 1e-3, py::arg("t_final") = 1.0, py::arg("snapshot_stride") = 100,
      py::arg("extra_times") = std::vector<double>{},
      "RK4 run; returns (times, list of (points, rows, cols) arrays, masses)");

  m.def(
      "explicit_poisson",
      [](const hardy::RationalDatum& d, const FreqGrid& g, double t, cd z, const std::string& side) {
        return to_matrix(explicit_formula::explicit_poisson(hardy::rational_to_field(d, g), t, z, side_of(side)));
      },
      py::arg("datum"), py::arg("grid"), py::arg("t"), py::arg("z"), py::arg("side") = "lr",
      "U(t, z) from the explicit formula, without time stepping");

  m.def(
      "spectrum",
      [](const FreqGrid& g, const CArray& samples, const std::string& side) {
        const auto dec = spectral::decompose(spectral::double_hankel(from_array(g, samples).with_tail(), side_of(side)));
        std::vector<double> v(dec.values.data(), dec.values.data() + dec.values.size());
        std::sort(v.rbegin(), v.rend());
        return v;
      },
      py::arg("grid"), py::arg("samples"), py::arg("side") = "lr",
      "Eigenvalues of the double Hankel operator, descending");

  m.def(
      "config_hash", [](const std::string& text) { return config::parse(text).hash_hex(); }, py::arg("text"));

  m.def(
      "selftest",
      [](const std::string& text) {
        const auto r = selftest::run(config::parse(text));
        py::list out;
        for (const auto& c : r.checks) {
          py::dict d;
          d["name"] = c.name;
          d["pass"] = c.pass;
          d["value"] = c.value;
          d["threshold"] = c.threshold;
          d["detail"] = c.detail;
          out.append(d);
        }
        return out;
      },
      py::arg("config_text"));
}
