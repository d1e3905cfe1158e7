#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "selfdual/builtins.hpp"
#include "selfdual/cli.hpp"
#include "selfdual/dual_solver.hpp"
#include "selfdual/error.hpp"
#include "selfdual/factorize.hpp"
#include "selfdual/primal_solver.hpp"
#include "selfdual/report.hpp"
#include "selfdual/transport.hpp"

namespace py = pybind11;
using namespace selfdual;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

PointSet to_points(const Array& a) {
  if (a.ndim() == 1) return PointSet(1, std::vector<double>(a.data(), a.data() + a.size()));
  if (a.ndim() != 2) throw InputError("expected an (N, d) array");
  return PointSet(static_cast<std::size_t>(a.shape(1)),
                  std::vector<double>(a.data(), a.data() + a.size()));
}

Array to_array(const PointSet& p) {
  Array out({p.size(), p.dim()});
  std::copy(p.coords().begin(), p.coords().end(), out.mutable_data());
  return out;
}

struct Problem {
  DiscreteDomain dom;
  SampledField field;
};

Problem make_problem(const Array& points, const Array& values, double cell_measure, double mesh) {
  DiscreteDomain dom(to_points(points), cell_measure, mesh);
  SampledField field(dom, to_points(values));
  return {std::move(dom), std::move(field)};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Self-dual polar factorization of sampled vector fields";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  m.def("builtin_names", &builtin_names);

  m.def(
      "builtin",
      [](const std::string& name, std::size_t n) {
        const Builtin b = builtin_field(name, n);
        const DiscreteDomain dom = build_grid(b.grid);
        const SampledField f = sample_field(dom, b.field);
        return py::make_tuple(to_array(dom.points()), to_array(f.values()), dom.cell_measure(),
                              dom.mesh());
      },
      py::arg("name"), py::arg("n") = 64,
      "Grid points, field values, cell measure and mesh of a builtin example.");

  m.def(
      "solve_dual",
      [](const Array& points, const Array& values, double cell_measure, double mesh,
         const std::string& solver) {
        const Problem p = make_problem(points, values, cell_measure, mesh);
        DualConfig cfg;
        cfg.choice = parse_dual_choice(solver);
        const DualSolution s = solve_dual(p.dom, p.field, cfg);
        py::dict out;
        out["sigma"] = s.sigma.map();
        out["value"] = s.value;
        out["method"] = to_string(s.method);
        out["optimality"] = to_string(s.optimality);
        out["bound"] = s.bound ? py::object(py::float_(*s.bound)) : py::object(py::none());
        return out;
      },
      py::arg("points"), py::arg("values"), py::arg("cell_measure"), py::arg("mesh"),
      py::arg("solver") = "auto");

  m.def(
      "minimize_primal",
      [](const Array& points, const Array& values, double cell_measure, double mesh,
         bool warm_start, std::size_t max_iters, double eps) {
        const Problem p = make_problem(points, values, cell_measure, mesh);
        PrimalConfig cfg;
        cfg.warm_start = warm_start;
        cfg.max_iters = max_iters;
        cfg.eps = eps;
        const PrimalSolution s = minimize_primal(p.dom, p.field, cfg);
        py::dict out;
        out["value"] = s.value;
        out["lp_bound"] = s.lp_bound;
        out["iterations"] = s.iterations;
        out["converged"] = s.converged;
        out["argmax"] = s.argmax_map;
        out["kernel_upper"] = s.K.upper();
        return out;
      },
      py::arg("points"), py::arg("values"), py::arg("cell_measure"), py::arg("mesh"),
      py::arg("warm_start") = true, py::arg("max_iters") = 0, py::arg("eps") = 1e-6);

  m.def(
      "decompose_json",
      [](const Array& points, const Array& values, double cell_measure, double mesh,
         std::uint64_t seed) {
        const Problem p = make_problem(points, values, cell_measure, mesh);
        DecomposeConfig cfg;
        cfg.seed = seed;
        const Decomposition d = decompose(p.dom, p.field, cfg);
        return serialize_report(d.report, nlohmann::json{{"seed", seed}});
      },
      py::arg("points"), py::arg("values"), py::arg("cell_measure"), py::arg("mesh"),
      py::arg("seed") = 0, "Full pipeline; returns the report as JSON text.");

  m.def(
      "transport_cost",
      [](const Array& points, const Array& values, double cell_measure,
         const std::vector<std::size_t>& sigma) {
        const Problem p = make_problem(points, values, cell_measure, 1.0);
        return transport_cost(p.dom, p.field, Permutation(sigma));
      },
      py::arg("points"), py::arg("values"), py::arg("cell_measure"), py::arg("sigma"));

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::vector<const char*> argv{"selfdual"};
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command-line front end in-process: (exit code, stdout, stderr).");
}
