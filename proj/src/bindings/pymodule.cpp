#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "anisopt/conv_lab.hpp"
#include "anisopt/inequality.hpp"

namespace py = pybind11;
using namespace anisopt;

namespace {

py::dict report_dict(const SolveReport& report) {
  py::dict d;
  d["iterations"] = report.iterations;
  d["final_residual"] = report.final_residual;
  d["energy_seminorm"] = report.energy_seminorm;
  d["converged"] = report.converged;
  d["energy_history"] = report.energy_history;
  return d;
}

py::dict step_dict(const SweepStep& s) {
  py::dict d;
  d["eps"] = s.eps;
  d["k"] = s.k;
  d["y_h1"] = s.y_h1;
  d["y_aek"] = s.y_aek;
  d["y_w1p"] = s.y_w1p;
  d["z_lp"] = s.z_lp;
  d["z_l2"] = s.z_l2;
  d["omega1"] = s.omega1;
  d["omega1_bound"] = s.omega1_bound;
  d["omega3"] = s.omega3;
  d["omega3_bound"] = s.omega3_bound;
  d["omega_e"] = s.omega_e;
  d["omega_e_bound"] = s.omega_e_bound;
  d["cost"] = s.cost;
  d["ydiff_h1"] = s.ydiff_h1;
  d["zdiff_lp"] = s.zdiff_lp;
  return d;
}

py::dict manifest_dict(const SweepManifest& m) {
  py::list steps;
  for (const auto& s : m.steps) steps.append(step_dict(s));
  py::dict d;
  d["steps"] = steps;
  d["reference"] = m.reference;
  d["complete"] = m.complete;
  d["estimates_ok"] = m.estimates_ok;
  d["trend_ok"] = m.trend_ok;
  d["poincare"] = m.poincare;
  d["limit_value"] = m.limit_value;
  d["limit_bound"] = m.limit_bound;
  d["limit_ok"] = m.limit_ok;
  return d;
}

ProblemParams params_from(const Mesh& mesh, double p, const py::object& f) {
  if (py::isinstance<py::float_>(f) || py::isinstance<py::int_>(f))
    return constant_source(mesh, p, f.cast<double>());
  return {p, f.cast<std::vector<double>>()};
}

}  // namespace

PYBIND11_MODULE(_anisopt, m) {
  m.doc() = "anisotropic p-Laplacian / Hammerstein control experiments";

  py::class_<Mesh>(m, "Mesh")
      .def_readonly("dim", &Mesh::dim)
      .def_readonly("n", &Mesh::n)
      .def_readonly("cell_volume", &Mesh::cell_volume)
      .def_property_readonly("n_cells", &Mesh::n_cells)
      .def_property_readonly("n_vertices", &Mesh::n_vertices)
      .def("vertices",
           [](const Mesh& mesh) {
             py::list out;
             for (const auto& v : mesh.vertices) out.append(py::make_tuple(v[0], v[1]));
             return out;
           })
      .def("barycenters", [](const Mesh& mesh) {
        py::list out;
        for (int c = 0; c < mesh.n_cells(); ++c) {
          const auto b = mesh.barycenter(c);
          out.append(py::make_tuple(b[0], b[1]));
        }
        return out;
      });
  m.def("build_mesh", &build_mesh, py::arg("dim"), py::arg("n"));

  py::class_<ControlBounds>(m, "ControlBounds")
      .def(py::init<double, double, double, double>(), py::arg("xi1"), py::arg("xi2"),
           py::arg("alpha"), py::arg("gamma"))
      .def_readonly("xi1", &ControlBounds::xi1)
      .def_readonly("xi2", &ControlBounds::xi2)
      .def_readonly("alpha", &ControlBounds::alpha)
      .def_readonly("gamma", &ControlBounds::gamma);

  py::class_<RegParams>(m, "RegParams")
      .def(py::init<double, double, double>(), py::arg("epsilon"), py::arg("k"),
           py::arg("delta") = 0.15)
      .def_readonly("epsilon", &RegParams::epsilon)
      .def_readonly("k", &RegParams::k)
      .def_readonly("delta", &RegParams::delta);

  py::class_<ControlField>(m, "ControlField")
      .def_property_readonly("n_cells", &ControlField::n_cells)
      .def_readonly("dim", &ControlField::dim)
      .def("matrix", [](const ControlField& f, int cell) {
        const SymMat& a = f.a.at(cell);
        return py::make_tuple(a.a11, a.a12, a.a22);
      });

  m.def("identity_control", &identity_control, py::arg("mesh"));
  m.def(
      "parameterize",
      [](const std::vector<double>& theta, const std::string& scheme, const Mesh& mesh,
         const ControlBounds& bounds) {
        return parameterize(theta, parse_scheme(scheme), mesh, bounds);
      },
      py::arg("theta"), py::arg("scheme"), py::arg("mesh"), py::arg("bounds"));
  m.def(
      "discrete_tv",
      [](const ControlField& field, const Mesh& mesh, const ControlBounds& bounds) {
        const TvReport report = discrete_tv(field, mesh, bounds);
        py::dict d;
        d["tv_value"] = report.tv_value;
        d["within_budget"] = report.within_budget;
        return d;
      },
      py::arg("field"), py::arg("mesh"), py::arg("bounds"));
  m.def(
      "project_to_admissible",
      [](const ControlField& field, const ControlBounds& bounds) {
        return project_to_admissible(field, bounds);
      },
      py::arg("field"), py::arg("bounds"));

  m.def("truncation", &truncation, py::arg("t"), py::arg("reg"));
  m.def("truncation_derivative", &truncation_derivative, py::arg("t"), py::arg("reg"));

  m.def(
      "solve_state",
      [](const ControlField& a, const RegParams& reg, double p, const py::object& f,
         const Mesh& mesh, double tol, int max_iter) {
        const auto [y, report] = solve_state(a, reg, params_from(mesh, p, f), mesh, tol, max_iter);
        return py::make_tuple(y.y, report_dict(report));
      },
      py::arg("control"), py::arg("reg"), py::arg("p"), py::arg("f"), py::arg("mesh"),
      py::arg("tol") = 1e-10, py::arg("max_iter") = 500);

  py::class_<Kernel>(m, "Kernel")
      .def_readonly("c", &Kernel::c)
      .def_readonly("sigma", &Kernel::sigma)
      .def_readonly("c1", &Kernel::c1)
      .def_readonly("min_sym_eigenvalue", &Kernel::min_sym_eigenvalue)
      .def_readonly("positivity_checked", &Kernel::positivity_checked)
      .def_property_readonly("n", &Kernel::n);
  m.def(
      "make_kernel",
      [](const Mesh& mesh, const std::string& id, double c, double sigma, double p) {
        return assemble_kernel(mesh, parse_kernel_id(id), c, sigma, p);
      },
      py::arg("mesh"), py::arg("id"), py::arg("c") = -1.0, py::arg("sigma") = 0.25,
      py::arg("p") = 2.0);
  m.def("apply_B", &apply_B, py::arg("kernel"), py::arg("u"));
  m.def("nonlinearity_F", &nonlinearity_F, py::arg("y"), py::arg("z"), py::arg("p"));
  m.def("nonlinearity_F_reg", &nonlinearity_F_reg, py::arg("y"), py::arg("z"), py::arg("reg"),
        py::arg("p"));

  m.def(
      "solve_hammerstein",
      [](const std::vector<double>& y_cells, const Kernel& kernel, double p,
         const std::optional<RegParams>& reg, double tol, int max_iter) {
        const auto [z, report] = solve_hammerstein(y_cells, kernel, p, reg, tol, max_iter);
        return py::make_tuple(z, report_dict(report));
      },
      py::arg("y_cells"), py::arg("kernel"), py::arg("p"), py::arg("reg") = std::nullopt,
      py::arg("tol") = 1e-10, py::arg("max_iter") = 100);
  m.def("uniqueness_probe", &uniqueness_probe, py::arg("y_cells"), py::arg("kernel"), py::arg("p"),
        py::arg("reg"), py::arg("n_starts"), py::arg("mesh"), py::arg("tol") = 1e-10,
        py::arg("max_iter") = 100, py::arg("seed") = 7);

  py::class_<OcpInstance>(m, "OcpInstance")
      .def(py::init([](const Mesh& mesh, double p, const py::object& f, const ControlBounds& bounds,
                       const Kernel& kernel, const std::vector<double>& z_d,
                       const std::optional<RegParams>& reg, const std::string& scheme,
                       double tv_penalty) {
             OcpInstance instance;
             instance.mesh = mesh;
             instance.params = params_from(mesh, p, f);
             instance.bounds = bounds;
             instance.kernel = kernel;
             instance.z_d = z_d;
             instance.reg = reg;
             instance.scheme = parse_scheme(scheme);
             instance.tv_penalty_weight = tv_penalty;
             return instance;
           }),
           py::arg("mesh"), py::arg("p"), py::arg("f"), py::arg("bounds"), py::arg("kernel"),
           py::arg("z_d"), py::arg("reg") = std::nullopt, py::arg("scheme") = "constant-diagonal",
           py::arg("tv_penalty") = 1e3)
      .def_readwrite("z_d", &OcpInstance::z_d);

  m.def(
      "evaluate_cost",
      [](const OcpInstance& instance, const std::vector<double>& theta) {
        const CostEvaluation eval = evaluate_cost(instance, theta);
        py::dict d;
        d["cost"] = eval.cost;
        d["valid"] = eval.valid;
        d["state"] = eval.state.y;
        d["z"] = eval.zstate.z;
        d["tv"] = eval.tv.tv_value;
        return d;
      },
      py::arg("instance"), py::arg("theta"));
  m.def(
      "minimize",
      [](const OcpInstance& instance, const std::vector<double>& theta0, const std::string& method,
         int budget) {
        const OcpResult result = minimize(instance, theta0, parse_method(method), budget);
        py::dict d;
        d["theta_opt"] = result.theta_opt;
        d["cost_opt"] = result.cost_opt;
        d["evaluations"] = result.evaluations;
        d["tv"] = result.tv_report.tv_value;
        d["within_budget"] = result.tv_report.within_budget;
        d["best_costs"] = result.best_costs;
        return d;
      },
      py::arg("instance"), py::arg("theta0"), py::arg("method") = "nelder-mead",
      py::arg("budget") = 200);

  py::class_<SweepSchedule>(m, "SweepSchedule")
      .def_static("default_schedule", &SweepSchedule::default_schedule, py::arg("n_steps") = 6)
      .def_readonly("steps", &SweepSchedule::steps);

  m.def(
      "run_state_sweep",
      [](const ControlField& a, const SweepSchedule& schedule, double p, const py::object& f,
         const ControlBounds& bounds, const Mesh& mesh) {
        return manifest_dict(run_state_sweep(a, schedule, params_from(mesh, p, f), bounds, mesh));
      },
      py::arg("control"), py::arg("schedule"), py::arg("p"), py::arg("f"), py::arg("bounds"),
      py::arg("mesh"));
  m.def(
      "run_coupled_sweep",
      [](const ControlField& a, const SweepSchedule& schedule, double p, const py::object& f,
         const ControlBounds& bounds, const Kernel& kernel, const Mesh& mesh) {
        return manifest_dict(
            run_coupled_sweep(a, schedule, params_from(mesh, p, f), bounds, kernel, mesh));
      },
      py::arg("control"), py::arg("schedule"), py::arg("p"), py::arg("f"), py::arg("bounds"),
      py::arg("kernel"), py::arg("mesh"));

  m.def(
      "estimate_poincare",
      [](const Mesh& mesh) {
        const PoincareConstant c = estimate_poincare(mesh);
        py::dict d;
        d["c_omega"] = c.c_omega;
        d["lambda_min"] = c.lambda_min;
        d["iterations"] = c.iterations;
        return d;
      },
      py::arg("mesh"));

  m.def(
      "inequality_battery",
      [](unsigned long long seed) {
        py::list out;
        for (const auto& pc : default_battery(seed)) {
          py::dict d;
          d["name"] = pc.name;
          d["sample_count"] = pc.sample_count;
          d["tolerance"] = pc.tolerance;
          d["worst_violation"] = pc.worst_violation;
          d["passed"] = pc.passed;
          out.append(d);
        }
        return out;
      },
      py::arg("seed") = 42);

  m.attr("__version__") = "0.1.0";
}
