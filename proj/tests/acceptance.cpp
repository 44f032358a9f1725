// Acceptance suite: every criterion prints one pass/fail line; the binary
// exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "anisopt/conv_lab.hpp"
#include "anisopt/inequality.hpp"
#include "anisopt/norms.hpp"
#include "anisopt/runner.hpp"

using namespace anisopt;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

bool g_all_pass = true;

void run_criterion(int id, const std::string& label, double time_budget_s,
                   const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome outcome;
  try {
    outcome = body();
  } catch (const std::exception& err) {
    outcome.pass = false;
    outcome.detail = std::string("exception: ") + err.what();
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (time_budget_s > 0.0 && seconds > time_budget_s) {
    outcome.pass = false;
    outcome.detail += " [exceeded " + std::to_string(time_budget_s) + "s budget]";
  }
  g_all_pass = g_all_pass && outcome.pass;
  std::printf("[%s] criterion %d: %s (%.2fs) %s\n", outcome.pass ? "PASS" : "FAIL", id,
              label.c_str(), seconds, outcome.detail.c_str());
  std::fflush(stdout);
}

std::string slurp(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

template <class F>
double bisect(F f, double a, double b) {
  double fa = f(a);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (a + b);
    const double fm = f(mid);
    if (fa * fm <= 0.0)
      b = mid;
    else {
      a = mid;
      fa = fm;
    }
  }
  return 0.5 * (a + b);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

}  // namespace

int main() {
  // 1. inequality battery
  run_criterion(1, "inequality battery (5 checks, 1e4 seeded samples, tol 1e-12)", 5.0, [] {
    Outcome out;
    const auto battery = default_battery(42);
    out.pass = battery.size() == 5;
    double worst = 0.0;
    for (const auto& pc : battery) {
      out.pass = out.pass && pc.passed && pc.sample_count == 10000 && pc.worst_violation >= -1e-12;
      worst = std::min(worst, pc.worst_violation);
    }
    out.detail = "worst violation " + fmt(worst);
    return out;
  });

  // 2. manufactured solution, p = 2
  run_criterion(2, "manufactured solution p=2: nodal error <= C h^2, order in [1.9, 2.1]", 10.0, [] {
    Outcome out;
    out.pass = true;
    std::vector<double> mid_errors;
    for (int n : {16, 32, 64, 128}) {
      const Mesh mesh = build_mesh(1, n);
      const auto [y, report] =
          solve_state(identity_control(mesh), RegParams(1.0, 1.0), constant_source(mesh, 2.0, 1.0),
                      mesh, 1e-12);
      out.pass = out.pass && report.converged;
      const double h = 1.0 / n;
      double nodal_err = 0.0;
      for (int v = 0; v < mesh.n_vertices(); ++v) {
        const double x = mesh.vertices[v][0];
        nodal_err = std::max(nodal_err, std::abs(y.y[v] - 0.5 * x * (1.0 - x)));
      }
      out.pass = out.pass && nodal_err <= 1.0 * h * h;
      // the nodal values are superconvergent (exact to solver tolerance), so
      // the order is measured at the quadrature points, where the P1
      // interpolation error h^2/8 dominates
      double mid_err = 0.0;
      for (const auto& q : quadrature_points(mesh)) {
        const double x = q.x[0];
        const double interp = 0.5 * (y.y[static_cast<int>(std::round(x * n - 0.5))] +
                                     y.y[static_cast<int>(std::round(x * n + 0.5))]);
        mid_err = std::max(mid_err, std::abs(interp - 0.5 * x * (1.0 - x)));
      }
      mid_errors.push_back(mid_err);
    }
    std::string orders;
    for (std::size_t i = 1; i < mid_errors.size(); ++i) {
      const double order = std::log2(mid_errors[i - 1] / mid_errors[i]);
      out.pass = out.pass && order >= 1.9 && order <= 2.1;
      orders += (i > 1 ? ", " : "") + fmt(order);
    }
    out.detail = "orders " + orders;
    return out;
  });

  // 3. regularized a-priori estimates over the (p, eps, control) grid
  run_criterion(3, "a-priori estimate grid 3x3x3 at 2D n=32", 60.0, [] {
    Outcome out;
    out.pass = true;
    const Mesh mesh = build_mesh(2, 32);
    const ControlBounds bounds(0.5, 2.5, 0.5, 10.0);
    const std::vector<std::pair<std::string, ControlField>> controls = {
        {"identity", identity_control(mesh)},
        {"rotated-anisotropic",
         parameterize({1.0, 4.0, M_PI / 6.0}, ControlScheme::ConstantRotated, mesh, bounds)},
        {"two-block", parameterize({1.0, 1.0, 4.0, 4.0}, ControlScheme::TwoBlock, mesh, bounds)}};
    double min_margin = std::numeric_limits<double>::infinity();
    int solves = 0;
    for (double p : {2.0, 3.0, 4.0})
      for (double eps : {1e-1, 1e-2, 1e-3})
        for (const auto& [name, control] : controls) {
          const ProblemParams params = constant_source(mesh, p, 1.0);
          const RegParams reg(eps, 8.0);
          const auto [y, report] = solve_state(control, reg, params, mesh);
          ++solves;
          const auto apriori = apriori_check(y, report, control, bounds, reg, params, mesh);
          out.pass = out.pass && report.converged && apriori.ok && apriori.margin_energy >= 0.0 &&
                     apriori.margin_chain >= 0.0;
          min_margin = std::min({min_margin, apriori.margin_energy, apriori.margin_chain});
        }
    out.detail = std::to_string(solves) + " solves, min margin " + fmt(min_margin);
    return out;
  });

  // 4 + 6. coupled sweep: measure estimates per step and the trend
  const Mesh sweep_mesh = build_mesh(1, 64);
  const ControlBounds sweep_bounds(0.5, 2.0, 0.5, 10.0);
  const ProblemParams sweep_params = constant_source(sweep_mesh, 3.0, 1.0);
  const Kernel sweep_kernel = assemble_kernel(sweep_mesh, KernelId::Gaussian, -1.0, 0.25, 3.0);
  SweepManifest sweep;

  run_criterion(6, "coupled sweep trend (default schedule, p=3, gaussian, 1D n=64)", 120.0, [&] {
    Outcome out;
    sweep = run_coupled_sweep(identity_control(sweep_mesh), SweepSchedule::default_schedule(6),
                              sweep_params, sweep_bounds, sweep_kernel, sweep_mesh);
    const auto& steps = sweep.steps;
    out.pass = sweep.complete && steps.size() == 6 && sweep.trend_ok && sweep.limit_ok;
    // the last pre-reference diff must beat the first by 10x (the final
    // entry is the reference itself and is identically zero)
    if (out.pass) {
      const double first = steps.front().zdiff_lp;
      const double last = steps[steps.size() - 2].zdiff_lp;
      out.pass = 10.0 * last <= first && steps.back().zdiff_lp == 0.0;
      out.detail = "zdiff " + fmt(first) + " -> " + fmt(last);
    }
    return out;
  });

  run_criterion(4, "measure estimates on every sweep step (slack >= 0)", 0.0, [&] {
    Outcome out;
    out.pass = sweep.complete && !sweep.steps.empty();
    double min_slack = std::numeric_limits<double>::infinity();
    for (const auto& s : sweep.steps) {
      min_slack = std::min({min_slack, s.omega1_bound - s.omega1, s.omega3_bound - s.omega3,
                            s.omega_e_bound - s.omega_e});
    }
    out.pass = out.pass && min_slack >= 0.0;
    out.detail = "min slack " + fmt(min_slack);
    return out;
  });

  // 5. Hammerstein closed-form oracles and uniqueness
  run_criterion(5, "hammerstein oracle equivalence and uniqueness probe", 0.0, [] {
    Outcome out;
    out.pass = true;
    for (double c : {1.0, 0.7}) {
      Eigen::MatrixXd k(1, 1);
      k(0, 0) = c;
      const Kernel scalar = kernel_from_matrix(k, {1.0}, 2.0);
      const auto [z, report] = solve_hammerstein({1.0}, scalar, 2.0, {});
      out.pass = out.pass && report.converged && std::abs(z[0] + c / (1.0 + c)) <= 1e-10;
    }
    {
      Eigen::MatrixXd k(1, 1);
      k(0, 0) = 1.0;
      const Kernel scalar = kernel_from_matrix(k, {1.0}, 4.0);
      const auto [z, report] = solve_hammerstein({1.0}, scalar, 4.0, {});
      const double root = bisect([](double v) { return v * v * v + v + 1.0; }, -2.0, 0.0);
      out.pass = out.pass && report.converged && std::abs(z[0] - root) <= 1e-10;
      out.detail = "cubic root " + fmt(z[0]);
    }
    const Mesh mesh = build_mesh(1, 32);
    const Kernel gauss = assemble_kernel(mesh, KernelId::Gaussian, -1.0, 0.25, 3.0);
    std::vector<double> y_cells(mesh.n_cells());
    for (int i = 0; i < mesh.n_cells(); ++i)
      y_cells[i] = std::sin(3.0 * quadrature_points(mesh)[i].x[0]);
    out.pass = out.pass && uniqueness_probe(y_cells, gauss, 3.0, {}, 5, mesh) <= 1e-8;
    return out;
  });

  // 7. value convergence toward the grid-oracle reference
  run_criterion(7, "value convergence of the self-target family", 300.0, [] {
    Outcome out;
    OcpInstance instance;
    instance.mesh = build_mesh(1, 16);
    instance.params = constant_source(instance.mesh, 3.0, 1.0);
    instance.bounds = ControlBounds(0.5, 2.0, 0.5, 10.0);
    instance.kernel = assemble_kernel(instance.mesh, KernelId::Gaussian, -1.0, 0.25, 3.0);
    instance.scheme = ControlScheme::ConstantDiagonal;

    const SweepSchedule schedule = SweepSchedule::default_schedule(6);
    instance.reg = RegParams(schedule.steps.back().first, schedule.steps.back().second);
    instance.z_d.assign(instance.mesh.n_cells(), 0.0);
    // theta* = 2.5 lies on the 16-point oracle grid over [0.25, 4]
    instance.z_d = evaluate_cost(instance, {2.5, 1.0}).zstate.z;

    const ValueTable table =
        run_value_convergence(instance, schedule, {1.0, 1.0}, OptMethod::NelderMead, 250, 16);
    out.pass = table.reference == 0.0 && table.trend_ok &&
               table.final_gap <= 1e-3 * (1.0 + table.reference);
    out.detail = "reference " + fmt(table.reference) + ", final gap " + fmt(table.final_gap);
    return out;
  });

  // 8. Poincare constants against the separation-of-variables values
  run_criterion(8, "poincare constant: 1/pi (1D, 1%) and 1/(pi sqrt 2) (2D, 2%)", 0.0, [] {
    Outcome out;
    const double c1 = estimate_poincare(build_mesh(1, 128)).c_omega;
    const double c2 = estimate_poincare(build_mesh(2, 64)).c_omega;
    const double ref1 = 1.0 / M_PI;
    const double ref2 = 1.0 / (M_PI * std::sqrt(2.0));
    out.pass = std::abs(c1 - ref1) / ref1 < 0.01 && std::abs(c2 - ref2) / ref2 < 0.02;
    out.detail = "c_1d " + fmt(c1) + ", c_2d " + fmt(c2);
    return out;
  });

  // 9. determinism: identical configs give byte-identical CSVs
  run_criterion(9, "determinism: repeated runs produce byte-identical CSVs", 0.0, [] {
    Outcome out;
    out.pass = true;
    const fs::path base = fs::temp_directory_path() / "anisopt-acceptance";
    fs::remove_all(base);
    const std::vector<std::string> sweep_overrides = {"dim=1",           "n=32",
                                                      "p=3",             "sweep.mode=coupled",
                                                      "sweep.steps=4",   "kernel.id=gaussian"};
    for (const auto& [tag, sub, overrides] :
         std::vector<std::tuple<std::string, Subcommand, std::vector<std::string>>>{
             {"sweep", Subcommand::Sweep, sweep_overrides},
             {"ineq", Subcommand::CheckInequalities, {}}}) {
      const fs::path d1 = base / (tag + "-1");
      const fs::path d2 = base / (tag + "-2");
      run(parse_config(sub, {}, overrides, d1));
      run(parse_config(sub, {}, overrides, d2));
      int compared = 0;
      for (const auto& entry : fs::directory_iterator(d1)) {
        if (entry.path().extension() != ".csv") continue;
        ++compared;
        out.pass = out.pass && slurp(entry.path()) == slurp(d2 / entry.path().filename());
      }
      out.pass = out.pass && compared > 0;
    }
    return out;
  });

  std::printf("%s\n", g_all_pass ? "acceptance: all criteria passed" : "acceptance: FAILURES above");
  return g_all_pass ? 0 : 1;
}
