#include "anisopt/conv_lab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <future>
#include <limits>
#include <stdexcept>
#include <thread>

#include "anisopt/norms.hpp"

namespace anisopt {

SweepSchedule SweepSchedule::default_schedule(int n_steps) {
  SweepSchedule s;
  for (int i = 1; i <= n_steps; ++i) s.steps.emplace_back(std::pow(10.0, -i), std::pow(2.0, i));
  return s;
}

void SweepSchedule::validate() const {
  if (steps.empty()) throw std::invalid_argument("SweepSchedule: empty schedule");
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (!(steps[i].first > 0.0)) throw std::invalid_argument("SweepSchedule: epsilon must be positive");
    if (!(steps[i].second >= 1.0)) throw std::invalid_argument("SweepSchedule: k must be >= 1");
    if (i > 0 && !(steps[i].first < steps[i - 1].first))
      throw std::invalid_argument("SweepSchedule: epsilon must be strictly decreasing");
    if (i > 0 && !(steps[i].second > steps[i - 1].second))
      throw std::invalid_argument("SweepSchedule: k must be strictly increasing");
  }
}

namespace {

int worker_count(int n_tasks) {
  int threads = 1;
  if (const char* env = std::getenv("ANISOPT_THREADS")) {
    threads = std::atoi(env);
    if (threads < 1) threads = 1;
  }
  return std::min(threads, n_tasks);
}

template <class F>
void parallel_steps(int n, F&& body) {
  const int workers = worker_count(n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::future<void>> futures;
  std::atomic<int> next{0};
  for (int w = 0; w < workers; ++w)
    futures.push_back(std::async(std::launch::async, [&]() {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
    }));
  for (auto& f : futures) f.get();
}

struct StepSolution {
  StateField y;
  SolveReport yreport;
  HammersteinState z;
  SolveReport zreport;
  bool has_z = false;
};

SweepManifest assemble_manifest(const ControlField& a, const SweepSchedule& schedule,
                                const ProblemParams& params, const ControlBounds& bounds,
                                const Mesh& mesh, std::vector<StepSolution>& sols,
                                const std::vector<double>& z_d, bool coupled) {
  SweepManifest manifest;
  const int n = schedule.size();
  const PoincareConstant poincare = estimate_poincare(mesh);
  manifest.poincare = poincare.c_omega;

  int n_ok = 0;
  while (n_ok < n && sols[n_ok].yreport.converged && (!coupled || sols[n_ok].zreport.converged))
    ++n_ok;
  manifest.complete = n_ok == n;

  const int ref = n_ok - 1;
  manifest.reference = n_ok > 0
                           ? "step " + std::to_string(ref) + " (eps=" +
                                 std::to_string(schedule.steps[ref].first) +
                                 ", k=" + std::to_string(schedule.steps[ref].second) + ")"
                           : "none";

  manifest.estimates_ok = n_ok > 0;
  const double xi2p = std::pow(bounds.xi2, params.p);
  for (int i = 0; i < n_ok; ++i) {
    const auto [eps, k] = schedule.steps[i];
    const RegParams reg(eps, k);
    SweepStep step;
    step.eps = eps;
    step.k = k;
    step.state_iterations = sols[i].yreport.iterations;
    step.state_converged = sols[i].yreport.converged;
    step.y_h1 = h10_norm(mesh, sols[i].y.y);
    step.y_aek = sols[i].yreport.energy_seminorm;
    step.y_w1p = w1p_norm(mesh, sols[i].y.y, params.p);

    step.omega1 = exceedance_volume(sols[i].y, a, mesh, k, true);
    step.omega1_bound = xi2p * std::pow(step.y_w1p, params.p) * std::pow(k, -params.p);
    step.omega_e = exceedance_volume(sols[i].y, a, mesh, k, false);
    step.omega_e_bound = std::pow(step.y_aek, params.p) * std::pow(k, -params.p);
    step.chain_bound = (std::pow(mesh.domain_volume(), (params.p - 2.0) / (2.0 * params.p)) * step.y_aek +
                        std::pow(step.y_aek, 0.5 * params.p)) /
                       bounds.alpha;

    bool ok = step.omega1 <= step.omega1_bound + 1e-10 && step.omega_e <= step.omega_e_bound + 1e-10 &&
              step.y_h1 <= step.chain_bound + 1e-8;

    if (coupled) {
      step.ham_iterations = sols[i].zreport.iterations;
      step.ham_converged = sols[i].zreport.converged;
      step.z_lp = sols[i].z.lp;
      step.z_l2 = sols[i].z.l2;
      const double threshold = std::sqrt(k * k + 1.0);
      for (double zv : sols[i].z.z)
        if (std::abs(zv) > threshold) step.omega3 += mesh.cell_volume;
      step.omega3_bound = std::pow(step.z_lp, params.p) * std::pow(k, -params.p);
      ok = ok && step.omega3 <= step.omega3_bound + 1e-10;
      double cost = 0.0;
      for (int c = 0; c < mesh.n_cells(); ++c) {
        const double d = sols[i].z.z[c] - (z_d.empty() ? 0.0 : z_d[c]);
        cost += mesh.cell_volume * d * d;
      }
      step.cost = cost;
    }

    if (ref >= 0) {
      std::vector<double> ydiff(mesh.n_vertices());
      for (int v = 0; v < mesh.n_vertices(); ++v) ydiff[v] = sols[i].y.y[v] - sols[ref].y.y[v];
      step.ydiff_h1 = h10_norm(mesh, ydiff);
      if (coupled) {
        std::vector<double> zdiff(mesh.n_cells());
        for (int c = 0; c < mesh.n_cells(); ++c) zdiff[c] = sols[i].z.z[c] - sols[ref].z.z[c];
        step.zdiff_lp = lp_norm_cells(mesh, zdiff, params.p);
      }
    }

    manifest.estimates_ok = manifest.estimates_ok && ok;
    manifest.steps.push_back(step);
  }

  if (n_ok >= 1) {
    const auto& last = manifest.steps.back();
    manifest.limit_value = std::pow(last.y_aek, params.p - 1.0);
    manifest.limit_bound = poincare.c_omega / bounds.alpha * l2_norm_nodal(mesh, params.f) *
                           std::pow(mesh.domain_volume(), (params.p - 2.0) / (2.0 * params.p));
    manifest.limit_ok = manifest.limit_value <= 1.05 * manifest.limit_bound;
  }

  manifest.trend_ok = manifest.complete;
  const int m = static_cast<int>(manifest.steps.size());
  for (int i = std::max(1, m - 2); i < m && manifest.trend_ok; ++i) {
    if (manifest.steps[i].ydiff_h1 > manifest.steps[i - 1].ydiff_h1 + 1e-14) manifest.trend_ok = false;
    if (coupled && manifest.steps[i].zdiff_lp > manifest.steps[i - 1].zdiff_lp + 1e-14)
      manifest.trend_ok = false;
  }
  return manifest;
}

}  // namespace

SweepManifest run_state_sweep(const ControlField& a, const SweepSchedule& schedule,
                              const ProblemParams& params, const ControlBounds& bounds,
                              const Mesh& mesh, double tol, int max_iter) {
  schedule.validate();
  const int n = schedule.size();
  std::vector<StepSolution> sols(n);
  parallel_steps(n, [&](int i) {
    const RegParams reg(schedule.steps[i].first, schedule.steps[i].second);
    auto [y, report] = solve_state(a, reg, params, mesh, tol, max_iter);
    sols[i].y = std::move(y);
    sols[i].yreport = std::move(report);
    sols[i].zreport.converged = true;
  });
  return assemble_manifest(a, schedule, params, bounds, mesh, sols, {}, false);
}

SweepManifest run_coupled_sweep(const ControlField& a, const SweepSchedule& schedule,
                                const ProblemParams& params, const ControlBounds& bounds,
                                const Kernel& kernel, const Mesh& mesh,
                                const std::vector<double>& z_d, double tol, int max_iter) {
  schedule.validate();
  const int n = schedule.size();
  std::vector<StepSolution> sols(n);
  parallel_steps(n, [&](int i) {
    const RegParams reg(schedule.steps[i].first, schedule.steps[i].second);
    auto [y, yreport] = solve_state(a, reg, params, mesh, tol, max_iter);
    sols[i].y = std::move(y);
    sols[i].yreport = std::move(yreport);
    if (sols[i].yreport.converged) {
      auto [z, zreport] = solve_hammerstein(sols[i].y, kernel, params.p, reg, mesh, tol);
      sols[i].z = std::move(z);
      sols[i].zreport = std::move(zreport);
      sols[i].has_z = true;
    }
  });
  return assemble_manifest(a, schedule, params, bounds, mesh, sols, z_d, true);
}

ValueTable run_value_convergence(const OcpInstance& instance, const SweepSchedule& schedule,
                                 const std::vector<double>& theta0, OptMethod method, int budget,
                                 int grid_points) {
  schedule.validate();
  if (instance.scheme != ControlScheme::ConstantDiagonal)
    throw std::invalid_argument("run_value_convergence: the grid oracle requires constant-diagonal");

  ValueTable table;
  std::vector<double> start = theta0;  // continuation: warm-start from the previous optimum
  for (const auto& [eps, k] : schedule.steps) {
    OcpInstance step_instance = instance;
    step_instance.reg = RegParams(eps, k);
    ValueStep step;
    step.eps = eps;
    step.k = k;
    try {
      const OcpResult result = minimize(step_instance, start, method, budget);
      step.inf_value = result.cost_opt;
      step.theta = result.theta_opt;
      step.ok = true;
      start = result.theta_opt;
    } catch (const std::runtime_error&) {
      step.ok = false;  // recorded, table still emitted
    }
    table.steps.push_back(std::move(step));
  }

  // dense grid oracle at the finest regularization
  OcpInstance fine = instance;
  fine.reg = RegParams(schedule.steps.back().first, schedule.steps.back().second);
  const double lo = instance.bounds.xi1 * instance.bounds.xi1;
  const double hi = instance.bounds.xi2 * instance.bounds.xi2;
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> best_theta;
  const int g2 = instance.mesh.dim == 2 ? grid_points : 1;
  for (int i = 0; i < grid_points; ++i)
    for (int j = 0; j < g2; ++j) {
      const double t1 = lo + (hi - lo) * i / (grid_points - 1);
      const double t2 = instance.mesh.dim == 2 ? lo + (hi - lo) * j / (grid_points - 1) : theta0[1];
      const std::vector<double> theta{t1, t2};
      const CostEvaluation eval = evaluate_cost(fine, theta);
      if (eval.valid && (eval.cost < best ||
                         (eval.cost == best && std::lexicographical_compare(
                                                   theta.begin(), theta.end(), best_theta.begin(),
                                                   best_theta.end())))) {
        best = eval.cost;
        best_theta = theta;
      }
    }
  table.reference = best;
  table.reference_theta = best_theta;

  table.trend_ok = true;
  const int m = static_cast<int>(table.steps.size());
  for (int i = 0; i < m; ++i)
    if (!table.steps[i].ok) table.trend_ok = false;
  for (int i = std::max(1, m - 2); i < m && table.trend_ok; ++i) {
    const double gap_prev = std::abs(table.steps[i - 1].inf_value - table.reference);
    const double gap = std::abs(table.steps[i].inf_value - table.reference);
    if (gap > gap_prev + 1e-14) table.trend_ok = false;
  }
  table.final_gap = m > 0 && table.steps.back().ok
                        ? std::abs(table.steps.back().inf_value - table.reference)
                        : std::numeric_limits<double>::infinity();
  return table;
}

PoincareConstant estimate_poincare(const Mesh& mesh, double tol) {
  const DofMap dofs(mesh);
  const CsrMatrix stiffness = assemble_laplacian(mesh, dofs);
  const CsrMatrix mass = assemble_mass(mesh, dofs);

  std::vector<double> v(dofs.n_free, 1.0);
  double lambda = 0.0;
  PoincareConstant out;
  for (int iter = 0; iter < 500; ++iter) {
    const std::vector<double> mv = mass.apply(v);
    std::vector<double> w;
    cg_solve(stiffness, mv, w, 1e-13);
    const std::vector<double> kw = stiffness.apply(w);
    const std::vector<double> mw = mass.apply(w);
    double num = 0.0, den = 0.0;
    for (int i = 0; i < dofs.n_free; ++i) {
      num += w[i] * kw[i];
      den += w[i] * mw[i];
    }
    const double lambda_new = num / den;
    const double scale = 1.0 / std::sqrt(den);
    for (int i = 0; i < dofs.n_free; ++i) v[i] = w[i] * scale;
    out.iterations = iter + 1;
    if (iter > 0 && std::abs(lambda_new - lambda) <= tol * std::abs(lambda_new)) {
      lambda = lambda_new;
      break;
    }
    lambda = lambda_new;
  }
  out.lambda_min = lambda;
  out.c_omega = 1.0 / std::sqrt(lambda);
  return out;
}

EstimateReport check_test_estimate(const std::vector<double>& g_cells, const StateField& y,
                                   const ControlField& a, const RegParams& reg,
                                   const ProblemParams& params, const ControlBounds& bounds,
                                   const PoincareConstant& c, const Mesh& mesh) {
  const auto y_cells = to_cell_values(mesh, y.y);
  double pairing = 0.0;
  for (int i = 0; i < mesh.n_cells(); ++i) pairing += mesh.cell_volume * g_cells[i] * y_cells[i];

  const double sem = energy_seminorm(y, a, reg, params, mesh);
  const double rhs = c.c_omega / bounds.alpha * l2_norm_cells(mesh, g_cells) *
                     (std::pow(mesh.domain_volume(), (params.p - 2.0) / (2.0 * params.p)) * sem +
                      std::pow(reg.k, 0.5 * (2.0 - params.p)) * std::pow(sem, 0.5 * params.p));

  EstimateReport report;
  report.lhs = std::abs(pairing);
  report.rhs = rhs;
  report.margin = (rhs - report.lhs) / std::max(report.lhs, 1e-300);
  report.ok = report.lhs <= rhs + 1e-12;
  return report;
}

}  // namespace anisopt
