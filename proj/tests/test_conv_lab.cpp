#include <cmath>

#include "anisopt/conv_lab.hpp"
#include "anisopt/norms.hpp"
#include "anisopt/rng.hpp"
#include "doctest.h"

using namespace anisopt;

TEST_CASE("poincare constant converges to the continuum value") {
  // 1D: smallest Dirichlet eigenvalue pi^2 on (0,1)
  const PoincareConstant c1 = estimate_poincare(build_mesh(1, 128));
  CHECK(std::abs(c1.c_omega - 1.0 / M_PI) / (1.0 / M_PI) < 0.01);

  // 2D: smallest eigenvalue 2 pi^2 on the unit square
  const PoincareConstant c2 = estimate_poincare(build_mesh(2, 64));
  CHECK(std::abs(c2.c_omega - 1.0 / (M_PI * std::sqrt(2.0))) / (1.0 / (M_PI * std::sqrt(2.0))) <
        0.02);

  // extremal property: sampled zero-trace fields satisfy the inequality
  const Mesh mesh = build_mesh(1, 32);
  const PoincareConstant c = estimate_poincare(mesh);
  Rng rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> nodal(mesh.n_vertices(), 0.0);
    for (int v = 0; v < mesh.n_vertices(); ++v)
      if (!mesh.boundary_node[v]) nodal[v] = rng.uniform(-1.0, 1.0);
    CHECK(l2_norm_nodal(mesh, nodal) <= c.c_omega * (1.0 + 1e-6) * h10_norm(mesh, nodal));
  }
}

TEST_CASE("schedule validation") {
  const SweepSchedule def = SweepSchedule::default_schedule(6);
  CHECK(def.size() == 6);
  CHECK(def.steps[0].first == doctest::Approx(0.1));
  CHECK(def.steps[5].second == doctest::Approx(64.0));
  def.validate();

  SweepSchedule bad;
  bad.steps = {{1e-1, 2.0}, {1e-1, 4.0}};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad.steps = {{1e-1, 4.0}, {1e-2, 2.0}};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("p=2 state sweep is regularization-inert") {
  const Mesh mesh = build_mesh(1, 32);
  const ControlBounds bounds(0.5, 2.0, 0.5, 10.0);
  const ControlField ident = identity_control(mesh);
  const ProblemParams params = constant_source(mesh, 2.0, 1.0);
  const SweepManifest manifest =
      run_state_sweep(ident, SweepSchedule::default_schedule(4), params, bounds, mesh);
  REQUIRE(manifest.complete);
  CHECK(manifest.estimates_ok);
  CHECK(manifest.trend_ok);
  CHECK(manifest.limit_ok);
  for (const auto& step : manifest.steps) {
    CHECK(step.ydiff_h1 <= 1e-10);
    CHECK(step.y_h1 == doctest::Approx(manifest.steps.front().y_h1).epsilon(1e-10));
  }
}

TEST_CASE("p=4 state sweep trends toward the finest step") {
  const Mesh mesh = build_mesh(1, 64);
  const ControlBounds bounds(0.5, 2.0, 0.5, 10.0);
  const ControlField ident = identity_control(mesh);
  const ProblemParams params = constant_source(mesh, 4.0, 1.0);
  const SweepManifest manifest =
      run_state_sweep(ident, SweepSchedule::default_schedule(5), params, bounds, mesh);
  REQUIRE(manifest.complete);
  CHECK(manifest.estimates_ok);
  CHECK(manifest.trend_ok);
  CHECK(manifest.limit_ok);
  // the energy seminorm stays bounded across the schedule
  double sup = 0.0;
  for (const auto& step : manifest.steps) sup = std::max(sup, step.y_aek);
  CHECK(std::isfinite(sup));
  // diffs to the reference are non-increasing over the last three steps
  const auto& steps = manifest.steps;
  const std::size_t m = steps.size();
  CHECK(steps[m - 2].ydiff_h1 <= steps[m - 3].ydiff_h1 + 1e-14);
  CHECK(steps[m - 1].ydiff_h1 <= steps[m - 2].ydiff_h1 + 1e-14);
}

TEST_CASE("coupled sweep with the zero kernel keeps z at zero") {
  const Mesh mesh = build_mesh(1, 16);
  const ControlBounds bounds(0.5, 2.0, 0.5, 10.0);
  const ControlField ident = identity_control(mesh);
  const ProblemParams params = constant_source(mesh, 3.0, 1.0);
  const Kernel zero = assemble_kernel(mesh, KernelId::Zero, 0.0, 0.0, 3.0);
  const SweepManifest manifest =
      run_coupled_sweep(ident, SweepSchedule::default_schedule(4), params, bounds, zero, mesh);
  REQUIRE(manifest.complete);
  CHECK(manifest.estimates_ok);
  for (const auto& step : manifest.steps) {
    CHECK(step.z_lp == 0.0);
    CHECK(step.zdiff_lp == 0.0);
  }
}

TEST_CASE("p=2 coupled sweep is step-independent") {
  const Mesh mesh = build_mesh(1, 16);
  const ControlBounds bounds(0.5, 2.0, 0.5, 10.0);
  const ControlField ident = identity_control(mesh);
  const ProblemParams params = constant_source(mesh, 2.0, 1.0);
  const Kernel gauss = assemble_kernel(mesh, KernelId::Gaussian, -1.0, 0.25, 2.0);
  const SweepManifest manifest =
      run_coupled_sweep(ident, SweepSchedule::default_schedule(4), params, bounds, gauss, mesh);
  REQUIRE(manifest.complete);
  for (const auto& step : manifest.steps) {
    CHECK(step.ydiff_h1 <= 1e-10);
    CHECK(step.zdiff_lp <= 1e-10);
    CHECK(step.z_lp == doctest::Approx(manifest.steps.front().z_lp).epsilon(1e-10));
  }
}

TEST_CASE("coupled sweep trend on the gaussian fixture") {
  const Mesh mesh = build_mesh(1, 64);
  const ControlBounds bounds(0.5, 2.0, 0.5, 10.0);
  const ControlField ident = identity_control(mesh);
  const ProblemParams params = constant_source(mesh, 3.0, 1.0);
  const Kernel gauss = assemble_kernel(mesh, KernelId::Gaussian, -1.0, 0.25, 3.0);
  const SweepManifest manifest =
      run_coupled_sweep(ident, SweepSchedule::default_schedule(6), params, bounds, gauss, mesh);
  REQUIRE(manifest.complete);
  CHECK(manifest.estimates_ok);
  CHECK(manifest.trend_ok);
  CHECK(manifest.limit_ok);
  // the z-diff of the last pre-reference step beats the first by 10x
  const auto& steps = manifest.steps;
  CHECK(steps[steps.size() - 2].zdiff_lp * 10.0 <= steps.front().zdiff_lp);
}

TEST_CASE("inner non-convergence yields a partial manifest") {
  const Mesh mesh = build_mesh(1, 32);
  const ControlBounds bounds(0.5, 2.0, 0.5, 10.0);
  const ControlField ident = identity_control(mesh);
  const ProblemParams params = constant_source(mesh, 4.0, 1.0);
  // one Kacanov step cannot reach 1e-12 on the nonlinear problem
  const SweepManifest manifest = run_state_sweep(ident, SweepSchedule::default_schedule(4), params,
                                                 bounds, mesh, 1e-12, 1);
  CHECK(!manifest.complete);
  CHECK(manifest.steps.empty());
}

TEST_CASE("2d coupled sweep") {
  const Mesh mesh = build_mesh(2, 8);
  const ControlBounds bounds(0.5, 2.0, 0.5, 10.0);
  const ControlField a = constant_control(mesh, SymMat::rotated(1.0, 2.0, 0.5));
  const ProblemParams params = constant_source(mesh, 3.0, 1.0);
  const Kernel gauss = assemble_kernel(mesh, KernelId::Gaussian, -1.0, 0.3, 3.0);
  const SweepManifest manifest =
      run_coupled_sweep(a, SweepSchedule::default_schedule(4), params, bounds, gauss, mesh);
  REQUIRE(manifest.complete);
  CHECK(manifest.estimates_ok);
  CHECK(manifest.trend_ok);
  CHECK(manifest.limit_ok);
  CHECK(manifest.steps.back().zdiff_lp == 0.0);
}

TEST_CASE("truncation inertness below the cutoff") {
  // with max |A^(1/2) grad y| <= k the regularized coefficient equals the
  // eps-only coefficient exactly
  const Mesh mesh = build_mesh(1, 8);
  const DofMap dofs(mesh);
  const ControlField ident = identity_control(mesh);
  const ProblemParams params = constant_source(mesh, 3.0, 1.0);
  std::vector<double> nodal(mesh.n_vertices(), 0.0);
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    const double x = mesh.vertices[v][0];
    nodal[v] = 0.1 * x * (1.0 - x);
  }
  const StateField y(mesh, nodal);
  const RegParams reg(1e-2, 8.0);
  const auto op = assemble_regularized_operator(y, ident, reg, params, mesh, dofs);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const double s = dot(y.grad[c], y.grad[c]);
    REQUIRE(std::sqrt(s) <= reg.k);
    CHECK(op.coefficient[c] == std::pow(reg.epsilon + s, 0.5 * (params.p - 2.0)));
  }
}

TEST_CASE("regularized nonlinearity converges pointwise on a sample grid") {
  const SweepSchedule schedule = SweepSchedule::default_schedule(6);
  const auto [eps_f, k_f] = schedule.steps.back();
  const RegParams reg(eps_f, k_f);
  for (double p : {3.0, 4.0}) {
    const double r = 0.5 * (p - 2.0);
    for (int i = 0; i <= 120; ++i) {
      const double t = -3.0 + i * 0.05;
      const double regularized = reg_coefficient(t * t, reg, p) * t;
      const double limit = t == 0.0 ? 0.0 : std::pow(std::abs(t), p - 2.0) * t;
      const double bound = std::pow(eps_f, r) * (1.0 + std::abs(t)) +
                           (std::abs(t) > k_f ? 1e3 : 0.0);
      CHECK(std::abs(regularized - limit) <= bound);
    }
  }
}

TEST_CASE("duality estimate holds for solved states") {
  const Mesh mesh = build_mesh(1, 32);
  const ControlBounds bounds(0.5, 2.0, 0.5, 10.0);
  const ControlField a = constant_control(mesh, SymMat::diag(1.5, 0.0));
  const PoincareConstant c = estimate_poincare(mesh);
  Rng rng(21);

  for (double p : {2.0, 3.0}) {
    const ProblemParams params = constant_source(mesh, p, 1.0);
    for (const auto& [eps, k] : SweepSchedule::default_schedule(4).steps) {
      const RegParams reg(eps, k);
      const auto [y, report] = solve_state(a, reg, params, mesh);
      REQUIRE(report.converged);

      std::vector<double> g(mesh.n_cells());
      for (auto& v : g) v = rng.uniform(-2.0, 2.0);
      const EstimateReport estimate = check_test_estimate(g, y, a, reg, params, bounds, c, mesh);
      CHECK(estimate.ok);
      CHECK(estimate.margin >= 0.0);

      // zero g: both sides vanish
      const EstimateReport trivial = check_test_estimate(
          std::vector<double>(mesh.n_cells(), 0.0), y, a, reg, params, bounds, c, mesh);
      CHECK(trivial.ok);
      CHECK(trivial.lhs == 0.0);
    }
  }
}

TEST_CASE("value convergence table") {
  OcpInstance instance;
  instance.mesh = build_mesh(1, 16);
  instance.params = constant_source(instance.mesh, 3.0, 1.0);
  instance.bounds = ControlBounds(0.5, 2.0, 0.5, 10.0);
  instance.kernel = assemble_kernel(instance.mesh, KernelId::Gaussian, -1.0, 0.25, 3.0);
  instance.scheme = ControlScheme::ConstantDiagonal;

  // self-target generated at the finest step of the schedule
  const SweepSchedule schedule = SweepSchedule::default_schedule(3);
  instance.reg = RegParams(schedule.steps.back().first, schedule.steps.back().second);
  instance.z_d.assign(instance.mesh.n_cells(), 0.0);
  // theta* = 2.5 lies on the 16-point grid over [0.25, 4]
  const std::vector<double> theta_star{2.5, 1.0};
  instance.z_d = evaluate_cost(instance, theta_star).zstate.z;

  // single-step schedule reduces to one plain minimize run
  SweepSchedule single;
  single.steps = {schedule.steps.back()};
  const ValueTable one =
      run_value_convergence(instance, single, {1.0, 1.0}, OptMethod::NelderMead, 120);
  REQUIRE(one.steps.size() == 1);
  CHECK(one.steps[0].ok);
  const OcpInstance fine = [&] {
    OcpInstance copy = instance;
    copy.reg = RegParams(single.steps[0].first, single.steps[0].second);
    return copy;
  }();
  const OcpResult direct = minimize(fine, {1.0, 1.0}, OptMethod::NelderMead, 120);
  CHECK(one.steps[0].inf_value == direct.cost_opt);
  CHECK(one.reference == 0.0);  // the oracle grid contains theta*

  // p=2 family: regularization inert, every step shares one value
  OcpInstance linear = instance;
  linear.params = constant_source(linear.mesh, 2.0, 1.0);
  linear.kernel = assemble_kernel(linear.mesh, KernelId::Gaussian, -1.0, 0.25, 2.0);
  linear.reg = RegParams(schedule.steps.back().first, schedule.steps.back().second);
  linear.z_d = evaluate_cost(linear, theta_star).zstate.z;
  const ValueTable flat =
      run_value_convergence(linear, schedule, {1.0, 1.0}, OptMethod::NelderMead, 80);
  for (const auto& step : flat.steps) {
    REQUIRE(step.ok);
    CHECK(step.inf_value == doctest::Approx(flat.steps[0].inf_value).epsilon(1e-9));
  }
}
