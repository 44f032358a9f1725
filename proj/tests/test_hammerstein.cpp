#include <cmath>

#include "anisopt/hammerstein.hpp"
#include "anisopt/norms.hpp"
#include "anisopt/rng.hpp"
#include "doctest.h"

using namespace anisopt;

namespace {

// single "cell" with unit weight: scalar Hammerstein equation
Kernel scalar_kernel(double c, double p) {
  Eigen::MatrixXd k(1, 1);
  k(0, 0) = c;
  return kernel_from_matrix(k, {1.0}, p);
}

// root of f on [a,b] by bisection, assuming a sign change
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

}  // namespace

TEST_CASE("apply_B") {
  const Mesh mesh = build_mesh(1, 8);

  const Kernel zero = assemble_kernel(mesh, KernelId::Zero, 0.0, 0.0, 2.0);
  const std::vector<double> u(mesh.n_cells(), 3.0);
  for (double v : apply_B(zero, u)) CHECK(v == 0.0);

  // constant kernel integrates u: (Bu)_i = c * sum_j u_j w_j
  const double c = 1.7;
  const Kernel rank1 = assemble_kernel(mesh, KernelId::SeparableRank1, c, 0.0, 2.0);
  Rng rng(3);
  std::vector<double> field(mesh.n_cells());
  double integral = 0.0;
  for (int i = 0; i < mesh.n_cells(); ++i) {
    field[i] = rng.uniform(-2.0, 2.0);
    integral += field[i] * mesh.cell_volume;
  }
  for (double v : apply_B(rank1, field)) CHECK(v == doctest::Approx(c * integral).epsilon(1e-13));
  CHECK(rank1.c1 == doctest::Approx(std::pow(c, 2.0)).epsilon(1e-12));

  // gaussian column oracle: B applied to a one-cell indicator
  const Kernel gauss = assemble_kernel(mesh, KernelId::Gaussian, 0.8, 0.3, 2.0);
  std::vector<double> indicator(mesh.n_cells(), 0.0);
  indicator[2] = 1.0;
  const auto column = apply_B(gauss, indicator);
  const auto qp = quadrature_points(mesh);
  for (int i = 0; i < mesh.n_cells(); ++i) {
    const double dx = qp[i].x[0] - qp[2].x[0];
    CHECK(column[i] ==
          doctest::Approx(0.8 * std::exp(-dx * dx / (0.3 * 0.3)) * qp[2].w).epsilon(1e-13));
  }

  // linearity and positivity
  std::vector<double> u1(mesh.n_cells()), u2(mesh.n_cells());
  for (int i = 0; i < mesh.n_cells(); ++i) {
    u1[i] = rng.uniform(-1.0, 1.0);
    u2[i] = rng.uniform(-1.0, 1.0);
  }
  const double au = 0.7, bu = -1.3;
  std::vector<double> combo(mesh.n_cells());
  for (int i = 0; i < mesh.n_cells(); ++i) combo[i] = au * u1[i] + bu * u2[i];
  const auto b_combo = apply_B(gauss, combo);
  const auto b1 = apply_B(gauss, u1);
  const auto b2 = apply_B(gauss, u2);
  double pairing = 0.0;
  for (int i = 0; i < mesh.n_cells(); ++i) {
    CHECK(b_combo[i] == doctest::Approx(au * b1[i] + bu * b2[i]).epsilon(1e-12));
    pairing += u1[i] * b1[i] * mesh.cell_volume;
  }
  CHECK(pairing >= -1e-10);
  CHECK(gauss.positivity_checked);
  CHECK(gauss.min_sym_eigenvalue >= -1e-10);

  // normalized gaussian: discrete kernel condition with c1 = 1
  const Kernel normalized = assemble_kernel(mesh, KernelId::Gaussian, -1.0, 0.3, 3.0);
  CHECK(normalized.c1 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("pointwise nonlinearities") {
  CHECK(nonlinearity_F({0.0}, {0.0}, 3.0)[0] == 0.0);
  CHECK(nonlinearity_F({1.5}, {-0.25}, 2.0)[0] == doctest::Approx(1.25).epsilon(1e-15));
  CHECK(nonlinearity_F({2.0}, {-1.0}, 4.0)[0] == doctest::Approx(7.0).epsilon(1e-14));  // 8 - 1

  const RegParams reg(0.01, 2.0);
  CHECK(nonlinearity_F_reg({0.4}, {-0.7}, reg, 2.0)[0] == doctest::Approx(-0.3).epsilon(1e-14));
  // in-range brackets: (0.01+0.25)*0.5 + (0.01+0.0625)*0.25
  CHECK(nonlinearity_F_reg({0.5}, {0.25}, reg, 4.0)[0] ==
        doctest::Approx(0.148125).epsilon(1e-14));
  // far outside the truncation: both brackets saturate at eps + k^2 + 1
  const double saturated = reg.epsilon + reg.k * reg.k + 1.0;
  CHECK(nonlinearity_F_reg({10.0}, {-20.0}, reg, 4.0)[0] ==
        doctest::Approx(saturated * 10.0 - saturated * 20.0).epsilon(1e-12));

  // oddness in each argument
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const double y = rng.uniform(-3.0, 3.0), z = rng.uniform(-3.0, 3.0);
    for (double p : {2.0, 2.5, 3.0, 4.0}) {
      const double plus = nonlinearity_F({y}, {z}, p)[0];
      CHECK(nonlinearity_F({-y}, {z}, p)[0] ==
            doctest::Approx(plus - 2.0 * nonlinearity_F({y}, {0.0}, p)[0]).epsilon(1e-11));
      const double reg_plus = nonlinearity_F_reg({y}, {z}, reg, p)[0];
      const double reg_flip = nonlinearity_F_reg({y}, {-z}, reg, p)[0];
      CHECK(reg_plus + reg_flip ==
            doctest::Approx(2.0 * nonlinearity_F_reg({y}, {0.0}, reg, p)[0]).epsilon(1e-11));
    }
  }
}

TEST_CASE("scalar closed forms") {
  // zero kernel: z = 0 immediately
  const Mesh mesh = build_mesh(1, 4);
  const Kernel zero = assemble_kernel(mesh, KernelId::Zero, 0.0, 0.0, 2.0);
  const auto [z0, r0] = solve_hammerstein(std::vector<double>(mesh.n_cells(), 1.0), zero, 2.0, {});
  CHECK(r0.converged);
  CHECK(r0.iterations <= 1);
  for (double v : z0) CHECK(v == 0.0);

  // p = 2, y = 1: z + c (1 + z) = 0  =>  z = -c / (1 + c)
  for (double c : {1.0, 0.7}) {
    const auto [z, report] = solve_hammerstein({1.0}, scalar_kernel(c, 2.0), 2.0, {});
    CHECK(report.converged);
    CHECK(z[0] == doctest::Approx(-c / (1.0 + c)).epsilon(1e-12));
  }

  // p = 4, c = 1, y = 1: z + 1 + z^3 = 0; bisection oracle for the real root
  const double root = bisect([](double z) { return z * z * z + z + 1.0; }, -2.0, 0.0);
  CHECK(root == doctest::Approx(-0.68233).epsilon(1e-4));
  const auto [z4, r4] = solve_hammerstein({1.0}, scalar_kernel(1.0, 4.0), 4.0, {});
  CHECK(r4.converged);
  CHECK(std::abs(z4[0] - root) < 1e-10);

  // hidden right-hand side g (tests only): z + c(y + z) = g => z = (g - cy)/(1+c)
  const auto [zg, rg] = solve_hammerstein({1.0}, scalar_kernel(0.5, 2.0), 2.0, {}, 1e-10, 100, {},
                                          {0.25});
  CHECK(rg.converged);
  CHECK(zg[0] == doctest::Approx((0.25 - 0.5) / 1.5).epsilon(1e-12));
}

TEST_CASE("uniqueness probe") {
  const Mesh mesh = build_mesh(1, 16);
  const Kernel zero = assemble_kernel(mesh, KernelId::Zero, 0.0, 0.0, 3.0);
  const std::vector<double> y(mesh.n_cells(), 0.5);
  CHECK(uniqueness_probe(y, zero, 3.0, {}, 3, mesh) == 0.0);

  const Kernel gauss = assemble_kernel(mesh, KernelId::Gaussian, -1.0, 0.25, 3.0);
  CHECK(uniqueness_probe(y, gauss, 3.0, {}, 5, mesh) <= 1e-8);
  CHECK(uniqueness_probe(y, gauss, 2.0, {}, 5, mesh) <= 1e-8);  // linear case

  const RegParams reg(1e-2, 4.0);
  CHECK(uniqueness_probe(y, gauss, 3.0, reg, 5, mesh) <= 1e-8);
}

TEST_CASE("monotonicity and a-priori bound of solved states") {
  const Mesh mesh = build_mesh(1, 16);
  const RegParams reg(1e-2, 2.0);
  Rng rng(11);

  // z -> F(y, z) monotone pointwise, both forms
  for (int i = 0; i < 10000; ++i) {
    const double y = rng.uniform(-3.0, 3.0);
    const double a = rng.uniform(-3.0, 3.0), b = rng.uniform(-3.0, 3.0);
    for (double p : {2.0, 3.0, 4.0}) {
      const double fa = nonlinearity_F({y}, {a}, p)[0];
      const double fb = nonlinearity_F({y}, {b}, p)[0];
      CHECK((fa - fb) * (a - b) >= -1e-12);
      const double ga = nonlinearity_F_reg({y}, {a}, reg, p)[0];
      const double gb = nonlinearity_F_reg({y}, {b}, reg, p)[0];
      CHECK((ga - gb) * (a - b) >= -1e-12);
    }
  }

  // |z|_{L2} <= |y|_{L2} + 10 tol for solved states on the gaussian fixture
  const double tol = 1e-10;
  const Kernel gauss = assemble_kernel(mesh, KernelId::Gaussian, -1.0, 0.25, 3.0);
  const auto qp = quadrature_points(mesh);
  std::vector<double> y_cells(mesh.n_cells());
  for (int i = 0; i < mesh.n_cells(); ++i) y_cells[i] = std::sin(3.0 * qp[i].x[0]);
  for (bool regularized : {false, true}) {
    const std::optional<RegParams> maybe_reg =
        regularized ? std::optional<RegParams>(reg) : std::nullopt;
    const auto [z, report] = solve_hammerstein(y_cells, gauss, 3.0, maybe_reg, tol);
    REQUIRE(report.converged);
    CHECK(l2_norm_cells(mesh, z) <= l2_norm_cells(mesh, y_cells) + 10.0 * tol);
  }
}
