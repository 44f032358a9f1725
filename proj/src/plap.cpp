#include "anisopt/plap.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "anisopt/norms.hpp"

namespace anisopt {

ProblemParams::ProblemParams(double p_, std::vector<double> f_nodal) : p(p_), f(std::move(f_nodal)) {
  if (!(p >= 2.0) || !std::isfinite(p))
    throw std::invalid_argument("ProblemParams: exponent must satisfy 2 <= p < infinity");
  q = p / (p - 1.0);
}

ProblemParams constant_source(const Mesh& mesh, double p, double value) {
  return {p, std::vector<double>(mesh.n_vertices(), value)};
}

StateField::StateField(const Mesh& mesh)
    : y(mesh.n_vertices(), 0.0), grad(mesh.n_cells(), Vec2{0.0, 0.0}) {}

StateField::StateField(const Mesh& mesh, std::vector<double> nodal) : y(std::move(nodal)) {
  for (int v = 0; v < mesh.n_vertices(); ++v)
    if (mesh.boundary_node[v]) y[v] = 0.0;
  grad = cell_gradients(mesh, y);
}

void StateField::set_free_values(const Mesh& mesh, const DofMap& dofs,
                                 const std::vector<double>& free) {
  y.assign(mesh.n_vertices(), 0.0);
  for (int v = 0; v < mesh.n_vertices(); ++v)
    if (dofs.free_index[v] >= 0) y[v] = free[dofs.free_index[v]];
  grad = cell_gradients(mesh, y);
}

std::vector<double> StateField::free_values(const DofMap& dofs) const {
  std::vector<double> out(dofs.n_free, 0.0);
  for (int v = 0; v < dofs.n_total; ++v)
    if (dofs.free_index[v] >= 0) out[dofs.free_index[v]] = y[v];
  return out;
}

namespace {

CsrMatrix build_pattern(const Mesh& mesh, const DofMap& dofs) {
  std::vector<std::pair<int, int>> pairs;
  const int nv = mesh.verts_per_cell();
  for (int c = 0; c < mesh.n_cells(); ++c)
    for (int i = 0; i < nv; ++i)
      for (int j = 0; j < nv; ++j) {
        const int fi = dofs.free_index[mesh.cells[c][i]];
        const int fj = dofs.free_index[mesh.cells[c][j]];
        if (fi >= 0 && fj >= 0) pairs.emplace_back(fi, fj);
      }
  return CsrMatrix::from_pairs(dofs.n_free, pairs);
}

// Assemble sum_T w_T c_T (A grad phi_j, grad phi_i) into `m` (pattern reused);
// with newton = true adds the rank-one terms 2 mu'(s_T) (A grad y, grad phi_i)(A grad y, grad phi_j).
void assemble_into(CsrMatrix& m, const StateField& y, const ControlField& A, const RegParams& reg,
                   const ProblemParams& params, const Mesh& mesh, const DofMap& dofs,
                   std::vector<double>* coeff_out, bool newton) {
  m.zero();
  const int nv = mesh.verts_per_cell();
  const double vol = mesh.cell_volume;
  std::vector<Vec2> agrad(nv);
  std::vector<double> g(nv);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const Vec2 sg = A.s[c].apply(y.grad[c], mesh.dim);
    const double s = dot(sg, sg);
    const double mu = reg_coefficient(s, reg, params.p);
    if (coeff_out) (*coeff_out)[c] = mu;
    for (int lv = 0; lv < nv; ++lv) agrad[lv] = A.a[c].apply(basis_gradient(mesh, c, lv), mesh.dim);
    double dmu = 0.0;
    if (newton) {
      dmu = reg_coefficient_derivative(s, reg, params.p);
      for (int lv = 0; lv < nv; ++lv) g[lv] = dot(agrad[lv], y.grad[c]);
    }
    for (int i = 0; i < nv; ++i) {
      const int fi = dofs.free_index[mesh.cells[c][i]];
      if (fi < 0) continue;
      const Vec2 gi = basis_gradient(mesh, c, i);
      for (int j = 0; j < nv; ++j) {
        const int fj = dofs.free_index[mesh.cells[c][j]];
        if (fj < 0) continue;
        double entry = mu * dot(agrad[j], gi);
        if (newton) entry += 2.0 * dmu * g[i] * g[j];
        m.add(fi, fj, vol * entry);
      }
    }
  }
}

// r_i = F_i - sum_T w_T c_T (A grad y, grad phi_i) over free nodes
std::vector<double> residual_vector(const StateField& y, const ControlField& A,
                                    const RegParams& reg, const ProblemParams& params,
                                    const Mesh& mesh, const DofMap& dofs,
                                    const std::vector<double>& load) {
  std::vector<double> r = load;
  const int nv = mesh.verts_per_cell();
  const double vol = mesh.cell_volume;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const Vec2 sg = A.s[c].apply(y.grad[c], mesh.dim);
    const double mu = reg_coefficient(dot(sg, sg), reg, params.p);
    const Vec2 aflux = A.a[c].apply(y.grad[c], mesh.dim);
    for (int lv = 0; lv < nv; ++lv) {
      const int fi = dofs.free_index[mesh.cells[c][lv]];
      if (fi >= 0) r[fi] -= vol * mu * dot(aflux, basis_gradient(mesh, c, lv));
    }
  }
  return r;
}

double dot_vec(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

AssembledOperator assemble_regularized_operator(const StateField& y, const ControlField& A,
                                                const RegParams& reg, const ProblemParams& params,
                                                const Mesh& mesh, const DofMap& dofs) {
  AssembledOperator op{build_pattern(mesh, dofs), std::vector<double>(mesh.n_cells(), 0.0)};
  assemble_into(op.matrix, y, A, reg, params, mesh, dofs, &op.coefficient, false);
  return op;
}

CsrMatrix assemble_laplacian(const Mesh& mesh, const DofMap& dofs) {
  CsrMatrix m = build_pattern(mesh, dofs);
  const int nv = mesh.verts_per_cell();
  for (int c = 0; c < mesh.n_cells(); ++c)
    for (int i = 0; i < nv; ++i) {
      const int fi = dofs.free_index[mesh.cells[c][i]];
      if (fi < 0) continue;
      const Vec2 gi = basis_gradient(mesh, c, i);
      for (int j = 0; j < nv; ++j) {
        const int fj = dofs.free_index[mesh.cells[c][j]];
        if (fj >= 0) m.add(fi, fj, mesh.cell_volume * dot(basis_gradient(mesh, c, j), gi));
      }
    }
  return m;
}

CsrMatrix assemble_mass(const Mesh& mesh, const DofMap& dofs) {
  CsrMatrix m = build_pattern(mesh, dofs);
  const int nv = mesh.verts_per_cell();
  const double scale = mesh.dim == 1 ? mesh.cell_volume / 6.0 : mesh.cell_volume / 12.0;
  for (int c = 0; c < mesh.n_cells(); ++c)
    for (int i = 0; i < nv; ++i) {
      const int fi = dofs.free_index[mesh.cells[c][i]];
      if (fi < 0) continue;
      for (int j = 0; j < nv; ++j) {
        const int fj = dofs.free_index[mesh.cells[c][j]];
        if (fj >= 0) m.add(fi, fj, scale * (i == j ? 2.0 : 1.0));
      }
    }
  return m;
}

std::vector<double> assemble_load(const Mesh& mesh, const DofMap& dofs,
                                  const std::vector<double>& f) {
  const auto mf = mass_apply(mesh, f);
  std::vector<double> load(dofs.n_free, 0.0);
  for (int v = 0; v < dofs.n_total; ++v)
    if (dofs.free_index[v] >= 0) load[dofs.free_index[v]] = mf[v];
  return load;
}

double energy_seminorm(const StateField& y, const ControlField& A, const RegParams& reg,
                       const ProblemParams& params, const Mesh& mesh) {
  double s = 0.0;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const Vec2 sg = A.s[c].apply(y.grad[c], mesh.dim);
    const double s2 = dot(sg, sg);
    s += mesh.cell_volume * reg_coefficient(s2, reg, params.p) * s2;
  }
  return std::pow(s, 1.0 / params.p);
}

double regularized_energy(const StateField& y, const ControlField& A, const RegParams& reg,
                          const ProblemParams& params, const Mesh& mesh) {
  double e = 0.0;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const Vec2 sg = A.s[c].apply(y.grad[c], mesh.dim);
    e += mesh.cell_volume * reg_energy_density(dot(sg, sg), reg, params.p);
  }
  const auto mf = mass_apply(mesh, params.f);
  for (int v = 0; v < mesh.n_vertices(); ++v) e -= mf[v] * y.y[v];
  return e;
}

std::pair<StateField, SolveReport> solve_state(const ControlField& A, const RegParams& reg,
                                               const ProblemParams& params, const Mesh& mesh,
                                               double tol, int max_iter) {
  if (!(tol > 0.0)) throw std::invalid_argument("solve_state: tol must be positive");
  if (max_iter < 1) throw std::invalid_argument("solve_state: max_iter must be >= 1");
  const DofMap dofs(mesh);
  const double cg_tol = std::min(1e-12, 1e-2 * tol);

  const std::vector<double> load = assemble_load(mesh, dofs, params.f);
  const CsrMatrix laplace = assemble_laplacian(mesh, dofs);
  auto dual_norm = [&](const std::vector<double>& r) {
    std::vector<double> s;
    cg_solve(laplace, r, s, 1e-12);
    const double v = dot_vec(r, s);
    return std::sqrt(v > 0.0 ? v : 0.0);
  };

  StateField y(mesh);
  SolveReport report;
  CsrMatrix m = build_pattern(mesh, dofs);
  std::vector<double> yfree(dofs.n_free, 0.0);

  double energy = regularized_energy(y, A, reg, params, mesh);
  report.energy_history.push_back(energy);

  std::vector<double> r = residual_vector(y, A, reg, params, mesh, dofs, load);
  double dual = dual_norm(r);
  if (dual <= tol) {
    report.converged = true;
    report.final_residual = dual;
    report.energy_seminorm = energy_seminorm(y, A, reg, params, mesh);
    return {y, report};
  }

  bool newton_mode = false;
  StateField trial(mesh);
  for (int iter = 0; iter < max_iter; ++iter) {
    assemble_into(m, y, A, reg, params, mesh, dofs, nullptr, newton_mode);
    std::vector<double> d;
    if (newton_mode) {
      cg_solve(m, r, d, cg_tol);
    } else {
      std::vector<double> yhat;
      cg_solve(m, load, yhat, cg_tol);
      d.resize(dofs.n_free);
      for (int i = 0; i < dofs.n_free; ++i) d[i] = yhat[i] - yfree[i];
    }

    // backtracking on the regularized energy; the frozen-coefficient (and
    // Newton) direction is a descent direction for it
    double lambda = 1.0;
    double trial_energy = energy;
    std::vector<double> trial_free(dofs.n_free);
    bool accepted = false;
    while (lambda >= 1e-12) {
      for (int i = 0; i < dofs.n_free; ++i) trial_free[i] = yfree[i] + lambda * d[i];
      trial.set_free_values(mesh, dofs, trial_free);
      trial_energy = regularized_energy(trial, A, reg, params, mesh);
      if (trial_energy <= energy + 1e-15 * (1.0 + std::abs(energy))) {
        accepted = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!accepted) break;  // direction numerically exhausted

    yfree = trial_free;
    y = trial;
    energy = trial_energy;
    report.energy_history.push_back(energy);
    report.iterations = iter + 1;

    r = residual_vector(y, A, reg, params, mesh, dofs, load);
    const double dual_new = dual_norm(r);
    if (dual_new <= tol) {
      dual = dual_new;
      report.converged = true;
      break;
    }
    if (!newton_mode && dual_new > 0.99 * dual) newton_mode = true;  // Kacanov stalled
    dual = dual_new;
  }

  report.final_residual = dual;
  report.energy_seminorm = energy_seminorm(y, A, reg, params, mesh);
  return {y, report};
}

AprioriReport apriori_check(const StateField& y, const SolveReport& report, const ControlField& A,
                            const ControlBounds& bounds, const RegParams& reg,
                            const ProblemParams& params, const Mesh& mesh) {
  const double inf = std::numeric_limits<double>::infinity();
  AprioriReport out;
  const double lhs = h10_norm(mesh, y.y);

  const double rhs_energy = std::pow(reg.epsilon, 0.5 * (2.0 - params.p)) /
                            (bounds.alpha * bounds.alpha) * l2_norm_nodal(mesh, params.f);
  out.margin_energy = lhs == 0.0 ? inf : (rhs_energy - lhs) / lhs;

  const double sem = report.energy_seminorm;
  const double omega_pow = std::pow(mesh.domain_volume(), (params.p - 2.0) / (2.0 * params.p));
  const double rhs_chain = (omega_pow * sem + std::pow(sem, 0.5 * params.p)) / bounds.alpha;
  out.margin_chain = lhs == 0.0 ? inf : (rhs_chain - lhs) / lhs;

  out.ok = lhs <= rhs_energy + 1e-12 && lhs <= rhs_chain + 1e-12;
  return out;
}

double minty_gap(const StateField& y, const ControlField& A, const ProblemParams& params,
                 const Mesh& mesh, const std::vector<StateField>& probes) {
  const auto mf = mass_apply(mesh, params.f);
  double gap_min = std::numeric_limits<double>::infinity();
  for (const auto& phi : probes) {
    double gap = 0.0;
    for (int c = 0; c < mesh.n_cells(); ++c) {
      const Vec2 sg = A.s[c].apply(phi.grad[c], mesh.dim);
      const double coeff = std::pow(norm(sg), params.p - 2.0);
      const Vec2 aflux = A.a[c].apply(phi.grad[c], mesh.dim);
      const Vec2 diff{phi.grad[c][0] - y.grad[c][0], phi.grad[c][1] - y.grad[c][1]};
      gap += mesh.cell_volume * coeff * dot(aflux, diff);
    }
    for (int v = 0; v < mesh.n_vertices(); ++v) gap -= mf[v] * (phi.y[v] - y.y[v]);
    gap_min = std::min(gap_min, gap);
  }
  return gap_min;
}

double exceedance_volume(const StateField& y, const ControlField& A, const Mesh& mesh, double k,
                         bool strict) {
  const double threshold = std::sqrt(k * k + 1.0);
  double vol = 0.0;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const double v = norm(A.s[c].apply(y.grad[c], mesh.dim));
    if (strict ? v > threshold : v >= threshold) vol += mesh.cell_volume;
  }
  return vol;
}

}  // namespace anisopt
