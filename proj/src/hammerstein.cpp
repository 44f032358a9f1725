#include "anisopt/hammerstein.hpp"

#include <cmath>
#include <stdexcept>

#include "anisopt/norms.hpp"
#include "anisopt/rng.hpp"

namespace anisopt {

KernelId parse_kernel_id(const std::string& name) {
  if (name == "zero") return KernelId::Zero;
  if (name == "separable-rank1") return KernelId::SeparableRank1;
  if (name == "gaussian") return KernelId::Gaussian;
  throw std::invalid_argument("unknown kernel id: " + name);
}

std::string kernel_name(KernelId id) {
  switch (id) {
    case KernelId::Zero: return "zero";
    case KernelId::SeparableRank1: return "separable-rank1";
    default: return "gaussian";
  }
}

namespace {

void finalize_kernel(Kernel& kernel, const Eigen::MatrixXd& k_raw, double p,
                     int positivity_check_limit) {
  const int n = static_cast<int>(k_raw.rows());
  kernel.bmat.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) kernel.bmat(i, j) = k_raw(i, j) * kernel.weights[j];

  double c1 = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      c1 += kernel.weights[i] * kernel.weights[j] * std::pow(std::abs(k_raw(i, j)), p);
  kernel.c1 = c1;

  if (n <= positivity_check_limit) {
    const Eigen::MatrixXd sym = 0.5 * (kernel.bmat + kernel.bmat.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
    kernel.min_sym_eigenvalue = es.eigenvalues().minCoeff();
    kernel.positivity_checked = true;
  }
}

}  // namespace

Kernel assemble_kernel(const Mesh& mesh, KernelId id, double c, double sigma, double p,
                       int positivity_check_limit) {
  const auto qp = quadrature_points(mesh);
  const int n = static_cast<int>(qp.size());
  Kernel kernel;
  kernel.id = id;
  kernel.sigma = sigma;
  kernel.weights.resize(n);
  for (int i = 0; i < n; ++i) kernel.weights[i] = qp[i].w;

  Eigen::MatrixXd k_raw = Eigen::MatrixXd::Zero(n, n);
  switch (id) {
    case KernelId::Zero:
      kernel.c = 0.0;
      break;
    case KernelId::SeparableRank1:
      kernel.c = c > 0.0 ? c : 1.0;
      k_raw.setConstant(kernel.c);
      break;
    case KernelId::Gaussian: {
      if (!(sigma > 0.0)) throw std::invalid_argument("gaussian kernel: sigma must be positive");
      Eigen::MatrixXd shape(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const double dx = qp[i].x[0] - qp[j].x[0];
          const double dy = qp[i].x[1] - qp[j].x[1];
          shape(i, j) = std::exp(-(dx * dx + dy * dy) / (sigma * sigma));
        }
      if (c > 0.0) {
        kernel.c = c;
      } else {
        // normalize so the discrete kernel condition holds with c1 = 1
        double s = 0.0;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            s += kernel.weights[i] * kernel.weights[j] * std::pow(shape(i, j), p);
        kernel.c = std::pow(s, -1.0 / p);
      }
      k_raw = kernel.c * shape;
      break;
    }
  }
  finalize_kernel(kernel, k_raw, p, positivity_check_limit);
  return kernel;
}

Kernel kernel_from_matrix(const Eigen::MatrixXd& k_raw, const std::vector<double>& weights,
                          double p) {
  if (k_raw.rows() != k_raw.cols() || k_raw.rows() != static_cast<Eigen::Index>(weights.size()))
    throw std::invalid_argument("kernel_from_matrix: shape mismatch");
  Kernel kernel;
  kernel.id = KernelId::Gaussian;  // explicit matrices are treated as generic
  kernel.weights = weights;
  finalize_kernel(kernel, k_raw, p, 2048);
  return kernel;
}

std::vector<double> apply_B(const Kernel& kernel, const std::vector<double>& u) {
  const int n = kernel.n();
  Eigen::Map<const Eigen::VectorXd> uv(u.data(), n);
  const Eigen::VectorXd out = kernel.bmat * uv;
  return {out.data(), out.data() + n};
}

namespace {
double power_term(double v, double p) { return v == 0.0 ? 0.0 : std::pow(std::abs(v), p - 2.0) * v; }
}  // namespace

std::vector<double> nonlinearity_F(const std::vector<double>& y, const std::vector<double>& z,
                                   double p) {
  std::vector<double> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = power_term(y[i], p) + power_term(z[i], p);
  return out;
}

std::vector<double> nonlinearity_F_reg(const std::vector<double>& y, const std::vector<double>& z,
                                       const RegParams& reg, double p) {
  std::vector<double> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i)
    out[i] = reg_coefficient(y[i] * y[i], reg, p) * y[i] + reg_coefficient(z[i] * z[i], reg, p) * z[i];
  return out;
}

double nonlinearity_dFdz(double z, double p) {
  return z == 0.0 ? (p == 2.0 ? 1.0 : 0.0) : (p - 1.0) * std::pow(std::abs(z), p - 2.0);
}

double nonlinearity_reg_dFdz(double z, const RegParams& reg, double p) {
  const double s = z * z;
  return reg_coefficient(s, reg, p) + 2.0 * s * reg_coefficient_derivative(s, reg, p);
}

HammersteinState::HammersteinState(const Mesh& mesh, std::vector<double> cells, double p)
    : z(std::move(cells)) {
  l2 = l2_norm_cells(mesh, z);
  lp = lp_norm_cells(mesh, z, p);
}

std::pair<std::vector<double>, SolveReport> solve_hammerstein(
    const std::vector<double>& y_cells, const Kernel& kernel, double p,
    const std::optional<RegParams>& reg, double tol, int max_iter, const std::vector<double>& z0,
    const std::vector<double>& g) {
  if (!(tol > 0.0)) throw std::invalid_argument("solve_hammerstein: tol must be positive");
  const int n = kernel.n();
  if (static_cast<int>(y_cells.size()) != n)
    throw std::invalid_argument("solve_hammerstein: state/kernel size mismatch");

  std::vector<double> z = z0.empty() ? std::vector<double>(n, 0.0) : z0;
  auto residual = [&](const std::vector<double>& zz) {
    const auto fv = reg ? nonlinearity_F_reg(y_cells, zz, *reg, p) : nonlinearity_F(y_cells, zz, p);
    auto r = apply_B(kernel, fv);
    for (int i = 0; i < n; ++i) r[i] += zz[i] - (g.empty() ? 0.0 : g[i]);
    return r;
  };
  auto inf_norm = [n](const std::vector<double>& v) {
    double m = 0.0;
    for (int i = 0; i < n; ++i) m = std::max(m, std::abs(v[i]));
    return m;
  };

  SolveReport report;
  std::vector<double> r = residual(z);
  double rnorm = inf_norm(r);

  Eigen::MatrixXd jac(n, n);
  std::vector<double> z_trial(n);
  for (int iter = 0; iter < max_iter && rnorm > tol; ++iter) {
    // J = I + B diag(dF/dz)
    for (int j = 0; j < n; ++j) {
      const double d = reg ? nonlinearity_reg_dFdz(z[j], *reg, p) : nonlinearity_dFdz(z[j], p);
      for (int i = 0; i < n; ++i) jac(i, j) = kernel.bmat(i, j) * d;
    }
    jac.diagonal().array() += 1.0;

    Eigen::Map<const Eigen::VectorXd> rv(r.data(), n);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(jac);
    const Eigen::VectorXd dz = lu.solve(-rv);
    if (!dz.allFinite() || (jac * dz + rv).norm() > 1e-8 * (1.0 + rv.norm()))
      throw std::runtime_error("solve_hammerstein: singular Jacobian");

    double lambda = 1.0;
    bool accepted = false;
    while (lambda >= 1e-12) {
      for (int i = 0; i < n; ++i) z_trial[i] = z[i] + lambda * dz(i);
      const auto r_trial = residual(z_trial);
      const double rn_trial = inf_norm(r_trial);
      if (rn_trial < rnorm) {
        z = z_trial;
        r = r_trial;
        rnorm = rn_trial;
        accepted = true;
        break;
      }
      lambda *= 0.5;
    }
    report.iterations = iter + 1;
    if (!accepted) break;
  }

  report.final_residual = rnorm;
  report.converged = rnorm <= tol;
  return {z, report};
}

std::pair<HammersteinState, SolveReport> solve_hammerstein(const StateField& y, const Kernel& kernel,
                                                           double p,
                                                           const std::optional<RegParams>& reg,
                                                           const Mesh& mesh, double tol,
                                                           int max_iter) {
  auto [z, report] = solve_hammerstein(to_cell_values(mesh, y.y), kernel, p, reg, tol, max_iter);
  return {HammersteinState(mesh, std::move(z), p), report};
}

double uniqueness_probe(const std::vector<double>& y_cells, const Kernel& kernel, double p,
                        const std::optional<RegParams>& reg, int n_starts, const Mesh& mesh,
                        double tol, int max_iter, unsigned long long seed) {
  if (n_starts < 2) throw std::invalid_argument("uniqueness_probe: need at least 2 starts");
  const int n = kernel.n();
  Rng rng(seed);
  std::vector<std::vector<double>> solutions;
  solutions.reserve(n_starts);
  for (int s = 0; s < n_starts; ++s) {
    std::vector<double> z0(n);
    for (int i = 0; i < n; ++i) z0[i] = rng.uniform(-2.0, 2.0);
    auto [z, report] = solve_hammerstein(y_cells, kernel, p, reg, tol, max_iter, z0);
    if (!report.converged)
      throw std::runtime_error("uniqueness_probe: solve did not converge from start " +
                               std::to_string(s));
    solutions.push_back(std::move(z));
  }
  double max_dist = 0.0;
  std::vector<double> diff(n);
  for (int a = 0; a < n_starts; ++a)
    for (int b = a + 1; b < n_starts; ++b) {
      for (int i = 0; i < n; ++i) diff[i] = solutions[a][i] - solutions[b][i];
      max_dist = std::max(max_dist, lp_norm_cells(mesh, diff, p));
    }
  return max_dist;
}

}  // namespace anisopt
