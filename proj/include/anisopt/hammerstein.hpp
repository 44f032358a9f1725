#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "anisopt/mesh.hpp"
#include "anisopt/plap.hpp"
#include "anisopt/truncation.hpp"

namespace anisopt {

enum class KernelId { Zero, SeparableRank1, Gaussian };

KernelId parse_kernel_id(const std::string& name);
std::string kernel_name(KernelId id);

/// Midpoint (Nystrom) discretization of (Bu)(x) = int K(x,t) u(t) dt on the
/// cell barycenters: bmat(i,j) = K(x_i, x_j) w_j.
struct Kernel {
  KernelId id = KernelId::Zero;
  double c = 0.0;      // scale actually used
  double sigma = 0.0;  // gaussian width
  Eigen::MatrixXd bmat;
  std::vector<double> weights;
  double c1 = 0.0;  // discrete kernel condition: sum_ij w_i w_j K(x_i,x_j)^p
  double min_sym_eigenvalue = 0.0;
  bool positivity_checked = false;

  int n() const { return static_cast<int>(bmat.rows()); }
};

/// Assemble a kernel fixture; for the gaussian, c <= 0 selects the scale
/// that makes the discrete kernel condition hold with c1 = 1. The
/// positivity check (smallest eigenvalue of the symmetric part) is skipped
/// above `positivity_check_limit` cells.
Kernel assemble_kernel(const Mesh& mesh, KernelId id, double c, double sigma, double p,
                       int positivity_check_limit = 2048);

/// Kernel from an explicit matrix of raw values K(x_i,x_j) and weights.
Kernel kernel_from_matrix(const Eigen::MatrixXd& k_raw, const std::vector<double>& weights,
                          double p);

std::vector<double> apply_B(const Kernel& kernel, const std::vector<double>& u);

/// F(y,z) = |y|^(p-2) y + |z|^(p-2) z, pointwise on cell values.
std::vector<double> nonlinearity_F(const std::vector<double>& y, const std::vector<double>& z,
                                   double p);

/// F_{eps,k}(y,z) = (eps + F_k(y^2))^((p-2)/2) y + (eps + F_k(z^2))^((p-2)/2) z.
std::vector<double> nonlinearity_F_reg(const std::vector<double>& y, const std::vector<double>& z,
                                       const RegParams& reg, double p);

/// Derivative of the z-part of F (or F_{eps,k}); nonnegative for p >= 2.
double nonlinearity_dFdz(double z, double p);
double nonlinearity_reg_dFdz(double z, const RegParams& reg, double p);

struct HammersteinState {
  std::vector<double> z;
  double l2 = 0.0;  // midpoint-rule norms
  double lp = 0.0;

  HammersteinState() = default;
  HammersteinState(const Mesh& mesh, std::vector<double> cells, double p);
};

/// Newton with step halving on R(z) = z + B F(y,z) - g; stops when
/// |R|_inf <= tol. The right-hand side g defaults to zero and exists for
/// tests only. Throws on a numerically singular Jacobian (guarded, not
/// expected for a positive semidefinite kernel).
std::pair<std::vector<double>, SolveReport> solve_hammerstein(
    const std::vector<double>& y_cells, const Kernel& kernel, double p,
    const std::optional<RegParams>& reg, double tol = 1e-10, int max_iter = 100,
    const std::vector<double>& z0 = {}, const std::vector<double>& g = {});

/// Convenience overload: samples the state at cell barycenters first.
std::pair<HammersteinState, SolveReport> solve_hammerstein(const StateField& y, const Kernel& kernel,
                                                           double p,
                                                           const std::optional<RegParams>& reg,
                                                           const Mesh& mesh, double tol = 1e-10,
                                                           int max_iter = 100);

/// Max pairwise L^p distance between solutions started from n_starts random
/// iterates; small values witness uniqueness of the root.
double uniqueness_probe(const std::vector<double>& y_cells, const Kernel& kernel, double p,
                        const std::optional<RegParams>& reg, int n_starts, const Mesh& mesh,
                        double tol = 1e-10, int max_iter = 100, unsigned long long seed = 7);

}  // namespace anisopt
