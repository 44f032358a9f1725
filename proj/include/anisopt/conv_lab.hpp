#pragma once

#include <string>
#include <utility>
#include <vector>

#include "anisopt/control.hpp"
#include "anisopt/hammerstein.hpp"
#include "anisopt/mesh.hpp"
#include "anisopt/ocp.hpp"
#include "anisopt/plap.hpp"

namespace anisopt {

struct SweepSchedule {
  std::vector<std::pair<double, double>> steps;  // (epsilon_n, k_n)

  /// epsilon_n = 10^-n, k_n = 2^n for n = 1..n_steps.
  static SweepSchedule default_schedule(int n_steps = 6);
  /// Throws unless epsilon is positive strictly decreasing and k >= 1
  /// strictly increasing.
  void validate() const;
  int size() const { return static_cast<int>(steps.size()); }
};

struct SweepStep {
  double eps = 0.0, k = 0.0;
  double y_h1 = 0.0, y_aek = 0.0, y_w1p = 0.0;
  double z_lp = 0.0, z_l2 = 0.0;
  double omega1 = 0.0, omega1_bound = 0.0;  // |Omega^1_k| and its W^{1,p} bound
  double omega3 = 0.0, omega3_bound = 0.0;  // |Omega^3_k| and its L^p bound
  double omega_e = 0.0, omega_e_bound = 0.0;  // energy-seminorm variant
  double chain_bound = 0.0;                 // rhs of the H1 chain bound at this step
  double cost = 0.0;
  double ydiff_h1 = 0.0, zdiff_lp = 0.0;
  int state_iterations = 0;
  bool state_converged = false;
  int ham_iterations = 0;
  bool ham_converged = false;
};

struct SweepManifest {
  std::vector<SweepStep> steps;
  std::string reference;  // descriptor of the reference solution
  bool complete = false;  // false when an inner solve failed (partial manifest)
  bool estimates_ok = false;  // per-step measure estimates and H1 chain bounds
  bool trend_ok = false;      // diffs-to-reference non-increasing over the last 3 steps
  double poincare = 0.0;
  double limit_value = 0.0;  // |y|_{A,eps,k}^{p-1} at the last step
  double limit_bound = 0.0;  // C_Omega alpha^-1 |f|_{L2} |Omega|^((p-2)/(2p))
  bool limit_ok = false;     // limit_value <= 1.05 * limit_bound
};

/// Regularized state solves across the schedule; the reference is the final
/// (smallest epsilon, largest k) step. Honors ANISOPT_THREADS.
SweepManifest run_state_sweep(const ControlField& a, const SweepSchedule& schedule,
                              const ProblemParams& params, const ControlBounds& bounds,
                              const Mesh& mesh, double tol = 1e-10, int max_iter = 500);

/// Additionally solves the regularized Hammerstein equation at every step.
SweepManifest run_coupled_sweep(const ControlField& a, const SweepSchedule& schedule,
                                const ProblemParams& params, const ControlBounds& bounds,
                                const Kernel& kernel, const Mesh& mesh,
                                const std::vector<double>& z_d = {}, double tol = 1e-10,
                                int max_iter = 500);

struct ValueStep {
  double eps = 0.0, k = 0.0;
  double inf_value = 0.0;
  std::vector<double> theta;
  bool ok = false;
};

struct ValueTable {
  std::vector<ValueStep> steps;
  double reference = 0.0;  // grid-oracle optimum at the finest regularization
  std::vector<double> reference_theta;
  bool trend_ok = false;
  double final_gap = 0.0;
};

/// Per-step minimization with a dense constant-diagonal grid oracle as the
/// reference; instance.reg is overwritten step by step.
ValueTable run_value_convergence(const OcpInstance& instance, const SweepSchedule& schedule,
                                 const std::vector<double>& theta0, OptMethod method, int budget,
                                 int grid_points = 16);

struct PoincareConstant {
  double c_omega = 0.0;    // 1 / sqrt(lambda_min)
  double lambda_min = 0.0;  // smallest Dirichlet stiffness/mass eigenvalue
  int iterations = 0;
};

/// Inverse power iteration on the generalized eigenproblem K v = lambda M v.
PoincareConstant estimate_poincare(const Mesh& mesh, double tol = 1e-10);

struct EstimateReport {
  bool ok = false;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // (rhs - lhs) / max(lhs, tiny)
};

/// Duality estimate |int g y| against the Poincare/seminorm bound.
EstimateReport check_test_estimate(const std::vector<double>& g_cells, const StateField& y,
                                   const ControlField& a, const RegParams& reg,
                                   const ProblemParams& params, const ControlBounds& bounds,
                                   const PoincareConstant& c, const Mesh& mesh);

}  // namespace anisopt
