#pragma once

#include <utility>
#include <vector>

#include "anisopt/control.hpp"
#include "anisopt/mesh.hpp"
#include "anisopt/sparse.hpp"
#include "anisopt/truncation.hpp"

namespace anisopt {

struct ProblemParams {
  double p = 2.0;
  double q = 2.0;         // conjugate exponent p/(p-1)
  std::vector<double> f;  // nodal source term

  ProblemParams() = default;
  /// Throws std::invalid_argument unless 2 <= p < infinity.
  ProblemParams(double p_, std::vector<double> f_nodal);
};

ProblemParams constant_source(const Mesh& mesh, double p, double value);

/// Nodal state with zero boundary trace and a per-cell gradient cache.
struct StateField {
  std::vector<double> y;
  std::vector<Vec2> grad;

  StateField() = default;
  explicit StateField(const Mesh& mesh);
  StateField(const Mesh& mesh, std::vector<double> nodal);

  void set_free_values(const Mesh& mesh, const DofMap& dofs, const std::vector<double>& free);
  std::vector<double> free_values(const DofMap& dofs) const;
};

struct SolveReport {
  int iterations = 0;
  double final_residual = 0.0;   // dual norm of the discrete nonlinear residual
  double energy_seminorm = 0.0;  // |y|_{A,eps,k}
  bool converged = false;
  std::vector<double> energy_history;  // regularized energy at accepted iterates
};

struct AssembledOperator {
  CsrMatrix matrix;                 // over free nodes, SPD
  std::vector<double> coefficient;  // per-cell c_T = (eps + F_k(|A^(1/2) grad y|^2))^((p-2)/2)
};

AssembledOperator assemble_regularized_operator(const StateField& y, const ControlField& A,
                                                const RegParams& reg, const ProblemParams& params,
                                                const Mesh& mesh, const DofMap& dofs);

/// Stiffness of -Laplace (A = I, unit coefficient) over free nodes.
CsrMatrix assemble_laplacian(const Mesh& mesh, const DofMap& dofs);

/// Consistent P1 mass matrix over free nodes.
CsrMatrix assemble_mass(const Mesh& mesh, const DofMap& dofs);

/// Load vector (M f restricted to free nodes).
std::vector<double> assemble_load(const Mesh& mesh, const DofMap& dofs, const std::vector<double>& f);

/// Seminorm |y|_{A,eps,k} = (sum_T vol c_T |A^(1/2) grad y|^2)^(1/p).
double energy_seminorm(const StateField& y, const ControlField& A, const RegParams& reg,
                       const ProblemParams& params, const Mesh& mesh);

/// Regularized energy sum_T vol Psi(|A^(1/2) grad y|^2) - (f, y).
double regularized_energy(const StateField& y, const ControlField& A, const RegParams& reg,
                          const ProblemParams& params, const Mesh& mesh);

/// Damped Kacanov iteration with Newton refinement once the residual
/// reduction stalls; every accepted step decreases the regularized energy.
std::pair<StateField, SolveReport> solve_state(const ControlField& A, const RegParams& reg,
                                               const ProblemParams& params, const Mesh& mesh,
                                               double tol = 1e-10, int max_iter = 500);

struct AprioriReport {
  bool ok = false;
  double margin_energy = 0.0;  // relative margin of |y|_{H1} <= eps^((2-p)/2) alpha^-2 |f|_{L2}
  double margin_chain = 0.0;   // relative margin of the seminorm chain bound
};

AprioriReport apriori_check(const StateField& y, const SolveReport& report, const ControlField& A,
                            const ControlBounds& bounds, const RegParams& reg,
                            const ProblemParams& params, const Mesh& mesh);

/// Minimum over probes of the Minty pairing
/// int |A^(1/2) grad phi|^(p-2) (A grad phi, grad phi - grad y) - int f (phi - y);
/// nonnegative (up to tolerance) when y solves the unregularized problem.
double minty_gap(const StateField& y, const ControlField& A, const ProblemParams& params,
                 const Mesh& mesh, const std::vector<StateField>& probes);

/// Total volume of cells where |A^(1/2) grad y| exceeds sqrt(k^2+1)
/// (strictly when strict, else >=).
double exceedance_volume(const StateField& y, const ControlField& A, const Mesh& mesh, double k,
                         bool strict = true);

}  // namespace anisopt
