#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "anisopt/mesh.hpp"
#include "anisopt/smallmat.hpp"

namespace anisopt {

/// Spectral bounds and BV budget of the admissible class: every cell matrix
/// has spectrum in [xi1^2, xi2^2] and the square-root field satisfies
/// tv(A^(1/2)) <= gamma. Bounds are spatially constant here.
struct ControlBounds {
  double xi1 = 0.5;
  double xi2 = 2.0;
  double alpha = 0.5;  // uniform lower bound, alpha <= xi1
  double gamma = 10.0;

  ControlBounds() = default;
  ControlBounds(double xi1_, double xi2_, double alpha_, double gamma_);
};

/// Cellwise symmetric matrix control with its cached square root.
struct ControlField {
  int dim = 1;
  std::vector<SymMat> a;  // per-cell matrix
  std::vector<SymMat> s;  // per-cell symmetric square root

  ControlField() = default;
  ControlField(int dim_, std::vector<SymMat> cells);

  int n_cells() const { return static_cast<int>(a.size()); }
};

ControlField constant_control(const Mesh& mesh, const SymMat& m);
ControlField identity_control(const Mesh& mesh);

struct TvReport {
  double tv_value = 0.0;
  bool within_budget = true;
};

/// Discrete total variation of the square-root field: sum over interior
/// edges of facet measure times the Frobenius norm of the jump of A^(1/2).
TvReport discrete_tv(const ControlField& field, const Mesh& mesh, const ControlBounds& bounds);

/// Cellwise eigenvalue clipping into [xi1^2, xi2^2]. Non-symmetric input is
/// impossible by construction of SymMat; fields violating the cached-root
/// invariant are repaired and reported through `warnings`.
ControlField project_to_admissible(const ControlField& field, const ControlBounds& bounds,
                                   std::vector<std::string>* warnings = nullptr);

enum class ControlScheme { ConstantDiagonal, ConstantRotated, TwoBlock };

ControlScheme parse_scheme(const std::string& name);
std::string scheme_name(ControlScheme scheme);

/// Number of theta components (dim-independent): 2, 3, 4 respectively.
int scheme_arity(ControlScheme scheme);

/// Low-dimensional control families for the optimizer:
///   constant-diagonal: A = diag(th1, th2) everywhere (1D uses th1 only)
///   constant-rotated:  A = R(th3) diag(th1, th2) R(th3)^T everywhere
///   two-block:         diag(th1, th2) on x < 1/2, diag(th3, th4) on x >= 1/2
/// Diagonal components are clipped into [xi1^2, xi2^2]; the output passes
/// project_to_admissible unchanged.
ControlField parameterize(const std::vector<double>& theta, ControlScheme scheme, const Mesh& mesh,
                          const ControlBounds& bounds);

/// CSV rows: cell_id,a11,a12,a22 (1D: cell_id,a11).
void write_control_csv(std::ostream& os, const ControlField& field);

}  // namespace anisopt
