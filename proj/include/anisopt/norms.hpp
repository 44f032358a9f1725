#pragma once

#include <vector>

#include "anisopt/mesh.hpp"

namespace anisopt {

// Discrete norms used throughout, stated once:
//   |y|_{H^1_0}    = (sum_T vol(T) |grad y|_T^2)^(1/2)
//   |y|_{W^{1,p}}  = (sum_T vol(T) |grad y|_T^p)^(1/p)
//   |f|_{L^2}      = (f^T M f)^(1/2) with the consistent P1 mass matrix
//   cell fields    = midpoint rule on cell values

double h10_norm(const Mesh& mesh, const std::vector<double>& nodal);
double w1p_norm(const Mesh& mesh, const std::vector<double>& nodal, double p);

/// Consistent-mass L^2 norm of a nodal field.
double l2_norm_nodal(const Mesh& mesh, const std::vector<double>& nodal);

/// M f for the consistent P1 mass matrix over all vertices.
std::vector<double> mass_apply(const Mesh& mesh, const std::vector<double>& nodal);

/// Midpoint-rule L^p norm of a per-cell field.
double lp_norm_cells(const Mesh& mesh, const std::vector<double>& cells, double p);
double l2_norm_cells(const Mesh& mesh, const std::vector<double>& cells);

/// Midpoint-rule integral of a per-cell field.
double integrate_cells(const Mesh& mesh, const std::vector<double>& cells);

}  // namespace anisopt
