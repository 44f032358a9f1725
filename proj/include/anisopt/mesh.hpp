#pragma once

#include <array>
#include <vector>

#include "anisopt/smallmat.hpp"

namespace anisopt {

struct InteriorEdge {
  int cell_a = -1;
  int cell_b = -1;
  double facet_measure = 0.0;
};

/// Uniform simplicial mesh of the unit interval (dim 1) or the unit square
/// (dim 2, two triangles per grid square). Immutable after construction.
struct Mesh {
  int dim = 1;
  int n = 2;  // cells per axis
  std::vector<Vec2> vertices;             // (x, 0) in 1D
  std::vector<std::array<int, 3>> cells;  // vertex ids; third entry -1 in 1D
  std::vector<InteriorEdge> interior_edges;
  std::vector<char> boundary_node;  // 1 on Dirichlet boundary vertices
  double cell_volume = 0.0;         // uniform

  int n_cells() const { return static_cast<int>(cells.size()); }
  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int verts_per_cell() const { return dim + 1; }
  double domain_volume() const { return 1.0; }

  Vec2 barycenter(int cell) const {
    Vec2 b{0.0, 0.0};
    const int nv = verts_per_cell();
    for (int lv = 0; lv < nv; ++lv) {
      const Vec2& p = vertices[cells[cell][lv]];
      b[0] += p[0];
      b[1] += p[1];
    }
    b[0] /= nv;
    b[1] /= nv;
    return b;
  }
};

/// Throws std::invalid_argument unless dim is 1 or 2 and n >= 2.
Mesh build_mesh(int dim, int n);

/// Interior-vertex numbering for the homogeneous Dirichlet problem.
struct DofMap {
  int n_total = 0;
  int n_free = 0;
  std::vector<int> free_index;  // -1 on boundary vertices

  explicit DofMap(const Mesh& mesh);
};

/// Constant gradient of the P1 basis function of local vertex lv on cell.
Vec2 basis_gradient(const Mesh& mesh, int cell, int lv);

/// Per-cell (constant) gradient of a nodal field.
std::vector<Vec2> cell_gradients(const Mesh& mesh, const std::vector<double>& nodal);

struct QuadPoint {
  Vec2 x{0.0, 0.0};
  double w = 0.0;
};

/// One-point (barycenter) rule; weights sum to the domain volume.
std::vector<QuadPoint> quadrature_points(const Mesh& mesh);

/// Nodal field sampled at cell barycenters (P1 value = vertex average).
std::vector<double> to_cell_values(const Mesh& mesh, const std::vector<double>& nodal);

}  // namespace anisopt
