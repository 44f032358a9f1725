#include "anisopt/mesh.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <utility>

namespace anisopt {

Mesh build_mesh(int dim, int n) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("build_mesh: dim must be 1 or 2");
  if (n < 2) throw std::invalid_argument("build_mesh: resolution n must be at least 2");

  Mesh mesh;
  mesh.dim = dim;
  mesh.n = n;
  const double h = 1.0 / n;

  if (dim == 1) {
    mesh.cell_volume = h;
    mesh.vertices.resize(n + 1);
    mesh.boundary_node.assign(n + 1, 0);
    for (int i = 0; i <= n; ++i) mesh.vertices[i] = {i * h, 0.0};
    mesh.boundary_node.front() = 1;
    mesh.boundary_node.back() = 1;
    mesh.cells.resize(n);
    for (int i = 0; i < n; ++i) mesh.cells[i] = {i, i + 1, -1};
    // interior facets are the interior vertices; the 0-dimensional facet measure is 1
    for (int i = 0; i + 1 < n; ++i) mesh.interior_edges.push_back({i, i + 1, 1.0});
    return mesh;
  }

  // dim == 2: (n+1)^2 vertices, each grid square split along its (i,j)->(i+1,j+1) diagonal
  mesh.cell_volume = 0.5 * h * h;
  const int nv = n + 1;
  auto vid = [nv](int i, int j) { return j * nv + i; };
  mesh.vertices.resize(nv * nv);
  mesh.boundary_node.assign(nv * nv, 0);
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) {
      mesh.vertices[vid(i, j)] = {i * h, j * h};
      if (i == 0 || i == n || j == 0 || j == n) mesh.boundary_node[vid(i, j)] = 1;
    }
  mesh.cells.reserve(2 * n * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const int v00 = vid(i, j), v10 = vid(i + 1, j), v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
      mesh.cells.push_back({v00, v10, v11});  // lower triangle, CCW
      mesh.cells.push_back({v00, v11, v01});  // upper triangle, CCW
    }

  // interior edges = vertex pairs shared by exactly two cells
  std::map<std::pair<int, int>, std::vector<int>> edge_cells;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const auto& cell = mesh.cells[c];
    for (int e = 0; e < 3; ++e) {
      int a = cell[e];
      int b = cell[(e + 1) % 3];
      if (a > b) std::swap(a, b);
      edge_cells[{a, b}].push_back(c);
    }
  }
  for (const auto& [edge, cells] : edge_cells) {
    if (cells.size() != 2) continue;
    const Vec2& pa = mesh.vertices[edge.first];
    const Vec2& pb = mesh.vertices[edge.second];
    const double len = norm({pa[0] - pb[0], pa[1] - pb[1]});
    mesh.interior_edges.push_back({cells[0], cells[1], len});
  }
  return mesh;
}

DofMap::DofMap(const Mesh& mesh) {
  n_total = mesh.n_vertices();
  free_index.assign(n_total, -1);
  n_free = 0;
  for (int v = 0; v < n_total; ++v)
    if (!mesh.boundary_node[v]) free_index[v] = n_free++;
}

Vec2 basis_gradient(const Mesh& mesh, int cell, int lv) {
  const auto& c = mesh.cells[cell];
  if (mesh.dim == 1) {
    const double h = mesh.vertices[c[1]][0] - mesh.vertices[c[0]][0];
    return {lv == 0 ? -1.0 / h : 1.0 / h, 0.0};
  }
  // gradient of the barycentric coordinate of local vertex lv on a CCW triangle
  const Vec2& p0 = mesh.vertices[c[0]];
  const Vec2& p1 = mesh.vertices[c[1]];
  const Vec2& p2 = mesh.vertices[c[2]];
  const double two_area = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]);
  const Vec2* a;
  const Vec2* b;
  switch (lv) {
    case 0: a = &p1; b = &p2; break;
    case 1: a = &p2; b = &p0; break;
    default: a = &p0; b = &p1; break;
  }
  return {((*a)[1] - (*b)[1]) / two_area, ((*b)[0] - (*a)[0]) / two_area};
}

std::vector<Vec2> cell_gradients(const Mesh& mesh, const std::vector<double>& nodal) {
  std::vector<Vec2> grads(mesh.n_cells(), Vec2{0.0, 0.0});
  const int nv = mesh.verts_per_cell();
  for (int c = 0; c < mesh.n_cells(); ++c) {
    Vec2 g{0.0, 0.0};
    for (int lv = 0; lv < nv; ++lv) {
      const Vec2 gb = basis_gradient(mesh, c, lv);
      const double y = nodal[mesh.cells[c][lv]];
      g[0] += y * gb[0];
      g[1] += y * gb[1];
    }
    grads[c] = g;
  }
  return grads;
}

std::vector<QuadPoint> quadrature_points(const Mesh& mesh) {
  std::vector<QuadPoint> pts(mesh.n_cells());
  for (int c = 0; c < mesh.n_cells(); ++c) pts[c] = {mesh.barycenter(c), mesh.cell_volume};
  return pts;
}

std::vector<double> to_cell_values(const Mesh& mesh, const std::vector<double>& nodal) {
  std::vector<double> out(mesh.n_cells(), 0.0);
  const int nv = mesh.verts_per_cell();
  for (int c = 0; c < mesh.n_cells(); ++c) {
    double s = 0.0;
    for (int lv = 0; lv < nv; ++lv) s += nodal[mesh.cells[c][lv]];
    out[c] = s / nv;
  }
  return out;
}

}  // namespace anisopt
