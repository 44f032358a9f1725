#include "anisopt/norms.hpp"

#include <cmath>

namespace anisopt {

double h10_norm(const Mesh& mesh, const std::vector<double>& nodal) {
  const auto grads = cell_gradients(mesh, nodal);
  double s = 0.0;
  for (const auto& g : grads) s += mesh.cell_volume * dot(g, g);
  return std::sqrt(s);
}

double w1p_norm(const Mesh& mesh, const std::vector<double>& nodal, double p) {
  const auto grads = cell_gradients(mesh, nodal);
  double s = 0.0;
  for (const auto& g : grads) s += mesh.cell_volume * std::pow(norm(g), p);
  return std::pow(s, 1.0 / p);
}

std::vector<double> mass_apply(const Mesh& mesh, const std::vector<double>& nodal) {
  std::vector<double> out(mesh.n_vertices(), 0.0);
  const double vol = mesh.cell_volume;
  if (mesh.dim == 1) {
    // local mass (h/6) [[2,1],[1,2]]
    for (const auto& c : mesh.cells) {
      out[c[0]] += vol / 6.0 * (2.0 * nodal[c[0]] + nodal[c[1]]);
      out[c[1]] += vol / 6.0 * (nodal[c[0]] + 2.0 * nodal[c[1]]);
    }
  } else {
    // local mass (vol/12) [[2,1,1],[1,2,1],[1,1,2]]
    for (const auto& c : mesh.cells) {
      const double s = nodal[c[0]] + nodal[c[1]] + nodal[c[2]];
      for (int lv = 0; lv < 3; ++lv) out[c[lv]] += vol / 12.0 * (s + nodal[c[lv]]);
    }
  }
  return out;
}

double l2_norm_nodal(const Mesh& mesh, const std::vector<double>& nodal) {
  const auto mf = mass_apply(mesh, nodal);
  double s = 0.0;
  for (int v = 0; v < mesh.n_vertices(); ++v) s += nodal[v] * mf[v];
  return std::sqrt(s > 0.0 ? s : 0.0);
}

double lp_norm_cells(const Mesh& mesh, const std::vector<double>& cells, double p) {
  double s = 0.0;
  for (double v : cells) s += mesh.cell_volume * std::pow(std::abs(v), p);
  return std::pow(s, 1.0 / p);
}

double l2_norm_cells(const Mesh& mesh, const std::vector<double>& cells) {
  double s = 0.0;
  for (double v : cells) s += mesh.cell_volume * v * v;
  return std::sqrt(s);
}

double integrate_cells(const Mesh& mesh, const std::vector<double>& cells) {
  double s = 0.0;
  for (double v : cells) s += mesh.cell_volume * v;
  return s;
}

}  // namespace anisopt
