#include "anisopt/control.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "anisopt/io.hpp"

namespace anisopt {

ControlBounds::ControlBounds(double xi1_, double xi2_, double alpha_, double gamma_)
    : xi1(xi1_), xi2(xi2_), alpha(alpha_), gamma(gamma_) {
  if (!(0.0 < alpha && alpha <= xi1 && xi1 <= xi2))
    throw std::invalid_argument("ControlBounds: need 0 < alpha <= xi1 <= xi2");
  if (!(gamma > 0.0)) throw std::invalid_argument("ControlBounds: gamma must be positive");
}

ControlField::ControlField(int dim_, std::vector<SymMat> cells) : dim(dim_), a(std::move(cells)) {
  s.resize(a.size());
  for (std::size_t c = 0; c < a.size(); ++c) s[c] = a[c].sqrt_spd(dim);
}

ControlField constant_control(const Mesh& mesh, const SymMat& m) {
  return ControlField(mesh.dim, std::vector<SymMat>(mesh.n_cells(), m));
}

ControlField identity_control(const Mesh& mesh) {
  return constant_control(mesh, SymMat::identity(mesh.dim));
}

TvReport discrete_tv(const ControlField& field, const Mesh& mesh, const ControlBounds& bounds) {
  double tv = 0.0;
  for (const auto& e : mesh.interior_edges) {
    const SymMat jump = field.s[e.cell_a] - field.s[e.cell_b];
    tv += e.facet_measure * jump.frobenius(field.dim);
  }
  return {tv, tv <= bounds.gamma + 1e-10};
}

ControlField project_to_admissible(const ControlField& field, const ControlBounds& bounds,
                                   std::vector<std::string>* warnings) {
  const double lo = bounds.xi1 * bounds.xi1;
  const double hi = bounds.xi2 * bounds.xi2;
  std::vector<SymMat> clipped(field.a.size());
  for (std::size_t c = 0; c < field.a.size(); ++c)
    clipped[c] = field.a[c].clip_spectrum(lo, hi, field.dim);
  ControlField out(field.dim, std::move(clipped));
  if (warnings) {
    for (std::size_t c = 0; c < field.a.size(); ++c) {
      const SymMat diff = field.s[c].squared(field.dim) - field.a[c];
      if (diff.max_abs_entry(field.dim) > 1e-10) {
        warnings->push_back("control cell " + std::to_string(c) + ": square-root cache repaired");
        break;
      }
    }
  }
  return out;
}

ControlScheme parse_scheme(const std::string& name) {
  if (name == "constant-diagonal") return ControlScheme::ConstantDiagonal;
  if (name == "constant-rotated") return ControlScheme::ConstantRotated;
  if (name == "two-block") return ControlScheme::TwoBlock;
  throw std::invalid_argument("unknown control scheme: " + name);
}

std::string scheme_name(ControlScheme scheme) {
  switch (scheme) {
    case ControlScheme::ConstantDiagonal: return "constant-diagonal";
    case ControlScheme::ConstantRotated: return "constant-rotated";
    default: return "two-block";
  }
}

int scheme_arity(ControlScheme scheme) {
  switch (scheme) {
    case ControlScheme::ConstantDiagonal: return 2;
    case ControlScheme::ConstantRotated: return 3;
    default: return 4;
  }
}

ControlField parameterize(const std::vector<double>& theta, ControlScheme scheme, const Mesh& mesh,
                          const ControlBounds& bounds) {
  if (static_cast<int>(theta.size()) != scheme_arity(scheme))
    throw std::invalid_argument("parameterize: scheme " + scheme_name(scheme) + " expects " +
                                std::to_string(scheme_arity(scheme)) + " parameters, got " +
                                std::to_string(theta.size()));
  const double lo = bounds.xi1 * bounds.xi1;
  const double hi = bounds.xi2 * bounds.xi2;
  auto clip = [lo, hi](double v) { return v < lo ? lo : (v > hi ? hi : v); };

  switch (scheme) {
    case ControlScheme::ConstantDiagonal:
      return constant_control(mesh, SymMat::diag(clip(theta[0]), clip(theta[1])));
    case ControlScheme::ConstantRotated: {
      if (mesh.dim == 1) return constant_control(mesh, SymMat::diag(clip(theta[0]), clip(theta[1])));
      return constant_control(mesh, SymMat::rotated(clip(theta[0]), clip(theta[1]), theta[2]));
    }
    default: {
      const SymMat left = SymMat::diag(clip(theta[0]), clip(theta[1]));
      const SymMat right = SymMat::diag(clip(theta[2]), clip(theta[3]));
      std::vector<SymMat> cells(mesh.n_cells());
      for (int c = 0; c < mesh.n_cells(); ++c)
        cells[c] = mesh.barycenter(c)[0] < 0.5 ? left : right;
      return ControlField(mesh.dim, std::move(cells));
    }
  }
}

void write_control_csv(std::ostream& os, const ControlField& field) {
  if (field.dim == 1) {
    os << "cell_id,a11\n";
    for (int c = 0; c < field.n_cells(); ++c) os << c << ',' << fmt17(field.a[c].a11) << '\n';
  } else {
    os << "cell_id,a11,a12,a22\n";
    for (int c = 0; c < field.n_cells(); ++c)
      os << c << ',' << fmt17(field.a[c].a11) << ',' << fmt17(field.a[c].a12) << ','
         << fmt17(field.a[c].a22) << '\n';
  }
}

}  // namespace anisopt
