#pragma once

#include <array>
#include <cmath>

namespace anisopt {

using Vec2 = std::array<double, 2>;

inline double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }
inline double norm(const Vec2& a) { return std::sqrt(dot(a, a)); }

/// Symmetric dim x dim matrix with dim in {1,2}; 1D fields use a11 only.
struct SymMat {
  double a11 = 0.0;
  double a12 = 0.0;
  double a22 = 0.0;

  static SymMat identity(int dim) { return dim == 1 ? SymMat{1.0, 0.0, 0.0} : SymMat{1.0, 0.0, 1.0}; }
  static SymMat diag(double d1, double d2) { return {d1, 0.0, d2}; }

  /// R(angle) diag(d1,d2) R(angle)^T
  static SymMat rotated(double d1, double d2, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return {c * c * d1 + s * s * d2, c * s * (d1 - d2), s * s * d1 + c * c * d2};
  }

  Vec2 apply(const Vec2& v, int dim) const {
    if (dim == 1) return {a11 * v[0], 0.0};
    return {a11 * v[0] + a12 * v[1], a12 * v[0] + a22 * v[1]};
  }

  double quad(const Vec2& v, int dim) const { return dot(apply(v, dim), v); }

  /// Eigenvalues in ascending order; second entry is meaningless for dim 1.
  std::array<double, 2> eigenvalues(int dim) const {
    if (dim == 1) return {a11, a11};
    const double m = 0.5 * (a11 + a22);
    const double d = 0.5 * (a11 - a22);
    const double r = std::sqrt(d * d + a12 * a12);
    return {m - r, m + r};
  }

  /// Apply a scalar function to the spectrum (closed-form 2x2 diagonalization).
  template <class F>
  SymMat spectral_map(F f, int dim) const {
    if (dim == 1) return {f(a11), 0.0, 0.0};
    const double theta = 0.5 * std::atan2(2.0 * a12, a11 - a22);
    const double c = std::cos(theta), s = std::sin(theta);
    const double l1 = c * c * a11 + 2.0 * c * s * a12 + s * s * a22;
    const double l2 = s * s * a11 - 2.0 * c * s * a12 + c * c * a22;
    const double f1 = f(l1), f2 = f(l2);
    return {c * c * f1 + s * s * f2, c * s * (f1 - f2), s * s * f1 + c * c * f2};
  }

  SymMat sqrt_spd(int dim) const {
    return spectral_map([](double l) { return std::sqrt(l > 0.0 ? l : 0.0); }, dim);
  }

  SymMat clip_spectrum(double lo, double hi, int dim) const {
    return spectral_map([lo, hi](double l) { return l < lo ? lo : (l > hi ? hi : l); }, dim);
  }

  double frobenius(int dim) const {
    if (dim == 1) return std::abs(a11);
    return std::sqrt(a11 * a11 + 2.0 * a12 * a12 + a22 * a22);
  }

  double spectral_norm(int dim) const {
    const auto ev = eigenvalues(dim);
    return dim == 1 ? std::abs(a11) : std::max(std::abs(ev[0]), std::abs(ev[1]));
  }

  SymMat symmetrized() const { return *this; }  // storage is symmetric by construction

  friend SymMat operator+(const SymMat& a, const SymMat& b) {
    return {a.a11 + b.a11, a.a12 + b.a12, a.a22 + b.a22};
  }
  friend SymMat operator-(const SymMat& a, const SymMat& b) {
    return {a.a11 - b.a11, a.a12 - b.a12, a.a22 - b.a22};
  }
  friend SymMat operator*(double s, const SymMat& a) { return {s * a.a11, s * a.a12, s * a.a22}; }

  /// A * A
  SymMat squared(int dim) const {
    if (dim == 1) return {a11 * a11, 0.0, 0.0};
    return {a11 * a11 + a12 * a12, a12 * (a11 + a22), a12 * a12 + a22 * a22};
  }

  double max_abs_entry(int dim) const {
    if (dim == 1) return std::abs(a11);
    return std::max({std::abs(a11), std::abs(a12), std::abs(a22)});
  }
};

}  // namespace anisopt
