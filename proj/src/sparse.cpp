#include "anisopt/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace anisopt {

CsrMatrix CsrMatrix::from_pairs(int n, const std::vector<std::pair<int, int>>& pairs) {
  std::vector<std::vector<int>> cols(n);
  for (const auto& [i, j] : pairs) cols[i].push_back(j);
  CsrMatrix m;
  m.n = n;
  m.row_ptr.assign(n + 1, 0);
  for (int i = 0; i < n; ++i) {
    auto& c = cols[i];
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    m.row_ptr[i + 1] = m.row_ptr[i] + static_cast<int>(c.size());
  }
  m.col_idx.reserve(m.row_ptr[n]);
  for (int i = 0; i < n; ++i) m.col_idx.insert(m.col_idx.end(), cols[i].begin(), cols[i].end());
  m.values.assign(m.col_idx.size(), 0.0);
  return m;
}

int CsrMatrix::slot(int i, int j) const {
  const auto begin = col_idx.begin() + row_ptr[i];
  const auto end = col_idx.begin() + row_ptr[i + 1];
  const auto it = std::lower_bound(begin, end, j);
  if (it == end || *it != j) throw std::logic_error("CsrMatrix: entry outside pattern");
  return static_cast<int>(it - col_idx.begin());
}

std::vector<double> CsrMatrix::apply(const std::vector<double>& x) const {
  std::vector<double> y(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += values[k] * x[col_idx[k]];
    y[i] = s;
  }
  return y;
}

std::vector<double> CsrMatrix::diagonal() const {
  std::vector<double> d(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
      if (col_idx[k] == i) d[i] = values[k];
  return d;
}

namespace {
double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}
}  // namespace

CgResult cg_solve(const CsrMatrix& a, const std::vector<double>& b, std::vector<double>& x,
                  double rel_tol, int max_iter) {
  const int n = a.n;
  if (max_iter <= 0) max_iter = 10 * n + 200;
  x.assign(n, 0.0);

  const double bnorm = std::sqrt(dot(b, b));
  if (bnorm == 0.0) return {0, 0.0, true};
  const double tol = rel_tol * bnorm;

  std::vector<double> diag = a.diagonal();
  std::vector<double> inv_diag(n);
  for (int i = 0; i < n; ++i) inv_diag[i] = diag[i] != 0.0 ? 1.0 / diag[i] : 1.0;

  std::vector<double> r = b;  // x = 0
  std::vector<double> z(n), p(n), ap(n);
  for (int i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
  p = z;
  double rz = dot(r, z);

  CgResult res;
  for (int it = 0; it < max_iter; ++it) {
    ap = a.apply(p);
    const double pap = dot(p, ap);
    if (pap <= 0.0) break;  // matrix not SPD on this subspace
    const double alpha = rz / pap;
    for (int i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    }
    res.iterations = it + 1;
    res.residual = std::sqrt(dot(r, r));
    if (res.residual <= tol) {
      res.converged = true;
      return res;
    }
    for (int i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  res.residual = std::sqrt(dot(r, r));
  res.converged = res.residual <= tol;
  return res;
}

}  // namespace anisopt
