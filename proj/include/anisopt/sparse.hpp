#pragma once

#include <vector>

namespace anisopt {

/// CSR matrix with a fixed symmetric sparsity pattern. Assembly accumulates
/// cell contributions in cell-index order, so entries are bit-reproducible.
struct CsrMatrix {
  int n = 0;
  std::vector<int> row_ptr;
  std::vector<int> col_idx;
  std::vector<double> values;

  /// Build the pattern from (row, col) pairs; duplicates allowed.
  static CsrMatrix from_pairs(int n, const std::vector<std::pair<int, int>>& pairs);

  void zero() { values.assign(values.size(), 0.0); }
  /// Index into values for entry (i,j); pattern must contain it.
  int slot(int i, int j) const;
  void add(int i, int j, double v) { values[slot(i, j)] += v; }

  std::vector<double> apply(const std::vector<double>& x) const;
  std::vector<double> diagonal() const;
};

struct CgResult {
  int iterations = 0;
  double residual = 0.0;  // final |b - Ax|_2
  bool converged = false;
};

/// Jacobi-preconditioned conjugate gradients; stops when |r|_2 <= rel_tol * |b|_2.
CgResult cg_solve(const CsrMatrix& a, const std::vector<double>& b, std::vector<double>& x,
                  double rel_tol, int max_iter = 0);

}  // namespace anisopt
