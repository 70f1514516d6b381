// Copyright 2026 The pkern Authors
// SPDX-License-Identifier: Apache-2.0

// Builds a smoothed prolongator P = (I - omega D^-1 A) P0 with the fused
// kernel, then solves with the lower triangle of A by level scheduling.

#include <iostream>

#include "pkern/pkern.hpp"

int main() {
  const pkern::StencilSpec spec(pkern::StencilKind::Pt5, {16, 16});
  const auto A = pkern::io::gen_stencil_matrix(spec);
  const pkern::ordinal_t n = A.num_rows();

  // Tentative prolongator: aggregates of four consecutive points.
  std::vector<pkern::ordinal_t> rows, cols;
  for (pkern::ordinal_t i = 0; i < n; ++i) {
    rows.push_back(i);
    cols.push_back(i / 4);
  }
  const auto P0 = pkern::from_triplets(n, (n + 3) / 4, rows, cols, std::vector<double>(n, 1.0));

  std::vector<double> dinv(static_cast<std::size_t>(n));
  for (pkern::ordinal_t i = 0; i < n; ++i) {
    const auto r = A.row(i);
    for (std::size_t k = 0; k < r.size(); ++k)
      if (r.cols[k] == i) dinv[i] = 1.0 / r.vals[k];
  }

  pkern::SpgemmHandle h;
  pkern::spgemm_jacobi_symbolic(h, A, P0);
  const auto P = pkern::spgemm_jacobi_numeric(h, 2.0 / 3.0, std::span<const double>(dinv), A, P0);
  std::cout << "P is " << P.num_rows() << "x" << P.num_cols() << " with " << P.nnz() << " entries, "
            << h.multiply_count << " multiplies\n";

  // Lower triangle including the diagonal.
  std::vector<pkern::ordinal_t> lr, lc;
  std::vector<double> lv;
  for (pkern::ordinal_t i = 0; i < n; ++i) {
    const auto r = A.row(i);
    for (std::size_t k = 0; k < r.size(); ++k) {
      if (r.cols[k] <= i) {
        lr.push_back(i);
        lc.push_back(r.cols[k]);
        lv.push_back(r.vals[k]);
      }
    }
  }
  const auto L = pkern::from_triplets(n, n, lr, lc, lv);

  pkern::SptrsvHandle th;
  const auto& sched = pkern::sptrsv_symbolic(th, L);
  std::cout << "lower solve: " << sched.num_levels << " levels in " << sched.groups.size() << " groups\n";
  const std::vector<double> b(static_cast<std::size_t>(n), 1.0);
  const auto x = pkern::sptrsv_solve(th, L, std::span<const double>(b));
  std::cout << "x[0] = " << x[0] << ", x[n-1] = " << x[n - 1] << "\n";
  return 0;
}
