// Copyright 2026 The pkern Authors
// SPDX-License-Identifier: Apache-2.0

// Factors and solves many small systems at once in the interleaved layout.

#include <cmath>
#include <iostream>

#include "pkern/pkern.hpp"

int main() {
  using pkern::batched::BatchLayout;
  using pkern::batched::DenseBatch;
  const std::int64_t count = 1000;
  const pkern::ordinal_t n = 5;

  DenseBatch<double> A(count, n, n), b(count, n, 1);
  for (std::int64_t s = 0; s < count; ++s) {
    for (pkern::ordinal_t i = 0; i < n; ++i) {
      for (pkern::ordinal_t j = 0; j < n; ++j) A(s, i, j) = (i == j) ? n + 1.0 : std::sin(double(s + i * n + j));
      b(s, i, 0) = 1.0;
    }
  }
  const DenseBatch<double> A0 = A, b0 = b;

  // Matrices are grouped in packs of eight for vector-width execution.
  auto Ai = A.to_layout(BatchLayout::Interleaved);
  auto bi = b.to_layout(BatchLayout::Interleaved);
  pkern::batched::batched_lu(Ai);  // no pivoting; unit L below the diagonal, U on and above
  pkern::batched::batched_trsv({pkern::Uplo::Lower, pkern::Diag::Unit}, Ai, bi);
  pkern::batched::batched_trsv({pkern::Uplo::Upper, pkern::Diag::NonUnit}, Ai, bi);
  const auto x = bi.to_layout(BatchLayout::Contiguous);

  double worst = 0.0;
  for (std::int64_t s = 0; s < count; ++s) {
    for (pkern::ordinal_t i = 0; i < n; ++i) {
      double r = -b0(s, i, 0);
      for (pkern::ordinal_t j = 0; j < n; ++j) r += A0(s, i, j) * x(s, j, 0);
      worst = std::max(worst, std::abs(r));
    }
  }
  std::cout << count << " systems of size " << n << ", max residual " << worst << "\n";
  return worst < 1e-10 ? 0 : 1;
}
