// Copyright 2026 The pkern Authors
// SPDX-License-Identifier: Apache-2.0

// Reads a small Matrix Market matrix, then runs SpMV, a reusable SpGEMM
// and a reusable SpAdd on it.

#include <iostream>
#include <sstream>

#include "pkern/pkern.hpp"

int main() {
  std::istringstream text(
      "%%MatrixMarket matrix coordinate real general\n"
      "3 3 5\n"
      "1 1 2.0\n"
      "1 3 -1.0\n"
      "2 2 4.0\n"
      "3 1 1.0\n"
      "3 3 3.0\n");
  const auto A = pkern::io::read_matrix_market(text);

  std::vector<double> x{1.0, 2.0, 3.0}, y(3, 0.0);
  pkern::spmv(pkern::SpmvMode::Plain, 1.0, A, std::span<const double>(x), 0.0, std::span<double>(y));
  std::cout << "A x = [" << y[0] << ", " << y[1] << ", " << y[2] << "]\n";

  // The symbolic phase depends only on the patterns; numeric can be rerun
  // after the values change.
  pkern::SpgemmHandle gh;
  pkern::spgemm_symbolic(gh, A, A);
  auto C = pkern::spgemm_numeric(gh, A, A);
  std::cout << "nnz(A*A) = " << C.nnz() << "\n";
  std::vector<double> doubled(A.values().begin(), A.values().end());
  for (double& v : doubled) v *= 2.0;
  const auto A2 = A.with_values(std::move(doubled));
  C = pkern::spgemm_numeric(gh, A2, A2);
  std::cout << "(2A)*(2A) row 0:";
  const auto r = C.row(0);
  for (std::size_t k = 0; k < r.size(); ++k) std::cout << " (" << r.cols[k] << ", " << r.vals[k] << ")";
  std::cout << "\n";

  pkern::SpaddHandle ah;
  pkern::spadd_symbolic(ah, A, pkern::transpose(A), true);
  const auto S = pkern::spadd_numeric(ah, 0.5, A, 0.5, pkern::transpose(A));
  std::cout << "symmetric part has " << S.nnz() << " entries\n";

  pkern::io::write_matrix_market(S, std::cout);
  return 0;
}
