// Copyright 2026 The pkern Authors
// SPDX-License-Identifier: Apache-2.0

// Colors a 3D stencil graph at distance one and two, then aggregates it
// with MIS-2 coarsening.

#include <iostream>

#include "pkern/pkern.hpp"

int main() {
  const auto A = pkern::io::gen_stencil_matrix(pkern::StencilSpec(pkern::StencilKind::Pt27, {10, 10, 10}));
  const auto& g = A.graph();

  for (auto algo : {pkern::ColoringAlgorithm::VB, pkern::ColoringAlgorithm::EB}) {
    const auto c = pkern::graph::color_d1(g, algo);
    std::cout << pkern::to_string(algo) << ": " << c.num_colors << " colors, valid "
              << bool(pkern::graph::verify_coloring(g, 1, c.colors)) << "\n";
  }
  pkern::ColoringHandle h;
  h.algorithm = pkern::ColoringAlgorithm::NB;
  const auto c2 = pkern::graph::color_d2(h, g);
  std::cout << "NB distance-2: " << c2.num_colors << " colors in " << h.rounds << " rounds\n";

  const auto agg = pkern::graph::mis2_coarsen(g, 42);
  std::cout << g.num_rows() << " vertices -> " << agg.num_aggregates << " aggregates\n";
  return 0;
}
