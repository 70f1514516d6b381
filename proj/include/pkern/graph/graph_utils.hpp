// Copyright 2026 The pkern Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "pkern/crs.hpp"
#include "pkern/error.hpp"
#include "pkern/parallel.hpp"

namespace pkern::graph {

inline void require_square(const StaticCrsGraph& g, const char* kernel) {
  if (g.num_rows() != g.num_cols()) {
    throw DimensionError(std::string(kernel) + ": adjacency must be square, got " + std::to_string(g.num_rows()) +
                         "x" + std::to_string(g.num_cols()));
  }
}

// Adjacency of A + A^T with self loops and repeated edges removed; rows are
// sorted. `was_symmetric` reports whether that changed anything besides
// loops, repeats and ordering.
inline StaticCrsGraph symmetrize(const StaticCrsGraph& g, bool* was_symmetric = nullptr) {
  require_square(g, "symmetrize");
  const ordinal_t n = g.num_rows();
  const StaticCrsGraph t = transpose(g);
  std::vector<offset_t> offs(static_cast<std::size_t>(n) + 1, 0);
  std::vector<std::uint8_t> asym(static_cast<std::size_t>(n), 0);
  std::vector<std::vector<ordinal_t>> scratch(static_cast<std::size_t>(max_threads()));

  auto merge_row = [&](ordinal_t i, std::vector<ordinal_t>& out) {
    out.clear();
    auto r = g.row(i);
    out.assign(r.begin(), r.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    out.erase(std::remove(out.begin(), out.end(), i), out.end());
    const std::size_t own = out.size();
    for (ordinal_t c : t.row(i)) {
      if (c != i) out.push_back(c);
    }
    std::inplace_merge(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(own), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out.size() != own;
  };

  parallel_region([&](int tid, int nt) {
    auto [b, e] = static_partition(n, nt, tid);
    for (auto i = b; i < e; ++i) {
      asym[i] = merge_row(static_cast<ordinal_t>(i), scratch[tid]) ? 1 : 0;
      offs[i] = static_cast<offset_t>(scratch[tid].size());
    }
  });
  const offset_t nnz = exclusive_scan_inplace(std::span<offset_t>(offs).first(static_cast<std::size_t>(n)));
  offs[n] = nnz;
  std::vector<ordinal_t> cols(static_cast<std::size_t>(nnz));
  parallel_region([&](int tid, int nt) {
    auto [b, e] = static_partition(n, nt, tid);
    for (auto i = b; i < e; ++i) {
      merge_row(static_cast<ordinal_t>(i), scratch[tid]);
      std::copy(scratch[tid].begin(), scratch[tid].end(), cols.begin() + offs[i]);
    }
  });
  if (was_symmetric) *was_symmetric = std::none_of(asym.begin(), asym.end(), [](auto a) { return a != 0; });
  return StaticCrsGraph::build_unchecked(n, n, std::move(offs), std::move(cols));
}

inline ordinal_t max_degree(const StaticCrsGraph& g) {
  ordinal_t d = 0;
  for (ordinal_t i = 0; i < g.num_rows(); ++i) d = std::max(d, g.degree(i));
  return d;
}

// Same adjacency with every vertex's own index added (closed neighborhoods).
inline StaticCrsGraph with_self_loops(const StaticCrsGraph& g) {
  const ordinal_t n = g.num_rows();
  std::vector<offset_t> offs(static_cast<std::size_t>(n) + 1, 0);
  for (ordinal_t i = 0; i < n; ++i) offs[i + 1] = offs[i] + g.degree(i) + 1;
  std::vector<ordinal_t> cols(static_cast<std::size_t>(offs[n]));
  parallel_for(n, [&](std::int64_t i) {
    offset_t p = offs[i];
    bool placed = false;
    for (ordinal_t c : g.row(static_cast<ordinal_t>(i))) {
      if (!placed && c > i) {
        cols[p++] = static_cast<ordinal_t>(i);
        placed = true;
      }
      cols[p++] = c;
    }
    if (!placed) cols[p++] = static_cast<ordinal_t>(i);
  });
  return StaticCrsGraph::build_unchecked(n, n, std::move(offs), std::move(cols));
}

}  // namespace pkern::graph
