// Copyright 2026 The pkern Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Brute-force validity checks for colorings. Serial on purpose: they are
// the reference the parallel algorithms are measured against.

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pkern/crs.hpp"
#include "pkern/error.hpp"
#include "pkern/handle.hpp"

namespace pkern::graph {

struct ColoringCheck {
  bool valid = true;
  // First violating pair, in vertex order. For an uncolored vertex both
  // entries name it.
  ordinal_t first = -1;
  ordinal_t second = -1;

  explicit operator bool() const noexcept { return valid; }
};

// Checks that vertices joined by a path of at most `distance` (1 or 2)
// edges have different colors and that every vertex is colored. Edges are
// read in both directions, so a non-symmetric adjacency is checked as
// A + A^T.
inline ColoringCheck verify_coloring(const StaticCrsGraph& g, int distance, std::span<const color_t> colors) {
  if (distance != 1 && distance != 2) throw Error("verify_coloring: distance must be 1 or 2");
  const ordinal_t n = g.num_rows();
  if (g.num_cols() != n || static_cast<ordinal_t>(colors.size()) != n) {
    throw DimensionError("verify_coloring: coloring length does not match the graph");
  }
  // Undirected adjacency lists.
  std::vector<std::vector<ordinal_t>> adj(static_cast<std::size_t>(n));
  for (ordinal_t u = 0; u < n; ++u) {
    for (ordinal_t v : g.row(u)) {
      if (u == v) continue;
      adj[u].push_back(v);
      adj[v].push_back(u);
    }
  }
  for (auto& a : adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
  for (ordinal_t v = 0; v < n; ++v) {
    if (colors[v] <= 0) return {false, v, v};
  }
  for (ordinal_t v = 0; v < n; ++v) {
    for (ordinal_t u : adj[v]) {
      if (colors[u] == colors[v]) return {false, std::min(u, v), std::max(u, v)};
      if (distance == 2) {
        for (ordinal_t w : adj[u]) {
          if (w != v && colors[w] == colors[v]) return {false, std::min(v, w), std::max(v, w)};
        }
      }
    }
  }
  return {};
}

// Rows sharing a column must differ.
inline ColoringCheck verify_bgpc(const StaticCrsGraph& m, std::span<const color_t> colors) {
  const ordinal_t nr = m.num_rows();
  if (static_cast<ordinal_t>(colors.size()) != nr) {
    throw DimensionError("verify_bgpc: coloring length does not match the row count");
  }
  for (ordinal_t v = 0; v < nr; ++v) {
    if (colors[v] <= 0) return {false, v, v};
  }
  std::vector<std::vector<ordinal_t>> col_rows(static_cast<std::size_t>(m.num_cols()));
  for (ordinal_t r = 0; r < nr; ++r) {
    for (ordinal_t c : m.row(r)) col_rows[c].push_back(r);
  }
  for (ordinal_t r = 0; r < nr; ++r) {
    for (ordinal_t c : m.row(r)) {
      for (ordinal_t s : col_rows[c]) {
        if (s != r && colors[s] == colors[r]) return {false, std::min(r, s), std::max(r, s)};
      }
    }
  }
  return {};
}

}  // namespace pkern::graph
