// Copyright 2026 The pkern Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Deterministic distance-2 maximal independent set and the aggregation
// built on it.
//
// Each round every undecided vertex draws a priority from a hash of
// (seed, round, vertex). Its tuple is (priority, ~id) so ties go to the
// smaller id; decided vertices use the extreme tuples (IN = max, OUT = 0).
// Two max-propagation sweeps over closed neighborhoods give every vertex
// the largest tuple within distance 2. An undecided vertex whose own tuple
// is that maximum joins the set; one that sees IN is out. Everything is a
// pure function of the graph and seed, so the result does not depend on the
// thread count.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include "pkern/crs.hpp"
#include "pkern/graph/graph_utils.hpp"
#include "pkern/parallel.hpp"

namespace pkern::graph {

struct Mis2Result {
  std::vector<std::uint8_t> in_set;
  std::vector<ordinal_t> roots;  // ascending
  int rounds = 0;
};

struct Mis2Aggregates {
  // Root vertex id of every vertex's aggregate; roots map to themselves.
  std::vector<ordinal_t> root_of;
  // Aggregate index (position of the root in `roots`) of every vertex.
  std::vector<ordinal_t> aggregate;
  std::vector<ordinal_t> roots;
  ordinal_t num_aggregates = 0;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint32_t mis2_priority(std::uint64_t seed, int round, ordinal_t v) {
  const std::uint64_t h =
      splitmix64(splitmix64(seed ^ (static_cast<std::uint64_t>(round) << 32)) ^ static_cast<std::uint32_t>(v));
  // Below 2^32 - 1 so an undecided tuple never equals IN.
  return static_cast<std::uint32_t>(h % 0xFFFFFFFFULL);
}

}  // namespace detail

inline Mis2Result mis2(const StaticCrsGraph& g_in, std::uint64_t seed = 0) {
  const StaticCrsGraph g = symmetrize(g_in);
  const ordinal_t n = g.num_rows();
  constexpr std::uint64_t kIn = std::numeric_limits<std::uint64_t>::max();
  constexpr std::uint64_t kOut = 0;
  enum : std::uint8_t { Undecided = 0, In = 1, Out = 2 };
  std::vector<std::uint8_t> state(static_cast<std::size_t>(n), Undecided);
  std::vector<std::uint64_t> tuple(static_cast<std::size_t>(n)), m1(static_cast<std::size_t>(n)),
      m2(static_cast<std::size_t>(n));
  std::vector<ordinal_t> work(static_cast<std::size_t>(n));
  for (ordinal_t v = 0; v < n; ++v) work[v] = v;
  Mis2Result out;

  auto closed_max = [&](const std::vector<std::uint64_t>& src, ordinal_t v) {
    std::uint64_t m = src[v];
    for (ordinal_t u : g.row(v)) m = std::max(m, src[u]);
    return m;
  };

  int round = 0;
  while (!work.empty()) {
    parallel_for(n, [&](std::int64_t v) {
      switch (state[v]) {
        case In: tuple[v] = kIn; break;
        case Out: tuple[v] = kOut; break;
        default:
          tuple[v] = (static_cast<std::uint64_t>(detail::mis2_priority(seed, round, static_cast<ordinal_t>(v))) << 32) |
                     (0xFFFFFFFFULL - static_cast<std::uint32_t>(v));
      }
    });
    parallel_for(n, [&](std::int64_t v) { m1[v] = closed_max(tuple, static_cast<ordinal_t>(v)); });
    parallel_for(static_cast<std::int64_t>(work.size()),
                 [&](std::int64_t t) { m2[work[t]] = closed_max(m1, work[t]); });
    parallel_for(static_cast<std::int64_t>(work.size()), [&](std::int64_t t) {
      const ordinal_t v = work[t];
      if (m2[v] == tuple[v]) {
        state[v] = In;
      } else if (m2[v] == kIn) {
        state[v] = Out;
      }
    });
    auto keep = compact_indices<std::int64_t>(static_cast<std::int64_t>(work.size()),
                                              [&](std::int64_t t) { return state[work[t]] == Undecided; });
    std::vector<ordinal_t> nw(keep.size());
    for (std::size_t k = 0; k < keep.size(); ++k) nw[k] = work[keep[k]];
    work = std::move(nw);
    ++round;
  }
  out.rounds = round;
  out.in_set.resize(static_cast<std::size_t>(n));
  for (ordinal_t v = 0; v < n; ++v) {
    out.in_set[v] = state[v] == In ? 1 : 0;
    if (state[v] == In) out.roots.push_back(v);
  }
  return out;
}

// Aggregates rooted at the MIS-2 vertices. Neighbors of a root join the
// smallest adjacent root; every remaining vertex joins the smallest root
// reachable through a neighbor labeled in the first step.
inline Mis2Aggregates mis2_coarsen(const StaticCrsGraph& g_in, std::uint64_t seed = 0) {
  const StaticCrsGraph g = symmetrize(g_in);
  const ordinal_t n = g.num_rows();
  const Mis2Result mis = mis2(g, seed);
  Mis2Aggregates agg;
  agg.roots = mis.roots;
  agg.num_aggregates = static_cast<ordinal_t>(mis.roots.size());
  agg.root_of.assign(static_cast<std::size_t>(n), -1);
  for (ordinal_t r : mis.roots) agg.root_of[r] = r;

  std::vector<ordinal_t> phase1(agg.root_of);
  parallel_for(n, [&](std::int64_t v) {
    if (mis.in_set[v]) return;
    ordinal_t best = -1;
    for (ordinal_t u : g.row(static_cast<ordinal_t>(v))) {
      if (mis.in_set[u] && (best < 0 || u < best)) best = u;
    }
    phase1[v] = best;
  });
  parallel_for(n, [&](std::int64_t v) {
    if (phase1[v] >= 0) {
      agg.root_of[v] = phase1[v];
      return;
    }
    ordinal_t best = -1;
    for (ordinal_t u : g.row(static_cast<ordinal_t>(v))) {
      const ordinal_t r = phase1[u];
      if (r >= 0 && (best < 0 || r < best)) best = r;
    }
    agg.root_of[v] = best;
  });

  std::vector<ordinal_t> index_of(static_cast<std::size_t>(n), -1);
  for (std::size_t k = 0; k < agg.roots.size(); ++k) index_of[agg.roots[k]] = static_cast<ordinal_t>(k);
  agg.aggregate.resize(static_cast<std::size_t>(n));
  for (ordinal_t v = 0; v < n; ++v) agg.aggregate[v] = agg.root_of[v] >= 0 ? index_of[agg.root_of[v]] : -1;
  return agg;
}

}  // namespace pkern::graph
