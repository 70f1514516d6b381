// Copyright 2026 The pkern Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Speculative greedy coloring.
//
// Every algorithm repeats three steps on a worklist of uncolored vertices:
// assign colors in parallel without synchronization, detect conflicts
// between vertices colored in the same round, uncolor one side of each
// conflict. Colors from earlier rounds are final, so a vertex only ever
// clashes with vertices colored alongside it.
//
// Colors are 1-based; 0 means uncolored. Forbidden colors are tracked in a
// 64-color window; vertices whose window is full move on to the next one.

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "pkern/crs.hpp"
#include "pkern/graph/graph_utils.hpp"
#include "pkern/handle.hpp"
#include "pkern/parallel.hpp"

namespace pkern::graph {

struct Coloring {
  std::vector<color_t> colors;
  color_t num_colors = 0;
};

namespace detail {

inline color_t load_color(const std::vector<color_t>& colors, ordinal_t v) {
  return std::atomic_ref<const color_t>(colors[v]).load(std::memory_order_relaxed);
}
inline void store_color(std::vector<color_t>& colors, ordinal_t v, color_t c) {
  std::atomic_ref<color_t>(colors[v]).store(c, std::memory_order_relaxed);
}

// Sets the bit of color c in a window starting after `base`.
inline void window_mark(std::uint64_t& mask, color_t base, color_t c) {
  if (c > base && c <= base + 64) mask |= std::uint64_t{1} << (c - base - 1);
}

inline Coloring finish(std::vector<color_t> colors) {
  Coloring out;
  out.num_colors = colors.empty() ? 0 : *std::max_element(colors.begin(), colors.end());
  out.colors = std::move(colors);
  return out;
}

inline void reset_stats(ColoringHandle& h) {
  h.rounds = 0;
  h.neighbor_visits = 0;
  h.visits_per_round.clear();
}

inline void add_round(ColoringHandle& h, std::uint64_t visits) {
  ++h.rounds;
  h.neighbor_visits += visits;
  h.visits_per_round.push_back(visits);
}

inline std::uint64_t sum(const std::vector<std::uint64_t>& v) {
  std::uint64_t s = 0;
  for (auto x : v) s += x;
  return s;
}

// Flags with relaxed atomic stores so concurrent writers of the same flag
// are well defined.
inline void set_flag(std::vector<std::uint8_t>& flags, std::int64_t i) {
  std::atomic_ref<std::uint8_t>(flags[i]).store(1, std::memory_order_relaxed);
}

// Distance-1, vertex based.
inline std::vector<color_t> color_vb(ColoringHandle& h, const StaticCrsGraph& g) {
  const ordinal_t n = g.num_rows();
  std::vector<color_t> colors(static_cast<std::size_t>(n), 0);
  const int nt = max_threads();
  const ordinal_t dmax = max_degree(g);
  std::vector<std::vector<std::uint8_t>> overflow(static_cast<std::size_t>(nt));
  std::vector<std::uint64_t> visits(static_cast<std::size_t>(nt), 0);
  std::vector<ordinal_t> work(static_cast<std::size_t>(n));
  for (ordinal_t v = 0; v < n; ++v) work[v] = v;
  std::vector<std::uint8_t> conflict(static_cast<std::size_t>(n), 0);

  while (!work.empty()) {
    std::fill(visits.begin(), visits.end(), 0);
    parallel_for_dynamic_tid(static_cast<std::int64_t>(work.size()), 64, [&](int tid, std::int64_t t) {
      const ordinal_t v = work[t];
      auto nbrs = g.row(v);
      visits[tid] += nbrs.size();
      std::uint64_t mask = 0;
      for (ordinal_t u : nbrs) window_mark(mask, 0, load_color(colors, u));
      color_t c;
      if (~mask != 0) {
        c = std::countr_zero(~mask) + 1;
      } else {
        // Window full: a color <= degree + 1 is always free.
        auto& forb = overflow[tid];
        if (forb.empty()) forb.assign(static_cast<std::size_t>(dmax) + 2, 0);
        for (ordinal_t u : nbrs) {
          const color_t cu = load_color(colors, u);
          if (cu > 64 && cu <= static_cast<color_t>(nbrs.size()) + 1) forb[cu] = 1;
        }
        c = 65;
        while (forb[c]) ++c;
        for (ordinal_t u : nbrs) {
          const color_t cu = load_color(colors, u);
          if (cu > 64 && cu <= static_cast<color_t>(nbrs.size()) + 1) forb[cu] = 0;
        }
      }
      store_color(colors, v, c);
    });
    parallel_for(static_cast<std::int64_t>(work.size()), [&](std::int64_t t) {
      const ordinal_t v = work[t];
      const color_t c = load_color(colors, v);
      for (ordinal_t u : g.row(v)) {
        if (u < v && load_color(colors, u) == c) {
          conflict[v] = 1;
          break;
        }
      }
    });
    for (ordinal_t v : work) {
      if (conflict[v]) colors[v] = 0;
    }
    add_round(h, sum(visits));
    auto next = compact_indices<std::int64_t>(static_cast<std::int64_t>(work.size()),
                                              [&](std::int64_t t) { return conflict[work[t]] != 0; });
    std::vector<ordinal_t> nw(next.size());
    for (std::size_t k = 0; k < next.size(); ++k) {
      nw[k] = work[next[k]];
      conflict[nw[k]] = 0;
    }
    work = std::move(nw);
  }
  return colors;
}

// Distance-1, edge based. Each edge with exactly one colored endpoint
// passes that color to the other endpoint's forbidden window (atomic OR);
// a vertex pass then takes the lowest free color of each window.
inline std::vector<color_t> color_eb(ColoringHandle& h, const StaticCrsGraph& g) {
  const ordinal_t n = g.num_rows();
  std::vector<color_t> colors(static_cast<std::size_t>(n), 0);
  std::vector<color_t> base(static_cast<std::size_t>(n), 0);
  std::vector<std::uint64_t> forbidden(static_cast<std::size_t>(n), 0);
  std::vector<std::uint8_t> conflict(static_cast<std::size_t>(n), 0);

  // Each undirected edge once, as (u, v) with u < v.
  std::vector<ordinal_t> eu, ev;
  for (ordinal_t u = 0; u < n; ++u) {
    for (ordinal_t v : g.row(u)) {
      if (u < v) {
        eu.push_back(u);
        ev.push_back(v);
      }
    }
  }
  std::vector<std::int64_t> edges(eu.size());
  for (std::size_t e = 0; e < edges.size(); ++e) edges[e] = static_cast<std::int64_t>(e);
  std::vector<ordinal_t> work(static_cast<std::size_t>(n));
  for (ordinal_t v = 0; v < n; ++v) work[v] = v;

  while (!work.empty()) {
    for (ordinal_t v : work) forbidden[v] = 0;
    parallel_for(static_cast<std::int64_t>(edges.size()), [&](std::int64_t t) {
      const auto e = edges[t];
      const ordinal_t u = eu[e], v = ev[e];
      const color_t cu = colors[u], cv = colors[v];
      auto pass = [&](ordinal_t to, color_t c) {
        std::uint64_t bit = 0;
        window_mark(bit, base[to], c);
        if (bit) std::atomic_ref<std::uint64_t>(forbidden[to]).fetch_or(bit, std::memory_order_relaxed);
      };
      if (cu == 0 && cv != 0) pass(u, cv);
      if (cv == 0 && cu != 0) pass(v, cu);
    });
    parallel_for(static_cast<std::int64_t>(work.size()), [&](std::int64_t t) {
      const ordinal_t v = work[t];
      if (~forbidden[v] != 0) {
        colors[v] = base[v] + std::countr_zero(~forbidden[v]) + 1;
      } else {
        base[v] += 64;
      }
    });
    parallel_for(static_cast<std::int64_t>(edges.size()), [&](std::int64_t t) {
      const auto e = edges[t];
      const ordinal_t u = eu[e], v = ev[e];
      if (colors[u] != 0 && colors[u] == colors[v]) set_flag(conflict, v);  // v is the larger index
    });
    for (ordinal_t v : work) {
      if (conflict[v]) {
        colors[v] = 0;
        conflict[v] = 0;
      }
    }
    add_round(h, 2 * edges.size());
    auto keep = compact_indices<std::int64_t>(static_cast<std::int64_t>(work.size()),
                                              [&](std::int64_t t) { return colors[work[t]] == 0; });
    std::vector<ordinal_t> nw(keep.size());
    for (std::size_t k = 0; k < keep.size(); ++k) nw[k] = work[keep[k]];
    work = std::move(nw);
    auto ekeep = compact_indices<std::int64_t>(static_cast<std::int64_t>(edges.size()), [&](std::int64_t t) {
      return colors[eu[edges[t]]] == 0 || colors[ev[edges[t]]] == 0;
    });
    for (auto& k : ekeep) k = edges[k];
    edges = std::move(ekeep);
  }
  return colors;
}

// Distance-2, vertex based: gathers colors over neighbors and neighbors of
// neighbors of every pending vertex.
inline std::vector<color_t> color_vb2(ColoringHandle& h, const StaticCrsGraph& g) {
  const ordinal_t n = g.num_rows();
  std::vector<color_t> colors(static_cast<std::size_t>(n), 0);
  std::vector<std::uint8_t> conflict(static_cast<std::size_t>(n), 0);
  std::vector<std::uint64_t> visits(static_cast<std::size_t>(max_threads()), 0);
  std::vector<ordinal_t> work(static_cast<std::size_t>(n));
  for (ordinal_t v = 0; v < n; ++v) work[v] = v;

  auto for_d2 = [&](ordinal_t v, std::uint64_t& cnt, auto&& f) {
    for (ordinal_t u : g.row(v)) {
      ++cnt;
      f(u);
      for (ordinal_t w : g.row(u)) {
        ++cnt;
        if (w != v) f(w);
      }
    }
  };

  while (!work.empty()) {
    std::fill(visits.begin(), visits.end(), 0);
    parallel_for_dynamic_tid(static_cast<std::int64_t>(work.size()), 16, [&](int tid, std::int64_t t) {
      const ordinal_t v = work[t];
      for (color_t b = 0;; b += 64) {
        std::uint64_t mask = 0;
        for_d2(v, visits[tid], [&](ordinal_t u) { window_mark(mask, b, load_color(colors, u)); });
        if (~mask != 0) {
          store_color(colors, v, b + std::countr_zero(~mask) + 1);
          break;
        }
      }
    });
    parallel_for(static_cast<std::int64_t>(work.size()), [&](std::int64_t t) {
      const ordinal_t v = work[t];
      const color_t c = load_color(colors, v);
      std::uint64_t dummy = 0;
      bool bad = false;
      for_d2(v, dummy, [&](ordinal_t u) { bad = bad || (u < v && load_color(colors, u) == c); });
      if (bad) conflict[v] = 1;
    });
    for (ordinal_t v : work) {
      if (conflict[v]) colors[v] = 0;
    }
    add_round(h, sum(visits));
    auto keep = compact_indices<std::int64_t>(static_cast<std::int64_t>(work.size()),
                                              [&](std::int64_t t) { return conflict[work[t]] != 0; });
    std::vector<ordinal_t> nw(keep.size());
    for (std::size_t k = 0; k < keep.size(); ++k) {
      nw[k] = work[keep[k]];
      conflict[nw[k]] = 0;
    }
    work = std::move(nw);
  }
  return colors;
}

// Net-based coloring. Vertices that share a net must get different colors.
// `nets` lists the members of every net; `memberships` lists the nets of
// every vertex. A round gathers, per window, the colors used in each net
// (pass 1) and ORs the masks of a vertex's nets (pass 2), so each vertex
// visit costs its number of nets rather than the size of its distance-2
// neighborhood.
inline std::vector<color_t> color_net_based(ColoringHandle& h, ordinal_t n, const StaticCrsGraph& nets,
                                            const StaticCrsGraph& memberships) {
  const ordinal_t nnets = nets.num_rows();
  std::vector<color_t> colors(static_cast<std::size_t>(n), 0);
  std::vector<color_t> tentative(static_cast<std::size_t>(n), 0);
  std::vector<std::uint64_t> net_mask(static_cast<std::size_t>(nnets), 0);
  std::vector<std::uint8_t> conflict(static_cast<std::size_t>(n), 0);
  const int nt = max_threads();
  std::vector<std::uint64_t> visits(static_cast<std::size_t>(nt), 0);
  std::vector<std::vector<std::pair<color_t, ordinal_t>>> scratch(static_cast<std::size_t>(nt));
  std::vector<ordinal_t> work(static_cast<std::size_t>(n));
  for (ordinal_t v = 0; v < n; ++v) work[v] = v;

  while (!work.empty()) {
    std::fill(visits.begin(), visits.end(), 0);
    std::vector<ordinal_t> searching = work;
    std::vector<std::uint64_t> forbidden;
    for (color_t base = 0; !searching.empty(); base += 64) {
      // Pass 1: colors present in each net within this window.
      parallel_for_dynamic_tid(nnets, 256, [&](int tid, std::int64_t j) {
        std::uint64_t m = 0;
        auto mem = nets.row(static_cast<ordinal_t>(j));
        visits[tid] += mem.size();
        for (ordinal_t u : mem) window_mark(m, base, colors[u]);
        net_mask[j] = m;
      });
      // Pass 2: union over the vertex's nets.
      forbidden.assign(searching.size(), 0);
      parallel_for_dynamic_tid(static_cast<std::int64_t>(searching.size()), 256, [&](int tid, std::int64_t t) {
        std::uint64_t m = 0;
        auto ns = memberships.row(searching[t]);
        visits[tid] += ns.size();
        for (ordinal_t j : ns) m |= net_mask[j];
        forbidden[t] = m;
      });
      if (h.nb_observer) h.nb_observer(NbRoundState{h.rounds + 1, base, searching, forbidden, colors});
      parallel_for(static_cast<std::int64_t>(searching.size()), [&](std::int64_t t) {
        if (~forbidden[t] != 0) tentative[searching[t]] = base + std::countr_zero(~forbidden[t]) + 1;
      });
      auto keep = compact_indices<std::int64_t>(static_cast<std::int64_t>(searching.size()),
                                                [&](std::int64_t t) { return ~forbidden[t] == 0; });
      std::vector<ordinal_t> ns(keep.size());
      for (std::size_t k = 0; k < keep.size(); ++k) ns[k] = searching[keep[k]];
      searching = std::move(ns);
    }
    for (ordinal_t v : work) colors[v] = tentative[v];

    // Conflicts: within a net, among equal colors only the smallest id keeps it.
    parallel_for_dynamic_tid(nnets, 64, [&](int tid, std::int64_t j) {
      auto mem = nets.row(static_cast<ordinal_t>(j));
      if (mem.size() < 2) return;
      auto& s = scratch[tid];
      s.clear();
      for (ordinal_t u : mem) s.emplace_back(colors[u], u);
      std::sort(s.begin(), s.end());
      for (std::size_t k = 1; k < s.size(); ++k) {
        if (s[k].first != 0 && s[k].first == s[k - 1].first && s[k].second != s[k - 1].second) {
          set_flag(conflict, s[k].second);
        }
      }
    });
    for (ordinal_t v : work) {
      if (conflict[v]) colors[v] = 0;
    }
    add_round(h, sum(visits));
    auto keep = compact_indices<std::int64_t>(static_cast<std::int64_t>(work.size()),
                                              [&](std::int64_t t) { return conflict[work[t]] != 0; });
    std::vector<ordinal_t> nw(keep.size());
    for (std::size_t k = 0; k < keep.size(); ++k) {
      nw[k] = work[keep[k]];
      conflict[nw[k]] = 0;
      tentative[nw[k]] = 0;
    }
    work = std::move(nw);
  }
  return colors;
}

inline StaticCrsGraph prepare(ColoringHandle& h, const StaticCrsGraph& g) {
  bool sym = true;
  StaticCrsGraph s = symmetrize(g, &sym);
  h.input_symmetrized = !sym;
  return s;
}

}  // namespace detail

// Distance-1 coloring with the handle's algorithm (VB or EB). Non-symmetric
// input is replaced by A + A^T and flagged in the handle; self loops are
// ignored.
inline Coloring color_d1(ColoringHandle& h, const StaticCrsGraph& g) {
  require_square(g, "color_d1");
  if (h.algorithm != ColoringAlgorithm::VB && h.algorithm != ColoringAlgorithm::EB) {
    throw Error(std::string("color_d1: algorithm ") + to_string(h.algorithm) + " is a distance-2 algorithm");
  }
  detail::reset_stats(h);
  const StaticCrsGraph s = detail::prepare(h, g);
  return detail::finish(h.algorithm == ColoringAlgorithm::VB ? detail::color_vb(h, s) : detail::color_eb(h, s));
}

// Distance-2 coloring with the handle's algorithm (VB2 or NB).
inline Coloring color_d2(ColoringHandle& h, const StaticCrsGraph& g) {
  require_square(g, "color_d2");
  if (h.algorithm != ColoringAlgorithm::VB2 && h.algorithm != ColoringAlgorithm::NB) {
    throw Error(std::string("color_d2: algorithm ") + to_string(h.algorithm) + " is a distance-1 algorithm");
  }
  detail::reset_stats(h);
  const StaticCrsGraph s = detail::prepare(h, g);
  if (h.algorithm == ColoringAlgorithm::VB2) return detail::finish(detail::color_vb2(h, s));
  // Nets are closed neighborhoods: u and v are within distance 2 exactly
  // when some N[w] holds both.
  const StaticCrsGraph closed = with_self_loops(s);
  return detail::finish(detail::color_net_based(h, s.num_rows(), closed, closed));
}

// Partial coloring of the rows of a bipartite graph given as a matrix
// pattern: rows sharing a column get different colors.
inline Coloring color_bgpc(ColoringHandle& h, const StaticCrsGraph& m) {
  detail::reset_stats(h);
  h.input_symmetrized = false;
  const StaticCrsGraph cols = transpose(m);
  return detail::finish(detail::color_net_based(h, m.num_rows(), cols, m));
}

template <class Scalar>
Coloring color_bgpc(ColoringHandle& h, const CrsMatrix<Scalar>& m) {
  return color_bgpc(h, m.graph());
}

inline Coloring color_d1(const StaticCrsGraph& g, ColoringAlgorithm algo = ColoringAlgorithm::VB) {
  ColoringHandle h;
  h.algorithm = algo;
  return color_d1(h, g);
}

inline Coloring color_d2(const StaticCrsGraph& g, ColoringAlgorithm algo = ColoringAlgorithm::NB) {
  ColoringHandle h;
  h.algorithm = algo;
  return color_d2(h, g);
}

}  // namespace pkern::graph
