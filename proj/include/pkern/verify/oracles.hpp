// Copyright 2026 The pkern Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Brute-force reference implementations. Nothing here calls a library
// kernel; everything works on dense copies or explicit sets, serially.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "pkern/crs.hpp"
#include "pkern/handle.hpp"
#include "pkern/types.hpp"

namespace pkern::oracle {

template <class Scalar = double>
struct Dense {
  ordinal_t rows = 0;
  ordinal_t cols = 0;
  std::vector<Scalar> a;  // row-major

  Dense() = default;
  Dense(ordinal_t r, ordinal_t c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, Scalar{}) {}
  Scalar& operator()(ordinal_t i, ordinal_t j) { return a[static_cast<std::size_t>(i) * cols + j]; }
  const Scalar& operator()(ordinal_t i, ordinal_t j) const { return a[static_cast<std::size_t>(i) * cols + j]; }
};

// Duplicates summed.
template <class Scalar>
Dense<Scalar> densify(const CrsMatrix<Scalar>& m) {
  Dense<Scalar> d(m.num_rows(), m.num_cols());
  for (ordinal_t i = 0; i < m.num_rows(); ++i) {
    const auto r = m.row(i);
    for (std::size_t k = 0; k < r.size(); ++k) d(i, r.cols[k]) += r.vals[k];
  }
  return d;
}

// Entry-wise absolute values of a densified matrix (sum of |dup|).
template <class Scalar>
Dense<double> densify_abs(const CrsMatrix<Scalar>& m) {
  Dense<double> d(m.num_rows(), m.num_cols());
  for (ordinal_t i = 0; i < m.num_rows(); ++i) {
    const auto r = m.row(i);
    for (std::size_t k = 0; k < r.size(); ++k) d(i, r.cols[k]) += static_cast<double>(abs_value(r.vals[k]));
  }
  return d;
}

// Boolean pattern as sets, duplicates collapsed.
inline std::vector<std::set<ordinal_t>> pattern_sets(const StaticCrsGraph& g) {
  std::vector<std::set<ordinal_t>> s(static_cast<std::size_t>(g.num_rows()));
  for (ordinal_t i = 0; i < g.num_rows(); ++i)
    for (ordinal_t c : g.row(i)) s[i].insert(c);
  return s;
}

// |A| |x| from the stored entries, for matrices too large to densify.
inline std::vector<double> abs_matvec(const CrsMatrix<double>& A, std::span<const double> x) {
  std::vector<double> y(static_cast<std::size_t>(A.num_rows()), 0.0);
  for (ordinal_t i = 0; i < A.num_rows(); ++i) {
    const auto r = A.row(i);
    for (std::size_t k = 0; k < r.size(); ++k) y[i] += std::abs(r.vals[k]) * std::abs(x[r.cols[k]]);
  }
  return y;
}

// op(A) x for one vector; `transpose` and `conjugate` select the mode.
template <class Scalar>
std::vector<Scalar> matvec(const Dense<Scalar>& A, std::span<const Scalar> x, bool transpose, bool conjugate) {
  const ordinal_t m = transpose ? A.cols : A.rows;
  const ordinal_t n = transpose ? A.rows : A.cols;
  std::vector<Scalar> y(static_cast<std::size_t>(m), Scalar{});
  for (ordinal_t i = 0; i < m; ++i) {
    Scalar s{};
    for (ordinal_t j = 0; j < n; ++j) {
      Scalar a = transpose ? A(j, i) : A(i, j);
      if (conjugate) a = conj_value(a);
      s += a * x[j];
    }
    y[i] = s;
  }
  return y;
}

template <class Scalar>
Dense<Scalar> transpose(const Dense<Scalar>& A) {
  Dense<Scalar> t(A.cols, A.rows);
  for (ordinal_t i = 0; i < A.rows; ++i)
    for (ordinal_t j = 0; j < A.cols; ++j) t(j, i) = A(i, j);
  return t;
}

template <class Scalar>
Dense<Scalar> multiply(const Dense<Scalar>& A, const Dense<Scalar>& B) {
  Dense<Scalar> C(A.rows, B.cols);
  for (ordinal_t i = 0; i < A.rows; ++i)
    for (ordinal_t k = 0; k < A.cols; ++k) {
      const Scalar a = A(i, k);
      if (a == Scalar{}) continue;
      for (ordinal_t j = 0; j < B.cols; ++j) C(i, j) += a * B(k, j);
    }
  return C;
}

template <class Scalar>
Dense<Scalar> add(Scalar alpha, const Dense<Scalar>& A, Scalar beta, const Dense<Scalar>& B) {
  Dense<Scalar> C(A.rows, A.cols);
  for (std::size_t k = 0; k < C.a.size(); ++k) C.a[k] = alpha * A.a[k] + beta * B.a[k];
  return C;
}

// Substitution on a dense triangle (diagonal must be nonzero).
inline std::vector<double> triangular_solve(const Dense<double>& T, Uplo uplo, std::span<const double> b) {
  const ordinal_t n = T.rows;
  std::vector<double> x(b.begin(), b.end());
  if (uplo == Uplo::Lower) {
    for (ordinal_t i = 0; i < n; ++i) {
      double s = x[i];
      for (ordinal_t j = 0; j < i; ++j) s -= T(i, j) * x[j];
      x[i] = s / T(i, i);
    }
  } else {
    for (ordinal_t i = n - 1; i >= 0; --i) {
      double s = x[i];
      for (ordinal_t j = i + 1; j < n; ++j) s -= T(i, j) * x[j];
      x[i] = s / T(i, i);
    }
  }
  return x;
}

// |got - want| <= tol * max(scale, tiny), where scale is the magnitude of
// the terms that formed the entry (e.g. (|A||x|)_i). A plain relative test
// breaks on entries that cancel to ~0.
inline bool close(double got, double want, double scale, double tol) {
  const double tiny = std::numeric_limits<double>::min();
  return std::abs(got - want) <= tol * std::max(scale, tiny);
}

template <class Scalar>
bool close(const Scalar& got, const Scalar& want, double scale, double tol) {
  return static_cast<double>(abs_value(got - want)) <= tol * std::max(scale, std::numeric_limits<double>::min());
}

// Compares a sparse result against a dense reference, entry by entry.
// Entries outside the stored pattern must be zero in the reference.
template <class Scalar>
bool matches_dense(const CrsMatrix<Scalar>& got, const Dense<Scalar>& want, const Dense<double>& scale, double tol) {
  if (got.num_rows() != want.rows || got.num_cols() != want.cols) return false;
  const Dense<Scalar> g = densify(got);
  for (std::size_t k = 0; k < g.a.size(); ++k) {
    if (!close(g.a[k], want.a[k], scale.a[k], tol)) return false;
  }
  return true;
}

// Exact equality of canonical forms.
template <class Scalar>
bool identical(const CrsMatrix<Scalar>& x, const CrsMatrix<Scalar>& y) {
  if (x.num_rows() != y.num_rows() || x.num_cols() != y.num_cols() || x.nnz() != y.nnz()) return false;
  return std::equal(x.row_offsets().begin(), x.row_offsets().end(), y.row_offsets().begin()) &&
         std::equal(x.col_indices().begin(), x.col_indices().end(), y.col_indices().begin()) &&
         std::equal(x.values().begin(), x.values().end(), y.values().begin());
}

// Per-row |∪ B(j,:) for j in A(i,:)|.
inline std::vector<offset_t> product_row_counts(const StaticCrsGraph& A, const StaticCrsGraph& B) {
  const auto bs = pattern_sets(B);
  std::vector<offset_t> counts(static_cast<std::size_t>(A.num_rows()));
  for (ordinal_t i = 0; i < A.num_rows(); ++i) {
    std::set<ordinal_t> u;
    for (ordinal_t r : A.row(i)) u.insert(bs[r].begin(), bs[r].end());
    counts[i] = static_cast<offset_t>(u.size());
  }
  return counts;
}

inline std::vector<offset_t> union_row_counts(const StaticCrsGraph& A, const StaticCrsGraph& B) {
  std::vector<offset_t> counts(static_cast<std::size_t>(A.num_rows()));
  for (ordinal_t i = 0; i < A.num_rows(); ++i) {
    std::set<ordinal_t> u(A.row(i).begin(), A.row(i).end());
    u.insert(B.row(i).begin(), B.row(i).end());
    counts[i] = static_cast<offset_t>(u.size());
  }
  return counts;
}

inline std::vector<offset_t> row_counts(std::span<const offset_t> offsets) {
  std::vector<offset_t> c;
  for (std::size_t i = 0; i + 1 < offsets.size(); ++i) c.push_back(offsets[i + 1] - offsets[i]);
  return c;
}

// Returns an empty string when the schedule is valid for A, otherwise a
// description of the first problem. Checks: row_order is a permutation
// grouped by level, every dependency sits in an earlier level, and the level
// of each row is exactly one past its deepest dependency.
inline std::string check_level_schedule(const StaticCrsGraph& A, Uplo uplo, const LevelSchedule& s) {
  const ordinal_t n = A.num_rows();
  if (static_cast<ordinal_t>(s.row_order.size()) != n || static_cast<ordinal_t>(s.row_level.size()) != n) {
    return "schedule size does not match the matrix";
  }
  if (static_cast<ordinal_t>(s.level_offsets.size()) != s.num_levels + 1 || s.level_offsets.front() != 0 ||
      s.level_offsets.back() != n) {
    return "level offsets are malformed";
  }
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (ordinal_t l = 0; l < s.num_levels; ++l) {
    if (s.level_offsets[l + 1] <= s.level_offsets[l]) return "level " + std::to_string(l) + " is empty";
    for (offset_t p = s.level_offsets[l]; p < s.level_offsets[l + 1]; ++p) {
      const ordinal_t r = s.row_order[p];
      if (r < 0 || r >= n || seen[r]) return "row_order is not a permutation";
      seen[r] = 1;
      if (s.row_level[r] != l) return "row " + std::to_string(r) + " listed under the wrong level";
    }
  }
  for (ordinal_t r = 0; r < n; ++r) {
    ordinal_t deepest = -1;
    for (ordinal_t c : A.row(r)) {
      if (c == r) continue;
      if (uplo == Uplo::Lower ? c > r : c < r) return "row " + std::to_string(r) + " has a wrong-triangle entry";
      if (s.row_level[c] >= s.row_level[r]) {
        return "row " + std::to_string(r) + " depends on row " + std::to_string(c) + " in the same or a later level";
      }
      deepest = std::max(deepest, s.row_level[c]);
    }
    if (s.row_level[r] != deepest + 1) return "row " + std::to_string(r) + " is not at its earliest level";
  }
  // Groups tile the levels in order.
  ordinal_t next = 0;
  for (const auto& g : s.groups) {
    if (g.first_level != next || g.end_level <= g.first_level) return "level groups do not tile the schedule";
    next = g.end_level;
  }
  if (next != s.num_levels) return "level groups do not cover every level";
  return {};
}

// Length of the longest dependency chain, by memoized longest path.
inline ordinal_t longest_chain(const StaticCrsGraph& A, Uplo uplo) {
  const ordinal_t n = A.num_rows();
  std::vector<ordinal_t> depth(static_cast<std::size_t>(n), 0);
  ordinal_t best = 0;
  for (ordinal_t t = 0; t < n; ++t) {
    const ordinal_t r = uplo == Uplo::Lower ? t : n - 1 - t;
    ordinal_t d = 1;
    for (ordinal_t c : A.row(r))
      if (c != r) d = std::max(d, depth[c] + 1);
    depth[r] = d;
    best = std::max(best, d);
  }
  return best;
}

// Undirected adjacency without loops, sorted and deduplicated.
inline std::vector<std::vector<ordinal_t>> undirected(const StaticCrsGraph& g) {
  std::vector<std::vector<ordinal_t>> adj(static_cast<std::size_t>(g.num_rows()));
  for (ordinal_t u = 0; u < g.num_rows(); ++u)
    for (ordinal_t v : g.row(u)) {
      if (u == v) continue;
      adj[u].push_back(v);
      adj[v].push_back(u);
    }
  for (auto& a : adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
  return adj;
}

// Vertices within distance 2 of v (excluding v).
inline std::vector<ordinal_t> ball2(const std::vector<std::vector<ordinal_t>>& adj, ordinal_t v) {
  std::vector<ordinal_t> out;
  for (ordinal_t u : adj[v]) {
    out.push_back(u);
    for (ordinal_t w : adj[u])
      if (w != v) out.push_back(w);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Empty string when in_set is an independent and maximal distance-2 set.
inline std::string check_mis2(const StaticCrsGraph& g, std::span<const std::uint8_t> in_set) {
  const auto adj = undirected(g);
  for (ordinal_t v = 0; v < g.num_rows(); ++v) {
    const auto b = ball2(adj, v);
    const bool near_root = std::any_of(b.begin(), b.end(), [&](ordinal_t u) { return in_set[u] != 0; });
    if (in_set[v] && near_root) return "vertices near " + std::to_string(v) + " are both in the set";
    if (!in_set[v] && !near_root) return "vertex " + std::to_string(v) + " could be added (not maximal)";
  }
  return {};
}

// Hop distance from `from`, capped at `limit` (returns limit+1 when farther).
inline int hop_distance(const std::vector<std::vector<ordinal_t>>& adj, ordinal_t from, ordinal_t to, int limit) {
  if (from == to) return 0;
  std::vector<int> dist(adj.size(), -1);
  std::queue<ordinal_t> q;
  dist[from] = 0;
  q.push(from);
  while (!q.empty()) {
    const ordinal_t u = q.front();
    q.pop();
    if (dist[u] >= limit) continue;
    for (ordinal_t w : adj[u]) {
      if (dist[w] >= 0) continue;
      dist[w] = dist[u] + 1;
      if (w == to) return dist[w];
      q.push(w);
    }
  }
  return limit + 1;
}

// Degree statistics of the undirected graph.
inline ordinal_t max_degree(const std::vector<std::vector<ordinal_t>>& adj) {
  std::size_t d = 0;
  for (const auto& a : adj) d = std::max(d, a.size());
  return static_cast<ordinal_t>(d);
}

}  // namespace pkern::oracle
