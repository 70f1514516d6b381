// Copyright 2026 The pkern Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Deterministic input generators. Every row (or batch entry) draws from its
// own stream seeded by (seed, index), so output does not depend on the
// thread count.

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "pkern/batched/dense_batch.hpp"
#include "pkern/crs.hpp"
#include "pkern/error.hpp"
#include "pkern/graph/graph_utils.hpp"
#include "pkern/parallel.hpp"
#include "pkern/stencil.hpp"
#include "pkern/types.hpp"

namespace pkern::io {

namespace detail {

inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
  return pkern::detail::mix64(pkern::detail::mix64(0x51ed270b27c9a1f3ULL, seed), index);
}

// Uniform in [-1, 1] from the top 53 bits.
inline double to_unit(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-52 - 1.0;
}

inline std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t range) { return rng() % range; }

// k distinct values from [lo, lo + range), ascending (partial Fisher-Yates
// over a virtual identity permutation).
inline std::vector<ordinal_t> sample_distinct(std::mt19937_64& rng, ordinal_t lo, ordinal_t range, ordinal_t k) {
  std::unordered_map<ordinal_t, ordinal_t> swapped;
  auto at = [&](ordinal_t i) {
    auto it = swapped.find(i);
    return it == swapped.end() ? i : it->second;
  };
  std::vector<ordinal_t> out(static_cast<std::size_t>(k));
  for (ordinal_t t = 0; t < k; ++t) {
    const auto j = static_cast<ordinal_t>(t + bounded(rng, static_cast<std::uint64_t>(range - t)));
    const ordinal_t vj = at(j);
    swapped[j] = at(t);
    out[t] = lo + vj;
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

// Laplacian-like stencil matrix on a box: diagonal = stencil length - 1,
// neighbors = -1. Rows near the boundary keep only in-box neighbors.
inline CrsMatrix<double> gen_stencil_matrix(const StencilSpec& spec) {
  for (int d = 0; d < 3; ++d) {
    if (spec.dims[d] <= 0) throw DimensionError("gen_stencil_matrix: box dimensions must be positive");
  }
  const auto disp = stencil_displacements(spec.kind);
  const auto offs = stencil_offsets(spec);
  const ordinal_t nx = spec.dims[0], ny = spec.dims[1], nz = spec.dims[2];
  const std::int64_t npts = spec.num_points();
  if (npts > std::numeric_limits<ordinal_t>::max()) throw DimensionError("gen_stencil_matrix: box too large");
  const auto n = static_cast<ordinal_t>(npts);
  const double center = static_cast<double>(disp.size()) - 1.0;

  auto inside = [&](ordinal_t i, ordinal_t j, ordinal_t k, const std::array<int, 3>& d) {
    const auto a = i + d[0], b = j + d[1], c = k + d[2];
    return a >= 0 && a < nx && b >= 0 && b < ny && c >= 0 && c < nz;
  };
  std::vector<offset_t> row_offsets(static_cast<std::size_t>(n) + 1, 0);
  parallel_for(n, [&](std::int64_t r) {
    const auto i = static_cast<ordinal_t>(r % nx), j = static_cast<ordinal_t>((r / nx) % ny),
               k = static_cast<ordinal_t>(r / (static_cast<std::int64_t>(nx) * ny));
    offset_t c = 0;
    for (const auto& d : disp) c += inside(i, j, k, d) ? 1 : 0;
    row_offsets[r + 1] = c;
  });
  for (ordinal_t r = 0; r < n; ++r) row_offsets[r + 1] += row_offsets[r];
  std::vector<ordinal_t> cols(static_cast<std::size_t>(row_offsets[n]));
  std::vector<double> vals(cols.size());
  parallel_for(n, [&](std::int64_t r) {
    const auto i = static_cast<ordinal_t>(r % nx), j = static_cast<ordinal_t>((r / nx) % ny),
               k = static_cast<ordinal_t>(r / (static_cast<std::int64_t>(nx) * ny));
    offset_t p = row_offsets[r];
    for (std::size_t s = 0; s < disp.size(); ++s) {
      if (!inside(i, j, k, disp[s])) continue;
      cols[p] = static_cast<ordinal_t>(r + offs[s]);
      vals[p] = offs[s] == 0 ? center : -1.0;
      ++p;
    }
  });
  return build_crs_unchecked(n, n, std::move(row_offsets), std::move(cols), std::move(vals));
}

// Exactly nnz_per_row distinct, sorted columns per row; values uniform in
// [-1, 1].
inline CrsMatrix<double> gen_random_crs(ordinal_t rows, ordinal_t cols, ordinal_t nnz_per_row, std::uint64_t seed) {
  if (rows < 0 || cols < 0 || nnz_per_row < 0) throw DimensionError("gen_random_crs: negative size");
  if (nnz_per_row > cols) {
    throw DimensionError("gen_random_crs: " + std::to_string(nnz_per_row) + " entries per row do not fit in " +
                         std::to_string(cols) + " columns");
  }
  std::vector<offset_t> offs(static_cast<std::size_t>(rows) + 1);
  for (ordinal_t i = 0; i <= rows; ++i) offs[i] = static_cast<offset_t>(i) * nnz_per_row;
  std::vector<ordinal_t> ci(static_cast<std::size_t>(offs[rows]));
  std::vector<double> vals(ci.size());
  parallel_for(rows, [&](std::int64_t i) {
    std::mt19937_64 rng(detail::stream_seed(seed, static_cast<std::uint64_t>(i)));
    const auto picked = detail::sample_distinct(rng, 0, cols, nnz_per_row);
    for (ordinal_t t = 0; t < nnz_per_row; ++t) {
      ci[offs[i] + t] = picked[t];
      vals[offs[i] + t] = detail::to_unit(rng());
    }
  });
  return build_crs_unchecked(rows, cols, std::move(offs), std::move(ci), std::move(vals));
}

// Random triangle with up to extra_nnz_per_row off-diagonal entries per row
// and |diagonal| = off-diagonal abs row sum + 1. Rows are sorted.
inline CrsMatrix<double> gen_random_triangular(ordinal_t n, ordinal_t extra_nnz_per_row, Uplo uplo,
                                               std::uint64_t seed) {
  if (n < 0 || extra_nnz_per_row < 0) throw DimensionError("gen_random_triangular: negative size");
  std::vector<offset_t> offs(static_cast<std::size_t>(n) + 1, 0);
  auto avail = [&](ordinal_t i) { return uplo == Uplo::Lower ? i : n - 1 - i; };
  for (ordinal_t i = 0; i < n; ++i) offs[i + 1] = offs[i] + std::min(extra_nnz_per_row, avail(i)) + 1;
  std::vector<ordinal_t> ci(static_cast<std::size_t>(offs[n]));
  std::vector<double> vals(ci.size());
  parallel_for(n, [&](std::int64_t r) {
    const auto i = static_cast<ordinal_t>(r);
    std::mt19937_64 rng(detail::stream_seed(seed, static_cast<std::uint64_t>(i)));
    const ordinal_t k = std::min(extra_nnz_per_row, avail(i));
    const ordinal_t lo = uplo == Uplo::Lower ? 0 : i + 1;
    const auto picked = detail::sample_distinct(rng, lo, avail(i), k);
    std::vector<double> v(static_cast<std::size_t>(k));
    double abs_sum = 0.0;
    for (ordinal_t t = 0; t < k; ++t) {
      v[t] = detail::to_unit(rng());
      abs_sum += std::abs(v[t]);
    }
    const double d = (rng() & 1) ? abs_sum + 1.0 : -(abs_sum + 1.0);
    offset_t p = offs[i];
    if (uplo == Uplo::Upper) {
      ci[p] = i;
      vals[p++] = d;
    }
    for (ordinal_t t = 0; t < k; ++t) {
      ci[p] = picked[t];
      vals[p++] = v[t];
    }
    if (uplo == Uplo::Lower) {
      ci[p] = i;
      vals[p++] = d;
    }
  });
  return build_crs_unchecked(n, n, std::move(offs), std::move(ci), std::move(vals));
}

// Square matrix with a random pattern plus a dominant diagonal, rows sorted.
inline CrsMatrix<double> gen_diag_dominant(ordinal_t n, ordinal_t nnz_per_row, std::uint64_t seed) {
  const auto base = gen_random_crs(n, n, std::min(nnz_per_row, n), seed);
  std::vector<ordinal_t> ri, ci;
  std::vector<double> v;
  for (ordinal_t i = 0; i < n; ++i) {
    const auto r = base.row(i);
    double s = 0.0;
    for (std::size_t k = 0; k < r.size(); ++k) {
      if (r.cols[k] == i) continue;
      ri.push_back(i);
      ci.push_back(r.cols[k]);
      v.push_back(r.vals[k]);
      s += std::abs(r.vals[k]);
    }
    ri.push_back(i);
    ci.push_back(i);
    v.push_back(s + 1.0);
  }
  return canonicalize(from_triplets<double>(n, n, ri, ci, v));
}

// Symmetric adjacency without self loops. Vertex v proposes a random
// number of edges in [0, 2 * avg_degree] to distinct random vertices; the
// union of all proposals in both directions is returned.
inline StaticCrsGraph gen_random_graph(ordinal_t n, ordinal_t avg_degree, std::uint64_t seed) {
  if (n < 0 || avg_degree < 0) throw DimensionError("gen_random_graph: negative size");
  std::vector<std::vector<ordinal_t>> picks(static_cast<std::size_t>(n));
  parallel_for(n, [&](std::int64_t v) {
    std::mt19937_64 rng(detail::stream_seed(seed ^ 0x6a09e667f3bcc909ULL, static_cast<std::uint64_t>(v)));
    const auto k = static_cast<ordinal_t>(
        std::min<std::uint64_t>(detail::bounded(rng, 2 * static_cast<std::uint64_t>(avg_degree) + 1), n));
    picks[v] = detail::sample_distinct(rng, 0, n, k);
  });
  std::vector<offset_t> offs(static_cast<std::size_t>(n) + 1, 0);
  for (ordinal_t v = 0; v < n; ++v) offs[v + 1] = offs[v] + static_cast<offset_t>(picks[v].size());
  std::vector<ordinal_t> cols;
  cols.reserve(static_cast<std::size_t>(offs[n]));
  for (auto& p : picks) cols.insert(cols.end(), p.begin(), p.end());
  return graph::symmetrize(StaticCrsGraph::build_unchecked(n, n, std::move(offs), std::move(cols)));
}

// Uniform [-1, 1] vector.
inline std::vector<double> random_vector(std::int64_t n, std::uint64_t seed) {
  std::vector<double> x(static_cast<std::size_t>(n));
  std::mt19937_64 rng(detail::stream_seed(seed, 0x7fffffffffffULL));
  for (auto& v : x) v = detail::to_unit(rng());
  return x;
}

// Fills every entry from a hash of (seed, matrix, i, j), so the contents
// do not depend on the layout.
inline void fill_random(batched::DenseBatch<double>& b, std::uint64_t seed) {
  parallel_for(b.batch_count(), [&](std::int64_t m) {
    std::mt19937_64 rng(detail::stream_seed(seed, static_cast<std::uint64_t>(m)));
    for (ordinal_t i = 0; i < b.rows(); ++i)
      for (ordinal_t j = 0; j < b.cols(); ++j) b(m, i, j) = detail::to_unit(rng());
  });
}

// Sets each diagonal entry to the absolute row sum + 1 (square matrices).
inline void make_diag_dominant(batched::DenseBatch<double>& b) {
  parallel_for(b.batch_count(), [&](std::int64_t m) {
    for (ordinal_t i = 0; i < b.rows(); ++i) {
      double s = 0.0;
      for (ordinal_t j = 0; j < b.cols(); ++j)
        if (j != i) s += std::abs(b(m, i, j));
      b(m, i, i) = s + 1.0;
    }
  });
}

// Zeroes the opposite triangle and makes the diagonal dominant.
inline void make_triangular(batched::DenseBatch<double>& b, Uplo uplo) {
  parallel_for(b.batch_count(), [&](std::int64_t m) {
    for (ordinal_t i = 0; i < b.rows(); ++i)
      for (ordinal_t j = 0; j < b.cols(); ++j)
        if (uplo == Uplo::Lower ? j > i : j < i) b(m, i, j) = 0.0;
  });
  make_diag_dominant(b);
}

}  // namespace pkern::io
