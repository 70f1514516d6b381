// Copyright 2026 The pkern Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Level-scheduled sparse triangular solve.
//
// Symbolic assigns each row the level 1 + max(level of its dependencies) and
// groups rows by level. Solve walks the levels in order; rows inside a level
// are independent and run in parallel. Runs of consecutive levels with few
// rows are chained: one task executes the whole run sequentially instead of
// paying a parallel launch and barrier per level.
//
// A supernodal variant would instead invert the diagonal blocks explicitly
// and apply the partitioned inverse with dense multiplies; it is not
// provided here.

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pkern/crs.hpp"
#include "pkern/error.hpp"
#include "pkern/handle.hpp"
#include "pkern/parallel.hpp"

namespace pkern {

template <class Scalar>
const LevelSchedule& sptrsv_symbolic(SptrsvHandle& h, const CrsMatrix<Scalar>& A) {
  const ordinal_t n = A.num_rows();
  if (A.num_cols() != n) {
    throw DimensionError("sptrsv: matrix must be square, got " + std::to_string(n) + "x" +
                         std::to_string(A.num_cols()));
  }
  if (!A.merged_rows()) {
    throw StructureError("sptrsv: rows contain duplicate columns; canonicalize first", -1);
  }
  h.symbolic_done = false;
  const bool lower = h.uplo == Uplo::Lower;
  const auto offs = A.row_offsets();
  const auto cols = A.col_indices();
  const auto vals = A.values();

  std::vector<offset_t> diag(static_cast<std::size_t>(n), -1);
  parallel_for(n, [&](std::int64_t r) {
    for (offset_t k = offs[r]; k < offs[r + 1]; ++k) {
      const ordinal_t c = cols[k];
      if (c == r) {
        diag[r] = k;
      } else if (lower ? c > r : c < r) {
        throw StructureError("sptrsv: entry (" + std::to_string(r) + ", " + std::to_string(c) + ") lies in the " +
                                 (lower ? "upper" : "lower") + " triangle",
                             r);
      }
    }
    if (diag[r] < 0) throw StructureError("sptrsv: row " + std::to_string(r) + " has no diagonal entry", r);
    if (vals[diag[r]] == Scalar(0)) {
      throw SingularError("sptrsv: zero diagonal in row " + std::to_string(r), -1, r);
    }
  });

  LevelSchedule s;
  s.row_level.assign(static_cast<std::size_t>(n), 0);
  ordinal_t max_level = -1;
  for (ordinal_t t = 0; t < n; ++t) {
    const ordinal_t r = lower ? t : n - 1 - t;
    ordinal_t lvl = 0;
    for (offset_t k = offs[r]; k < offs[r + 1]; ++k) {
      if (k != diag[r]) lvl = std::max(lvl, s.row_level[cols[k]] + 1);
    }
    s.row_level[r] = lvl;
    max_level = std::max(max_level, lvl);
  }
  s.num_levels = max_level + 1;
  s.level_offsets.assign(static_cast<std::size_t>(s.num_levels) + 1, 0);
  for (ordinal_t r = 0; r < n; ++r) ++s.level_offsets[s.row_level[r] + 1];
  for (ordinal_t l = 0; l < s.num_levels; ++l) s.level_offsets[l + 1] += s.level_offsets[l];
  s.row_order.resize(static_cast<std::size_t>(n));
  {
    std::vector<offset_t> fill(s.level_offsets.begin(), s.level_offsets.end() - 1);
    for (ordinal_t r = 0; r < n; ++r) s.row_order[fill[s.row_level[r]]++] = r;
  }

  // Maximal runs of thin levels become chained groups; other levels stand
  // alone. Chains never interleave with parallel levels.
  for (ordinal_t l = 0; l < s.num_levels;) {
    auto thin = [&](ordinal_t lv) {
      return h.chaining && s.level_offsets[lv + 1] - s.level_offsets[lv] < h.chain_threshold;
    };
    if (thin(l)) {
      ordinal_t e = l + 1;
      while (e < s.num_levels && thin(e)) ++e;
      s.groups.push_back({l, e, true});
      l = e;
    } else {
      s.groups.push_back({l, l + 1, false});
      ++l;
    }
  }

  h.schedule = std::move(s);
  h.diag_pos = std::move(diag);
  h.fingerprint = A.fingerprint();
  h.symbolic_done = true;
  return h.schedule;
}

namespace detail {

template <class Scalar>
inline void sptrsv_row(const offset_t* offs, const ordinal_t* cols, const Scalar* vals, const offset_t* diag,
                       const Scalar* b, Scalar* x, ordinal_t r) {
  Scalar sum = b[r];
  for (offset_t k = offs[r]; k < offs[r + 1]; ++k) {
    if (k != diag[r]) sum -= vals[k] * x[cols[k]];
  }
  x[r] = sum / vals[diag[r]];
}

}  // namespace detail

// Solves A x = b for the triangle named in the handle. x and b may not alias.
template <class Scalar>
void sptrsv_solve(const SptrsvHandle& h, const CrsMatrix<Scalar>& A, std::span<const Scalar> b, std::span<Scalar> x) {
  if (!h.symbolic_done) throw Error("sptrsv_solve: symbolic phase has not been run on this handle");
  detail::check_fingerprint(h.fingerprint, A.fingerprint(), "sptrsv_solve", "A");
  const ordinal_t n = A.num_rows();
  if (static_cast<ordinal_t>(b.size()) != n || static_cast<ordinal_t>(x.size()) != n) {
    throw DimensionError("sptrsv_solve: b and x must have " + std::to_string(n) + " entries");
  }
  const offset_t* offs = A.row_offsets().data();
  const ordinal_t* cols = A.col_indices().data();
  const Scalar* vals = A.values().data();
  const offset_t* diag = h.diag_pos.data();
  const auto& s = h.schedule;
  for (const auto& g : s.groups) {
    if (g.chained) {
      for (auto p = s.level_offsets[g.first_level]; p < s.level_offsets[g.end_level]; ++p) {
        detail::sptrsv_row(offs, cols, vals, diag, b.data(), x.data(), s.row_order[p]);
      }
    } else {
      const auto rows = s.level_rows(g.first_level);
      parallel_for(static_cast<std::int64_t>(rows.size()), [&](std::int64_t t) {
        detail::sptrsv_row(offs, cols, vals, diag, b.data(), x.data(), rows[t]);
      });
    }
  }
}

template <class Scalar>
std::vector<Scalar> sptrsv_solve(const SptrsvHandle& h, const CrsMatrix<Scalar>& A, std::span<const Scalar> b) {
  std::vector<Scalar> x(b.size());
  sptrsv_solve(h, A, b, std::span<Scalar>(x));
  return x;
}

}  // namespace pkern
