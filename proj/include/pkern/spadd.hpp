// Copyright 2026 The pkern Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// C = alpha*A + beta*B in two phases.
//
// Symbolic computes, for every stored entry of A and B, the row-local slot
// it lands in within C (a_pos / b_pos), plus C's row offsets. Numeric is
// then a pure scatter. Duplicate columns inside one input row share a slot.
//
// Unsorted rows: tag entries as (column, source, index), radix sort by
// column (stable, so A's entries precede B's on ties) and number the
// distinct columns. Sorted rows: two-pointer merge, or optionally a bitonic
// merge of A's row followed by B's row reversed.

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "pkern/crs.hpp"
#include "pkern/error.hpp"
#include "pkern/handle.hpp"
#include "pkern/parallel.hpp"
#include "pkern/sort.hpp"

namespace pkern {

namespace detail {

struct SpaddEntry {
  ordinal_t col;
  std::uint8_t src;  // 0 = A, 1 = B
  std::int64_t idx;  // entry index in the source matrix

  bool operator<(const SpaddEntry& o) const {
    return std::tie(col, src, idx) < std::tie(o.col, o.src, o.idx);
  }
};

struct SpaddScratch {
  std::vector<std::uint32_t> keys;
  std::vector<SpaddEntry> entries;
  RadixSorter<std::uint32_t, SpaddEntry> sorter;
};

// Assigns slots to an already column-ordered entry list; returns the row width.
inline ordinal_t spadd_number(std::span<const SpaddEntry> sorted, ordinal_t* a_pos, ordinal_t* b_pos) {
  ordinal_t slot = -1;
  ordinal_t last = -1;
  for (const auto& e : sorted) {
    if (slot < 0 || e.col != last) {
      ++slot;
      last = e.col;
    }
    (e.src == 0 ? a_pos : b_pos)[e.idx] = slot;
  }
  return slot + 1;
}

inline ordinal_t spadd_row_unsorted(const StaticCrsGraph& A, const StaticCrsGraph& B, ordinal_t i,
                                    SpaddScratch& s, ordinal_t* a_pos, ordinal_t* b_pos) {
  const auto ao = A.row_offsets();
  const auto bo = B.row_offsets();
  const auto ac = A.col_indices();
  const auto bc = B.col_indices();
  s.keys.clear();
  s.entries.clear();
  for (offset_t k = ao[i]; k < ao[i + 1]; ++k) {
    s.keys.push_back(static_cast<std::uint32_t>(ac[k]));
    s.entries.push_back({ac[k], 0, k});
  }
  for (offset_t k = bo[i]; k < bo[i + 1]; ++k) {
    s.keys.push_back(static_cast<std::uint32_t>(bc[k]));
    s.entries.push_back({bc[k], 1, k});
  }
  s.sorter.sort(std::span<std::uint32_t>(s.keys), std::span<SpaddEntry>(s.entries));
  return spadd_number(s.entries, a_pos, b_pos);
}

[[noreturn]] inline void spadd_unsorted_row(const char* which, ordinal_t i) {
  throw StructureError(std::string("spadd: sorted input requested but row ") + std::to_string(i) + " of " + which +
                           " is not sorted",
                       i);
}

inline ordinal_t spadd_row_merge(const StaticCrsGraph& A, const StaticCrsGraph& B, ordinal_t i, ordinal_t* a_pos,
                                 ordinal_t* b_pos) {
  const auto ao = A.row_offsets();
  const auto bo = B.row_offsets();
  const auto ac = A.col_indices();
  const auto bc = B.col_indices();
  offset_t ka = ao[i], kb = bo[i];
  const offset_t ea = ao[i + 1], eb = bo[i + 1];
  ordinal_t slot = -1;
  ordinal_t last = -1;
  auto place = [&](ordinal_t c, ordinal_t* pos, offset_t k) {
    if (slot < 0 || c != last) {
      ++slot;
      last = c;
    }
    pos[k] = slot;
  };
  while (ka < ea || kb < eb) {
    if (ka > ao[i] && ka < ea && ac[ka] < ac[ka - 1]) spadd_unsorted_row("A", i);
    if (kb > bo[i] && kb < eb && bc[kb] < bc[kb - 1]) spadd_unsorted_row("B", i);
    if (kb == eb || (ka < ea && ac[ka] <= bc[kb])) {
      place(ac[ka], a_pos, ka);
      ++ka;
    } else {
      place(bc[kb], b_pos, kb);
      ++kb;
    }
  }
  return slot + 1;
}

inline ordinal_t spadd_row_bitonic(const StaticCrsGraph& A, const StaticCrsGraph& B, ordinal_t i, SpaddScratch& s,
                                   ordinal_t* a_pos, ordinal_t* b_pos) {
  const auto ao = A.row_offsets();
  const auto bo = B.row_offsets();
  const auto ac = A.col_indices();
  const auto bc = B.col_indices();
  s.entries.clear();
  for (offset_t k = ao[i]; k < ao[i + 1]; ++k) {
    if (k > ao[i] && ac[k] < ac[k - 1]) spadd_unsorted_row("A", i);
    s.entries.push_back({ac[k], 0, k});
  }
  for (offset_t k = bo[i + 1] - 1; k >= bo[i]; --k) {
    if (k > bo[i] && bc[k] < bc[k - 1]) spadd_unsorted_row("B", i);
    s.entries.push_back({bc[k], 1, k});
  }
  bitonic_merge(std::span<SpaddEntry>(s.entries));
  return spadd_number(s.entries, a_pos, b_pos);
}

}  // namespace detail

template <class Scalar>
std::span<const offset_t> spadd_symbolic(SpaddHandle& h, const CrsMatrix<Scalar>& A, const CrsMatrix<Scalar>& B,
                                         bool sorted) {
  if (A.num_rows() != B.num_rows() || A.num_cols() != B.num_cols()) {
    throw DimensionError("spadd: A is " + std::to_string(A.num_rows()) + "x" + std::to_string(A.num_cols()) +
                         ", B is " + std::to_string(B.num_rows()) + "x" + std::to_string(B.num_cols()));
  }
  const ordinal_t m = A.num_rows();
  h.symbolic_done = false;
  h.a_pos.assign(static_cast<std::size_t>(A.nnz()), 0);
  h.b_pos.assign(static_cast<std::size_t>(B.nnz()), 0);
  std::vector<offset_t> counts(static_cast<std::size_t>(m) + 1, 0);
  std::vector<detail::SpaddScratch> scratch(static_cast<std::size_t>(max_threads()));
  const auto& ga = A.graph();
  const auto& gb = B.graph();
  ordinal_t* ap = h.a_pos.data();
  ordinal_t* bp = h.b_pos.data();

  parallel_for_dynamic_tid(m, 64, [&](int tid, std::int64_t r) {
    const auto i = static_cast<ordinal_t>(r);
    if (!sorted) {
      counts[i] = detail::spadd_row_unsorted(ga, gb, i, scratch[tid], ap, bp);
    } else if (h.merge == SpaddMerge::Bitonic) {
      counts[i] = detail::spadd_row_bitonic(ga, gb, i, scratch[tid], ap, bp);
    } else {
      counts[i] = detail::spadd_row_merge(ga, gb, i, ap, bp);
    }
  });

  const offset_t nnz = exclusive_scan_inplace(std::span<offset_t>(counts).first(static_cast<std::size_t>(m)));
  counts[m] = nnz;
  h.c_row_offsets = std::move(counts);
  h.num_rows = m;
  h.num_cols = A.num_cols();
  h.sorted_input = sorted;
  h.a_fingerprint = A.fingerprint();
  h.b_fingerprint = B.fingerprint();
  h.symbolic_done = true;
  return h.c_row_offsets;
}

template <class Scalar>
CrsMatrix<Scalar> spadd_numeric(SpaddHandle& h, Scalar alpha, const CrsMatrix<Scalar>& A, Scalar beta,
                                const CrsMatrix<Scalar>& B) {
  if (!h.symbolic_done) throw Error("spadd_numeric: symbolic phase has not been run on this handle");
  detail::check_fingerprint(h.a_fingerprint, A.fingerprint(), "spadd_numeric", "A");
  detail::check_fingerprint(h.b_fingerprint, B.fingerprint(), "spadd_numeric", "B");
  const ordinal_t m = h.num_rows;
  const auto& co = h.c_row_offsets;
  std::vector<ordinal_t> c_cols(static_cast<std::size_t>(h.c_nnz()));
  std::vector<Scalar> c_vals(static_cast<std::size_t>(h.c_nnz()), Scalar{});
  const auto ao = A.row_offsets();
  const auto ac = A.col_indices();
  const auto av = A.values();
  const auto bo = B.row_offsets();
  const auto bc = B.col_indices();
  const auto bv = B.values();
  parallel_for_blocks(m, 64, [&](std::int64_t rb, std::int64_t re) {
    for (auto i = rb; i < re; ++i) {
      const offset_t base = co[i];
      for (offset_t k = ao[i]; k < ao[i + 1]; ++k) {
        const offset_t p = base + h.a_pos[k];
        c_cols[p] = ac[k];
        c_vals[p] += alpha * av[k];
      }
      for (offset_t k = bo[i]; k < bo[i + 1]; ++k) {
        const offset_t p = base + h.b_pos[k];
        c_cols[p] = bc[k];
        c_vals[p] += beta * bv[k];
      }
    }
  });
  h.multiply_count = static_cast<std::uint64_t>(A.nnz() + B.nnz());
  return build_crs_unchecked(m, h.num_cols, std::vector<offset_t>(co), std::move(c_cols), std::move(c_vals));
}

// Both phases with a throwaway handle; sortedness is taken from the inputs.
template <class Scalar>
CrsMatrix<Scalar> spadd(Scalar alpha, const CrsMatrix<Scalar>& A, Scalar beta, const CrsMatrix<Scalar>& B) {
  SpaddHandle h;
  spadd_symbolic(h, A, B, A.sorted_rows() && B.sorted_rows());
  return spadd_numeric(h, alpha, A, beta, B);
}

}  // namespace pkern
