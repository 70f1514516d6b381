// Copyright 2026 The pkern Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Row-wise (Gustavson) sparse matrix product C = A*B in two phases.
//
// The symbolic phase sizes every row of C. With compression enabled the
// columns of B are folded into (column / 32, bitmask) pairs so merging rows
// of B becomes a bitwise OR and the distinct-column count is a popcount.
// The numeric phase accumulates products into a per-thread accumulator
// (two-level hashmap or dense array) and writes each row sorted.
//
// The Jacobi variant computes C = (I - omega * D^-1 * A) * B in one pass:
// row i of C is B(i,:) - omega * dinv[i] * (A*B)(i,:).

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pkern/crs.hpp"
#include "pkern/error.hpp"
#include "pkern/handle.hpp"
#include "pkern/hashmap_accumulator.hpp"
#include "pkern/parallel.hpp"

namespace pkern {

// Per-row (block, bitmask) form of a pattern; column c is bit c % 32 of
// block c / 32. Blocks within a row are ascending.
struct CompressedGraph {
  ordinal_t num_rows = 0;
  ordinal_t num_cols = 0;
  std::vector<offset_t> row_offsets;
  std::vector<ordinal_t> blocks;
  std::vector<std::uint32_t> masks;

  offset_t row_begin(ordinal_t i) const { return row_offsets[i]; }
  offset_t row_end(ordinal_t i) const { return row_offsets[i + 1]; }
};

inline CompressedGraph compress(const StaticCrsGraph& g) {
  CompressedGraph cg;
  cg.num_rows = g.num_rows();
  cg.num_cols = g.num_cols();
  cg.row_offsets.assign(static_cast<std::size_t>(g.num_rows()) + 1, 0);
  std::vector<std::vector<std::pair<ordinal_t, std::uint32_t>>> scratch(static_cast<std::size_t>(max_threads()));

  auto build_row = [&](ordinal_t i, std::vector<std::pair<ordinal_t, std::uint32_t>>& buf) {
    buf.clear();
    for (ordinal_t c : g.row(i)) buf.emplace_back(c >> 5, 1u << (c & 31));
    std::sort(buf.begin(), buf.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::size_t out = 0;
    for (std::size_t k = 0; k < buf.size(); ++k) {
      if (out > 0 && buf[out - 1].first == buf[k].first) {
        buf[out - 1].second |= buf[k].second;
      } else {
        buf[out++] = buf[k];
      }
    }
    buf.resize(out);
  };

  parallel_region([&](int tid, int nt) {
    auto [b, e] = static_partition(g.num_rows(), nt, tid);
    for (auto i = b; i < e; ++i) {
      build_row(static_cast<ordinal_t>(i), scratch[tid]);
      cg.row_offsets[i] = static_cast<offset_t>(scratch[tid].size());
    }
  });
  const offset_t total =
      exclusive_scan_inplace(std::span<offset_t>(cg.row_offsets).first(static_cast<std::size_t>(g.num_rows())));
  cg.row_offsets[g.num_rows()] = total;
  cg.blocks.resize(static_cast<std::size_t>(total));
  cg.masks.resize(static_cast<std::size_t>(total));
  parallel_region([&](int tid, int nt) {
    auto [b, e] = static_partition(g.num_rows(), nt, tid);
    for (auto i = b; i < e; ++i) {
      build_row(static_cast<ordinal_t>(i), scratch[tid]);
      offset_t p = cg.row_offsets[i];
      for (const auto& [blk, m] : scratch[tid]) {
        cg.blocks[p] = blk;
        cg.masks[p] = m;
        ++p;
      }
    }
  });
  return cg;
}

template <class Scalar>
CompressedGraph compress(const CrsMatrix<Scalar>& m) {
  return compress(m.graph());
}

// Column set of row i, ascending.
inline std::vector<ordinal_t> decompress_row(const CompressedGraph& cg, ordinal_t i) {
  std::vector<ordinal_t> cols;
  for (offset_t k = cg.row_begin(i); k < cg.row_end(i); ++k) {
    std::uint32_t m = cg.masks[k];
    while (m != 0) {
      cols.push_back(cg.blocks[k] * 32 + std::countr_zero(m));
      m &= m - 1;
    }
  }
  return cols;
}

namespace detail {

// Uniform view over B's pattern for symbolic: either the compressed form or
// the raw columns with a single-bit mask each.
struct SymbolicPattern {
  const offset_t* offsets;
  const ordinal_t* keys;
  const std::uint32_t* masks;  // nullptr: every mask is 1
  ordinal_t key_space;

  std::uint32_t mask(offset_t k) const { return masks ? masks[k] : 1u; }
};

inline std::int64_t spgemm_default_l1(std::int64_t max_row_flops) {
  const auto want = std::bit_ceil(static_cast<std::uint64_t>(std::max<std::int64_t>(1, 2 * max_row_flops)));
  return std::min<std::int64_t>(4096, std::max<std::int64_t>(64, static_cast<std::int64_t>(want)));
}

template <class RowFn>
void spgemm_for_rows(SpgemmParallelMethod method, ordinal_t nrows, RowFn&& row_fn) {
  constexpr std::int64_t kRowBlock = 32;
  const std::int64_t chunk = method == SpgemmParallelMethod::RowBlocks ? kRowBlock : 1;
  parallel_for_dynamic_tid(nrows, chunk, [&](int tid, std::int64_t i) { row_fn(tid, static_cast<ordinal_t>(i)); });
}

template <class ScalarA, class ScalarB>
void spgemm_check_dims(const CrsMatrix<ScalarA>& A, const CrsMatrix<ScalarB>& B, bool jacobi) {
  if (A.num_cols() != B.num_rows()) {
    throw DimensionError("spgemm: A is " + std::to_string(A.num_rows()) + "x" + std::to_string(A.num_cols()) +
                         " but B has " + std::to_string(B.num_rows()) + " rows");
  }
  if (jacobi && A.num_rows() != A.num_cols()) {
    throw DimensionError("spgemm_jacobi: A must be square, got " + std::to_string(A.num_rows()) + "x" +
                         std::to_string(A.num_cols()));
  }
}

template <class Scalar>
void spgemm_symbolic_impl(SpgemmHandle& h, const CrsMatrix<Scalar>& A, const CrsMatrix<Scalar>& B, bool jacobi) {
  spgemm_check_dims(A, B, jacobi);
  const ordinal_t m = A.num_rows();
  const auto a_offs = A.row_offsets();
  const auto a_cols = A.col_indices();
  const auto b_offs = B.row_offsets();

  // Upper bound on entries per row of C (products, plus B(i,:) for Jacobi).
  std::vector<offset_t> row_flops(static_cast<std::size_t>(m), 0);
  parallel_for(m, [&](std::int64_t i) {
    offset_t f = 0;
    for (offset_t k = a_offs[i]; k < a_offs[i + 1]; ++k) f += b_offs[a_cols[k] + 1] - b_offs[a_cols[k]];
    if (jacobi) f += b_offs[i + 1] - b_offs[i];
    row_flops[i] = f;
  });
  offset_t max_flops = 0, total_flops = 0;
  for (offset_t f : row_flops) {
    max_flops = std::max(max_flops, f);
    total_flops += f;
  }

  h.chosen_accumulator = h.accumulator;
  if (h.chosen_accumulator == SpgemmAccumulator::Auto) {
    h.chosen_accumulator = B.num_cols() <= (1 << 16) ? SpgemmAccumulator::Dense : SpgemmAccumulator::Hashmap;
  }
  h.chosen_method = h.method;
  if (h.chosen_method == SpgemmParallelMethod::Auto) {
    const double avg = m > 0 ? static_cast<double>(total_flops) / m : 0.0;
    h.chosen_method = avg < 256.0 ? SpgemmParallelMethod::RowBlocks : SpgemmParallelMethod::SingleRow;
  }
  h.max_row_flops = max_flops;
  h.total_flops = total_flops;
  h.l1_capacity_used = static_cast<int>(h.l1_capacity > 0 ? h.l1_capacity : spgemm_default_l1(max_flops));

  CompressedGraph cg;
  SymbolicPattern pat{};
  if (h.use_compression) {
    cg = compress(B.graph());
    pat = {cg.row_offsets.data(), cg.blocks.data(), cg.masks.data(), (B.num_cols() + 31) / 32};
  } else {
    pat = {b_offs.data(), B.col_indices().data(), nullptr, B.num_cols()};
  }

  std::vector<offset_t> counts(static_cast<std::size_t>(m) + 1, 0);
  const int nthreads = max_threads();

  if (h.chosen_accumulator == SpgemmAccumulator::Dense) {
    std::vector<std::vector<std::uint32_t>> dense(static_cast<std::size_t>(nthreads));
    std::vector<std::vector<ordinal_t>> touched(static_cast<std::size_t>(nthreads));
    spgemm_for_rows(h.chosen_method, m, [&](int tid, ordinal_t i) {
      auto& d = dense[tid];
      auto& t = touched[tid];
      if (d.empty()) d.assign(static_cast<std::size_t>(pat.key_space), 0u);
      auto add_row = [&](ordinal_t r) {
        for (offset_t k = pat.offsets[r]; k < pat.offsets[r + 1]; ++k) {
          const ordinal_t key = pat.keys[k];
          if (d[key] == 0) t.push_back(key);
          d[key] |= pat.mask(k);
        }
      };
      for (offset_t k = a_offs[i]; k < a_offs[i + 1]; ++k) add_row(a_cols[k]);
      if (jacobi) add_row(i);
      offset_t c = 0;
      for (ordinal_t key : t) {
        c += std::popcount(d[key]);
        d[key] = 0;
      }
      t.clear();
      counts[i] = c;
    });
  } else {
    std::vector<std::optional<TwoLevelAccumulator<ordinal_t, std::uint32_t>>> acc(static_cast<std::size_t>(nthreads));
    spgemm_for_rows(h.chosen_method, m, [&](int tid, ordinal_t i) {
      auto& a = acc[tid];
      if (!a) a.emplace(h.l1_capacity_used, std::max<offset_t>(1, max_flops));
      auto add_row = [&](ordinal_t r) {
        for (offset_t k = pat.offsets[r]; k < pat.offsets[r + 1]; ++k) a->insert_or(pat.keys[k], pat.mask(k));
      };
      for (offset_t k = a_offs[i]; k < a_offs[i + 1]; ++k) add_row(a_cols[k]);
      if (jacobi) add_row(i);
      offset_t c = 0;
      a->for_each([&](ordinal_t, std::uint32_t mask) { c += std::popcount(mask); });
      a->clear();
      counts[i] = c;
    });
  }

  const offset_t nnz = exclusive_scan_inplace(std::span<offset_t>(counts).first(static_cast<std::size_t>(m)));
  counts[m] = nnz;
  h.c_row_offsets = std::move(counts);
  h.a_fingerprint = A.fingerprint();
  h.b_fingerprint = B.fingerprint();
  h.jacobi_pattern = jacobi;
  h.symbolic_done = true;
}

template <class Scalar>
void spgemm_check_handle(const SpgemmHandle& h, const CrsMatrix<Scalar>& A, const CrsMatrix<Scalar>& B,
                         bool jacobi, const char* kernel) {
  if (!h.symbolic_done) throw Error(std::string(kernel) + ": symbolic phase has not been run on this handle");
  if (h.jacobi_pattern != jacobi) {
    throw StaleHandleError(std::string(kernel) + ": handle holds a " + (h.jacobi_pattern ? "Jacobi" : "plain") +
                           " symbolic result");
  }
  check_fingerprint(h.a_fingerprint, A.fingerprint(), kernel, "A");
  check_fingerprint(h.b_fingerprint, B.fingerprint(), kernel, "B");
}

// Numeric core shared by the plain and Jacobi paths. For Jacobi, `dinv` is
// non-null and row i becomes B(i,:) + s * E(i,:) with s = -omega * dinv[i].
template <class Scalar>
CrsMatrix<Scalar> spgemm_numeric_impl(SpgemmHandle& h, const CrsMatrix<Scalar>& A, const CrsMatrix<Scalar>& B,
                                      const Scalar* dinv, Scalar omega) {
  const bool jacobi = dinv != nullptr;
  const ordinal_t m = A.num_rows();
  const ordinal_t n = B.num_cols();
  const auto a_offs = A.row_offsets();
  const auto a_cols = A.col_indices();
  const auto a_vals = A.values();
  const auto b_offs = B.row_offsets();
  const auto b_cols = B.col_indices();
  const auto b_vals = B.values();
  const auto& c_offs = h.c_row_offsets;
  std::vector<ordinal_t> c_cols(static_cast<std::size_t>(h.c_nnz()));
  std::vector<Scalar> c_vals(static_cast<std::size_t>(h.c_nnz()));

  const int nthreads = max_threads();
  std::vector<std::uint64_t> mults(static_cast<std::size_t>(nthreads), 0);
  std::vector<std::int64_t> l2_rows(static_cast<std::size_t>(nthreads), 0);
  std::vector<std::vector<std::pair<ordinal_t, Scalar>>> rowbuf(static_cast<std::size_t>(nthreads));

  auto write_row = [&](ordinal_t i, std::vector<std::pair<ordinal_t, Scalar>>& buf) {
    if (static_cast<offset_t>(buf.size()) != c_offs[i + 1] - c_offs[i]) {
      throw Error("spgemm: row " + std::to_string(i) + " produced " + std::to_string(buf.size()) +
                  " entries, symbolic phase reserved " + std::to_string(c_offs[i + 1] - c_offs[i]));
    }
    std::sort(buf.begin(), buf.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    offset_t p = c_offs[i];
    for (const auto& [c, v] : buf) {
      c_cols[p] = c;
      c_vals[p] = v;
      ++p;
    }
  };

  if (h.chosen_accumulator == SpgemmAccumulator::Dense) {
    std::vector<std::vector<Scalar>> dense(static_cast<std::size_t>(nthreads));
    std::vector<std::vector<char>> used(static_cast<std::size_t>(nthreads));
    std::vector<std::vector<ordinal_t>> touched(static_cast<std::size_t>(nthreads));
    spgemm_for_rows(h.chosen_method, m, [&](int tid, ordinal_t i) {
      auto& d = dense[tid];
      auto& u = used[tid];
      auto& t = touched[tid];
      if (d.empty()) {
        d.assign(static_cast<std::size_t>(n), Scalar{});
        u.assign(static_cast<std::size_t>(n), 0);
      }
      std::uint64_t mc = 0;
      for (offset_t ka = a_offs[i]; ka < a_offs[i + 1]; ++ka) {
        const ordinal_t r = a_cols[ka];
        const Scalar av = a_vals[ka];
        for (offset_t kb = b_offs[r]; kb < b_offs[r + 1]; ++kb) {
          const ordinal_t c = b_cols[kb];
          if (!u[c]) {
            u[c] = 1;
            t.push_back(c);
          }
          d[c] += av * b_vals[kb];
          ++mc;
        }
      }
      if (jacobi) {
        const Scalar s = -omega * dinv[i];
        ++mc;
        for (ordinal_t c : t) d[c] *= s;
        mc += t.size();
        for (offset_t kb = b_offs[i]; kb < b_offs[i + 1]; ++kb) {
          const ordinal_t c = b_cols[kb];
          if (!u[c]) {
            u[c] = 1;
            t.push_back(c);
          }
          d[c] += b_vals[kb];
        }
      }
      auto& buf = rowbuf[tid];
      buf.clear();
      for (ordinal_t c : t) {
        buf.emplace_back(c, d[c]);
        d[c] = Scalar{};
        u[c] = 0;
      }
      t.clear();
      mults[tid] += mc;
      write_row(i, buf);
    });
  } else {
    std::vector<std::optional<TwoLevelAccumulator<ordinal_t, Scalar>>> acc(static_cast<std::size_t>(nthreads));
    const std::int64_t l1 = h.l1_capacity_used > 0 ? h.l1_capacity_used : spgemm_default_l1(h.max_row_flops);
    spgemm_for_rows(h.chosen_method, m, [&](int tid, ordinal_t i) {
      auto& a = acc[tid];
      if (!a) a.emplace(l1, std::max<offset_t>(1, h.max_row_flops));
      std::uint64_t mc = 0;
      for (offset_t ka = a_offs[i]; ka < a_offs[i + 1]; ++ka) {
        const ordinal_t r = a_cols[ka];
        const Scalar av = a_vals[ka];
        for (offset_t kb = b_offs[r]; kb < b_offs[r + 1]; ++kb) {
          a->insert_add(b_cols[kb], av * b_vals[kb]);
          ++mc;
        }
      }
      if (jacobi) {
        const Scalar s = -omega * dinv[i];
        ++mc;
        a->for_each([&](ordinal_t, Scalar& v) {
          v *= s;
          ++mc;
        });
        for (offset_t kb = b_offs[i]; kb < b_offs[i + 1]; ++kb) a->insert_add(b_cols[kb], b_vals[kb]);
      }
      auto& buf = rowbuf[tid];
      buf.clear();
      a->for_each([&](ordinal_t c, Scalar v) { buf.emplace_back(c, v); });
      if (a->used_l2()) ++l2_rows[tid];
      a->clear();
      mults[tid] += mc;
      write_row(i, buf);
    });
  }

  h.multiply_count = 0;
  h.l2_rows = 0;
  for (int t = 0; t < nthreads; ++t) {
    h.multiply_count += mults[t];
    h.l2_rows += l2_rows[t];
  }
  return build_crs_unchecked(m, n, std::vector<offset_t>(c_offs), std::move(c_cols), std::move(c_vals));
}

}  // namespace detail

// Sizes C = A*B; stores row offsets and the run-time choices in the handle.
template <class Scalar>
std::span<const offset_t> spgemm_symbolic(SpgemmHandle& h, const CrsMatrix<Scalar>& A, const CrsMatrix<Scalar>& B) {
  detail::spgemm_symbolic_impl(h, A, B, false);
  return h.c_row_offsets;
}

template <class Scalar>
CrsMatrix<Scalar> spgemm_numeric(SpgemmHandle& h, const CrsMatrix<Scalar>& A, const CrsMatrix<Scalar>& B) {
  detail::spgemm_check_handle(h, A, B, false, "spgemm_numeric");
  return detail::spgemm_numeric_impl<Scalar>(h, A, B, nullptr, Scalar{});
}

// Symbolic for the Jacobi product: pattern of A*B united with B's own rows.
template <class Scalar>
std::span<const offset_t> spgemm_jacobi_symbolic(SpgemmHandle& h, const CrsMatrix<Scalar>& A,
                                                 const CrsMatrix<Scalar>& B) {
  detail::spgemm_symbolic_impl(h, A, B, true);
  return h.c_row_offsets;
}

// C = (I - omega * diag(dinv) * A) * B. Entries that cancel to zero stay in
// the pattern.
template <class Scalar>
CrsMatrix<Scalar> spgemm_jacobi_numeric(SpgemmHandle& h, Scalar omega, std::span<const Scalar> dinv,
                                        const CrsMatrix<Scalar>& A, const CrsMatrix<Scalar>& B) {
  detail::spgemm_check_dims(A, B, true);
  if (static_cast<ordinal_t>(dinv.size()) != A.num_rows()) {
    throw DimensionError("spgemm_jacobi: dinv has " + std::to_string(dinv.size()) + " entries, A has " +
                         std::to_string(A.num_rows()) + " rows");
  }
  detail::spgemm_check_handle(h, A, B, true, "spgemm_jacobi_numeric");
  return detail::spgemm_numeric_impl<Scalar>(h, A, B, dinv.data(), omega);
}

// Both phases with a throwaway handle.
template <class Scalar>
CrsMatrix<Scalar> spgemm(const CrsMatrix<Scalar>& A, const CrsMatrix<Scalar>& B) {
  SpgemmHandle h;
  spgemm_symbolic(h, A, B);
  return spgemm_numeric(h, A, B);
}

}  // namespace pkern
