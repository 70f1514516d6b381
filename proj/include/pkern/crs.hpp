// Copyright 2026 The pkern Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pkern/error.hpp"
#include "pkern/parallel.hpp"
#include "pkern/types.hpp"

namespace pkern {

// Identifies a sparsity pattern for symbolic-state reuse. The checksum
// covers both the row offsets and the column indices.
struct PatternFingerprint {
  ordinal_t num_rows = 0;
  ordinal_t num_cols = 0;
  offset_t nnz = 0;
  std::uint64_t checksum = 0;

  bool operator==(const PatternFingerprint&) const = default;
};

namespace detail {

inline std::uint64_t mix64(std::uint64_t h, std::uint64_t x) {
  h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  h *= 0xff51afd7ed558ccdULL;
  return h ^ (h >> 33);
}

}  // namespace detail

// Row offsets + column indices. Immutable once built; every column index is
// range-checked at construction and the sorted/merged row properties are
// recorded so kernels do not need to rescan.
class StaticCrsGraph {
 public:
  StaticCrsGraph() : row_offsets_{0} { finalize(); }

  // Validating constructor. Throws StructureError naming the first offending
  // row or entry.
  static StaticCrsGraph build(ordinal_t num_rows, ordinal_t num_cols,
                              std::vector<offset_t> row_offsets,
                              std::vector<ordinal_t> col_indices) {
    if (num_rows < 0 || num_cols < 0) {
      throw StructureError("negative matrix dimension", -1);
    }
    if (row_offsets.size() != static_cast<std::size_t>(num_rows) + 1) {
      throw StructureError("row offsets length " + std::to_string(row_offsets.size()) +
                               " does not match num_rows+1 = " + std::to_string(num_rows + 1),
                           -1);
    }
    if (row_offsets[0] != 0) {
      throw StructureError("row offsets must start at 0", 0);
    }
    for (ordinal_t i = 0; i < num_rows; ++i) {
      if (row_offsets[i + 1] < row_offsets[i]) {
        throw StructureError("non-monotone row offset at row " + std::to_string(i), i);
      }
    }
    if (static_cast<offset_t>(col_indices.size()) != row_offsets[num_rows]) {
      throw StructureError("column index array length " + std::to_string(col_indices.size()) +
                               " does not match row_offsets[num_rows] = " +
                               std::to_string(row_offsets[num_rows]),
                           -1);
    }
    for (std::size_t k = 0; k < col_indices.size(); ++k) {
      if (col_indices[k] < 0 || col_indices[k] >= num_cols) {
        throw StructureError("column " + std::to_string(col_indices[k]) + " out of range at entry " +
                                 std::to_string(k),
                             static_cast<std::int64_t>(k));
      }
    }
    return StaticCrsGraph(num_rows, num_cols, std::move(row_offsets), std::move(col_indices));
  }

  // For kernel outputs that are valid by construction.
  static StaticCrsGraph build_unchecked(ordinal_t num_rows, ordinal_t num_cols,
                                        std::vector<offset_t> row_offsets,
                                        std::vector<ordinal_t> col_indices) {
    return StaticCrsGraph(num_rows, num_cols, std::move(row_offsets), std::move(col_indices));
  }

  ordinal_t num_rows() const noexcept { return num_rows_; }
  ordinal_t num_cols() const noexcept { return num_cols_; }
  offset_t nnz() const noexcept { return row_offsets_.back(); }

  std::span<const offset_t> row_offsets() const noexcept { return row_offsets_; }
  std::span<const ordinal_t> col_indices() const noexcept { return col_indices_; }

  std::span<const ordinal_t> row(ordinal_t i) const noexcept {
    return std::span<const ordinal_t>(col_indices_).subspan(
        static_cast<std::size_t>(row_offsets_[i]),
        static_cast<std::size_t>(row_offsets_[i + 1] - row_offsets_[i]));
  }
  ordinal_t degree(ordinal_t i) const noexcept {
    return static_cast<ordinal_t>(row_offsets_[i + 1] - row_offsets_[i]);
  }

  bool sorted_rows() const noexcept { return sorted_rows_; }
  bool merged_rows() const noexcept { return merged_rows_; }
  const PatternFingerprint& fingerprint() const noexcept { return fingerprint_; }

 private:
  StaticCrsGraph(ordinal_t num_rows, ordinal_t num_cols, std::vector<offset_t> row_offsets,
                 std::vector<ordinal_t> col_indices)
      : num_rows_(num_rows),
        num_cols_(num_cols),
        row_offsets_(std::move(row_offsets)),
        col_indices_(std::move(col_indices)) {
    finalize();
  }

  void finalize() {
    sorted_rows_ = true;
    merged_rows_ = true;
    bool need_marker = false;
    for (ordinal_t i = 0; i < num_rows_ && (sorted_rows_ || merged_rows_); ++i) {
      for (offset_t k = row_offsets_[i] + 1; k < row_offsets_[i + 1]; ++k) {
        if (col_indices_[k] < col_indices_[k - 1]) {
          sorted_rows_ = false;
        } else if (col_indices_[k] == col_indices_[k - 1]) {
          merged_rows_ = false;
        }
      }
    }
    if (!sorted_rows_ && merged_rows_) need_marker = true;
    if (need_marker) {
      // Duplicates in unsorted rows are not necessarily adjacent.
      std::vector<ordinal_t> last_row(static_cast<std::size_t>(num_cols_), -1);
      for (ordinal_t i = 0; i < num_rows_ && merged_rows_; ++i) {
        for (offset_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
          auto& seen = last_row[col_indices_[k]];
          if (seen == i) {
            merged_rows_ = false;
            break;
          }
          seen = i;
        }
      }
    }
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (offset_t v : row_offsets_) h = detail::mix64(h, static_cast<std::uint64_t>(v));
    for (ordinal_t c : col_indices_) h = detail::mix64(h, static_cast<std::uint32_t>(c));
    fingerprint_ = {num_rows_, num_cols_, nnz(), h};
  }

  ordinal_t num_rows_ = 0;
  ordinal_t num_cols_ = 0;
  std::vector<offset_t> row_offsets_;
  std::vector<ordinal_t> col_indices_;
  bool sorted_rows_ = true;
  bool merged_rows_ = true;
  PatternFingerprint fingerprint_;
};

template <class Scalar>
struct CrsRowView {
  std::span<const ordinal_t> cols;
  std::span<const Scalar> vals;
  std::size_t size() const noexcept { return cols.size(); }
};

// Compressed-row sparse matrix. The graph is shared between matrices that
// differ only in values (see with_values), so pattern-keyed symbolic state
// carries over without copying the structure.
template <class Scalar = double>
class CrsMatrix {
 public:
  using scalar_type = Scalar;

  CrsMatrix() : graph_(std::make_shared<const StaticCrsGraph>()) {}

  CrsMatrix(std::shared_ptr<const StaticCrsGraph> graph, std::vector<Scalar> values)
      : graph_(std::move(graph)), values_(std::move(values)) {
    if (static_cast<offset_t>(values_.size()) != graph_->nnz()) {
      throw StructureError("values length " + std::to_string(values_.size()) +
                               " does not match nnz = " + std::to_string(graph_->nnz()),
                           -1);
    }
  }

  CrsMatrix(StaticCrsGraph graph, std::vector<Scalar> values)
      : CrsMatrix(std::make_shared<const StaticCrsGraph>(std::move(graph)), std::move(values)) {}

  ordinal_t num_rows() const noexcept { return graph_->num_rows(); }
  ordinal_t num_cols() const noexcept { return graph_->num_cols(); }
  offset_t nnz() const noexcept { return graph_->nnz(); }

  const StaticCrsGraph& graph() const noexcept { return *graph_; }
  const std::shared_ptr<const StaticCrsGraph>& shared_graph() const noexcept { return graph_; }

  std::span<const offset_t> row_offsets() const noexcept { return graph_->row_offsets(); }
  std::span<const ordinal_t> col_indices() const noexcept { return graph_->col_indices(); }
  std::span<const Scalar> values() const noexcept { return values_; }

  CrsRowView<Scalar> row(ordinal_t i) const noexcept {
    const auto offs = row_offsets();
    const auto b = static_cast<std::size_t>(offs[i]);
    const auto n = static_cast<std::size_t>(offs[i + 1] - offs[i]);
    return {col_indices().subspan(b, n), std::span<const Scalar>(values_).subspan(b, n)};
  }

  bool sorted_rows() const noexcept { return graph_->sorted_rows(); }
  bool merged_rows() const noexcept { return graph_->merged_rows(); }
  const PatternFingerprint& fingerprint() const noexcept { return graph_->fingerprint(); }

  // Same pattern, new values.
  CrsMatrix with_values(std::vector<Scalar> values) const { return CrsMatrix(graph_, std::move(values)); }

 private:
  std::shared_ptr<const StaticCrsGraph> graph_;
  std::vector<Scalar> values_;
};

// Validated construction from raw CRS arrays.
template <class Scalar>
CrsMatrix<Scalar> build_crs(ordinal_t num_rows, ordinal_t num_cols, std::vector<offset_t> row_offsets,
                            std::vector<ordinal_t> col_indices, std::vector<Scalar> values) {
  if (values.size() != col_indices.size()) {
    throw StructureError("values length " + std::to_string(values.size()) +
                             " does not match column index length " + std::to_string(col_indices.size()),
                         -1);
  }
  return CrsMatrix<Scalar>(
      StaticCrsGraph::build(num_rows, num_cols, std::move(row_offsets), std::move(col_indices)),
      std::move(values));
}

template <class Scalar>
CrsMatrix<Scalar> build_crs_unchecked(ordinal_t num_rows, ordinal_t num_cols,
                                      std::vector<offset_t> row_offsets,
                                      std::vector<ordinal_t> col_indices, std::vector<Scalar> values) {
  return CrsMatrix<Scalar>(StaticCrsGraph::build_unchecked(num_rows, num_cols, std::move(row_offsets),
                                                           std::move(col_indices)),
                           std::move(values));
}

// Coordinate triplets to CRS. Entry order within a row follows input order;
// duplicates are kept.
template <class Scalar>
CrsMatrix<Scalar> from_triplets(ordinal_t num_rows, ordinal_t num_cols, std::span<const ordinal_t> rows,
                                std::span<const ordinal_t> cols, std::span<const Scalar> vals) {
  if (rows.size() != cols.size() || rows.size() != vals.size()) {
    throw DimensionError("triplet arrays differ in length");
  }
  std::vector<offset_t> offsets(static_cast<std::size_t>(num_rows) + 1, 0);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k] < 0 || rows[k] >= num_rows) {
      throw StructureError("row " + std::to_string(rows[k]) + " out of range at entry " + std::to_string(k),
                           static_cast<std::int64_t>(k));
    }
    ++offsets[rows[k] + 1];
  }
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  std::vector<offset_t> fill(offsets.begin(), offsets.end() - 1);
  std::vector<ordinal_t> out_cols(rows.size());
  std::vector<Scalar> out_vals(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const offset_t p = fill[rows[k]]++;
    out_cols[p] = cols[k];
    out_vals[p] = vals[k];
  }
  return build_crs(num_rows, num_cols, std::move(offsets), std::move(out_cols), std::move(out_vals));
}

template <class Scalar>
CrsMatrix<Scalar> from_triplets(ordinal_t num_rows, ordinal_t num_cols, const std::vector<ordinal_t>& rows,
                                const std::vector<ordinal_t>& cols, const std::vector<Scalar>& vals) {
  return from_triplets(num_rows, num_cols, std::span<const ordinal_t>(rows), std::span<const ordinal_t>(cols),
                       std::span<const Scalar>(vals));
}

// Sorts every row by column and merges duplicate columns by addition.
// Explicit zeros are kept.
template <class Scalar>
CrsMatrix<Scalar> canonicalize(const CrsMatrix<Scalar>& m) {
  if (m.sorted_rows() && m.merged_rows()) return m;
  const ordinal_t nrows = m.num_rows();
  std::vector<offset_t> offsets(static_cast<std::size_t>(nrows) + 1, 0);
  std::vector<std::vector<std::pair<ordinal_t, Scalar>>> scratch(static_cast<std::size_t>(max_threads()));

  auto sorted_row = [&](ordinal_t i, std::vector<std::pair<ordinal_t, Scalar>>& buf) {
    const auto r = m.row(i);
    buf.clear();
    for (std::size_t k = 0; k < r.size(); ++k) buf.emplace_back(r.cols[k], r.vals[k]);
    std::stable_sort(buf.begin(), buf.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::size_t out = 0;
    for (std::size_t k = 0; k < buf.size(); ++k) {
      if (out > 0 && buf[out - 1].first == buf[k].first) {
        buf[out - 1].second += buf[k].second;
      } else {
        buf[out++] = buf[k];
      }
    }
    buf.resize(out);
  };

  parallel_region([&](int tid, int nthreads) {
    auto [b, e] = static_partition(nrows, nthreads, tid);
    auto& buf = scratch[tid];
    for (auto i = b; i < e; ++i) {
      sorted_row(static_cast<ordinal_t>(i), buf);
      offsets[i] = static_cast<offset_t>(buf.size());
    }
  });
  const offset_t nnz = exclusive_scan_inplace(std::span<offset_t>(offsets).first(static_cast<std::size_t>(nrows)));
  offsets[nrows] = nnz;
  std::vector<ordinal_t> cols(static_cast<std::size_t>(nnz));
  std::vector<Scalar> vals(static_cast<std::size_t>(nnz));
  parallel_region([&](int tid, int nthreads) {
    auto [b, e] = static_partition(nrows, nthreads, tid);
    auto& buf = scratch[tid];
    for (auto i = b; i < e; ++i) {
      sorted_row(static_cast<ordinal_t>(i), buf);
      offset_t p = offsets[i];
      for (const auto& [c, v] : buf) {
        cols[p] = c;
        vals[p] = v;
        ++p;
      }
    }
  });
  return build_crs_unchecked(nrows, m.num_cols(), std::move(offsets), std::move(cols), std::move(vals));
}

// Plain (non-conjugating) transpose; the result is canonical.
template <class Scalar>
CrsMatrix<Scalar> transpose(const CrsMatrix<Scalar>& m) {
  const ordinal_t nrows = m.num_rows();
  const ordinal_t ncols = m.num_cols();
  const auto offs = m.row_offsets();
  const auto cols = m.col_indices();
  const auto vals = m.values();
  std::vector<offset_t> t_offsets(static_cast<std::size_t>(ncols) + 1, 0);
  for (ordinal_t c : cols) ++t_offsets[c + 1];
  std::partial_sum(t_offsets.begin(), t_offsets.end(), t_offsets.begin());
  std::vector<offset_t> fill(t_offsets.begin(), t_offsets.end() - 1);
  std::vector<ordinal_t> t_cols(cols.size());
  std::vector<Scalar> t_vals(cols.size());
  for (ordinal_t i = 0; i < nrows; ++i) {
    for (offset_t k = offs[i]; k < offs[i + 1]; ++k) {
      const offset_t p = fill[cols[k]]++;
      t_cols[p] = i;
      t_vals[p] = vals[k];
    }
  }
  auto t = build_crs_unchecked(ncols, nrows, std::move(t_offsets), std::move(t_cols), std::move(t_vals));
  // Rows come out ascending; only duplicate entries can remain.
  return t.merged_rows() ? t : canonicalize(t);
}

// Pattern transpose with duplicate entries collapsed; rows are sorted.
inline StaticCrsGraph transpose(const StaticCrsGraph& g) {
  const ordinal_t ncols = g.num_cols();
  const auto offs = g.row_offsets();
  const auto cols = g.col_indices();
  std::vector<offset_t> t_offsets(static_cast<std::size_t>(ncols) + 1, 0);
  for (ordinal_t c : cols) ++t_offsets[c + 1];
  std::partial_sum(t_offsets.begin(), t_offsets.end(), t_offsets.begin());
  std::vector<offset_t> fill(t_offsets.begin(), t_offsets.end() - 1);
  std::vector<ordinal_t> t_cols(cols.size());
  for (ordinal_t i = 0; i < g.num_rows(); ++i) {
    for (offset_t k = offs[i]; k < offs[i + 1]; ++k) t_cols[fill[cols[k]]++] = i;
  }
  if (!g.merged_rows()) {
    // Collapse adjacent repeats (rows are ascending here).
    std::vector<offset_t> m_offsets(t_offsets.size(), 0);
    offset_t out = 0;
    for (ordinal_t j = 0; j < ncols; ++j) {
      const offset_t b = t_offsets[j];
      m_offsets[j] = out;
      for (offset_t k = b; k < t_offsets[j + 1]; ++k) {
        if (k == b || t_cols[k] != t_cols[k - 1]) t_cols[out++] = t_cols[k];
      }
    }
    m_offsets[ncols] = out;
    t_cols.resize(static_cast<std::size_t>(out));
    t_offsets = std::move(m_offsets);
  }
  return StaticCrsGraph::build_unchecked(ncols, g.num_rows(), std::move(t_offsets), std::move(t_cols));
}

}  // namespace pkern
