// Copyright 2026 The pkern Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Kernel handles. A handle carries the run-time algorithm choice for one
// kernel family together with whatever its symbolic phase produced, keyed by
// the fingerprints of the patterns it was computed from. Kernels refuse to
// reuse state whose fingerprints disagree with the operands.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pkern/crs.hpp"
#include "pkern/error.hpp"
#include "pkern/stencil.hpp"
#include "pkern/types.hpp"

namespace pkern {

namespace detail {

inline void check_fingerprint(const PatternFingerprint& stored, const PatternFingerprint& actual,
                              const char* kernel, const char* operand) {
  if (!(stored == actual)) {
    throw StaleHandleError(std::string(kernel) + ": pattern of " + operand +
                           " differs from the one the symbolic phase was computed for");
  }
}

}  // namespace detail

struct SpmvHandle {
  // Rows per scheduling unit. 1 maps to a static row-parallel loop.
  ordinal_t rows_per_task = 1;

  // Result of checking a matrix against a stencil, done once per pattern.
  struct StructuredState {
    PatternFingerprint fingerprint;
    StencilSpec spec;
    std::vector<std::int64_t> offsets;
  };
  std::optional<StructuredState> structured;
};

enum class SpgemmAccumulator { Auto, Hashmap, Dense };
enum class SpgemmParallelMethod { Auto, RowBlocks, SingleRow };

inline const char* to_string(SpgemmAccumulator a) {
  switch (a) {
    case SpgemmAccumulator::Auto: return "auto";
    case SpgemmAccumulator::Hashmap: return "hashmap";
    case SpgemmAccumulator::Dense: return "dense";
  }
  return "?";
}

inline const char* to_string(SpgemmParallelMethod m) {
  switch (m) {
    case SpgemmParallelMethod::Auto: return "auto";
    case SpgemmParallelMethod::RowBlocks: return "row-blocks";
    case SpgemmParallelMethod::SingleRow: return "single-row";
  }
  return "?";
}

struct SpgemmHandle {
  // Options.
  SpgemmAccumulator accumulator = SpgemmAccumulator::Auto;
  SpgemmParallelMethod method = SpgemmParallelMethod::Auto;
  bool use_compression = true;
  // Entries in the first-level hashmap; 0 derives it from the row FLOP
  // estimate.
  int l1_capacity = 0;

  // Symbolic state.
  bool symbolic_done = false;
  bool jacobi_pattern = false;
  PatternFingerprint a_fingerprint;
  PatternFingerprint b_fingerprint;
  std::vector<offset_t> c_row_offsets;
  SpgemmAccumulator chosen_accumulator = SpgemmAccumulator::Hashmap;
  SpgemmParallelMethod chosen_method = SpgemmParallelMethod::SingleRow;
  offset_t max_row_flops = 0;
  offset_t total_flops = 0;
  int l1_capacity_used = 0;

  // Instrumentation from the most recent call.
  std::uint64_t multiply_count = 0;
  std::int64_t l2_rows = 0;

  offset_t c_nnz() const { return c_row_offsets.empty() ? 0 : c_row_offsets.back(); }
};

enum class SpaddMerge { Sequential, Bitonic };

struct SpaddHandle {
  // Per-row merge used on sorted input.
  SpaddMerge merge = SpaddMerge::Sequential;

  bool symbolic_done = false;
  bool sorted_input = false;
  ordinal_t num_rows = 0;
  ordinal_t num_cols = 0;
  PatternFingerprint a_fingerprint;
  PatternFingerprint b_fingerprint;
  std::vector<offset_t> c_row_offsets;
  // Row-local destination slot in C for every entry of A and of B.
  std::vector<ordinal_t> a_pos;
  std::vector<ordinal_t> b_pos;

  std::uint64_t multiply_count = 0;

  offset_t c_nnz() const { return c_row_offsets.empty() ? 0 : c_row_offsets.back(); }
};

// Rows grouped into dependency levels. Consecutive thin levels may be
// chained into one group that runs as a single sequential task.
struct LevelSchedule {
  struct Group {
    ordinal_t first_level = 0;
    ordinal_t end_level = 0;
    bool chained = false;
  };

  ordinal_t num_levels = 0;
  std::vector<offset_t> level_offsets;
  std::vector<ordinal_t> row_order;
  std::vector<ordinal_t> row_level;
  std::vector<Group> groups;

  std::span<const ordinal_t> level_rows(ordinal_t level) const {
    return std::span<const ordinal_t>(row_order)
        .subspan(static_cast<std::size_t>(level_offsets[level]),
                 static_cast<std::size_t>(level_offsets[level + 1] - level_offsets[level]));
  }
};

struct SptrsvHandle {
  Uplo uplo = Uplo::Lower;
  bool chaining = true;
  // Levels with fewer rows than this are chained.
  ordinal_t chain_threshold = 32;

  bool symbolic_done = false;
  PatternFingerprint fingerprint;
  LevelSchedule schedule;
  std::vector<offset_t> diag_pos;
};

using color_t = std::int32_t;

enum class ColoringAlgorithm { VB, EB, VB2, NB };

inline const char* to_string(ColoringAlgorithm a) {
  switch (a) {
    case ColoringAlgorithm::VB: return "VB";
    case ColoringAlgorithm::EB: return "EB";
    case ColoringAlgorithm::VB2: return "VB2";
    case ColoringAlgorithm::NB: return "NB";
  }
  return "?";
}

// Snapshot handed to ColoringHandle::nb_observer after each net-based
// gather: forbidden[i] is the window mask computed for pending[i], bit b
// standing for color window_base + b + 1.
struct NbRoundState {
  int round = 0;
  color_t window_base = 0;
  std::span<const ordinal_t> pending;
  std::span<const std::uint64_t> forbidden;
  std::span<const color_t> colors;
};

struct ColoringHandle {
  ColoringAlgorithm algorithm = ColoringAlgorithm::VB;

  // Set when the input was not structurally symmetric and A + A^T was used.
  bool input_symmetrized = false;
  int rounds = 0;
  std::uint64_t neighbor_visits = 0;
  std::vector<std::uint64_t> visits_per_round;

  std::function<void(const NbRoundState&)> nb_observer;
};

// Aggregate handle: one sub-handle per kernel family, created on demand.
class KernelHandle {
 public:
  SpmvHandle& create_spmv_handle() { return spmv_.emplace(); }
  SpgemmHandle& create_spgemm_handle(SpgemmAccumulator acc = SpgemmAccumulator::Auto,
                                     bool use_compression = true) {
    auto& h = spgemm_.emplace();
    h.accumulator = acc;
    h.use_compression = use_compression;
    return h;
  }
  SpaddHandle& create_spadd_handle(SpaddMerge merge = SpaddMerge::Sequential) {
    auto& h = spadd_.emplace();
    h.merge = merge;
    return h;
  }
  SptrsvHandle& create_sptrsv_handle(Uplo uplo, bool chaining = true, ordinal_t chain_threshold = 32) {
    auto& h = sptrsv_.emplace();
    h.uplo = uplo;
    h.chaining = chaining;
    h.chain_threshold = chain_threshold;
    return h;
  }
  ColoringHandle& create_coloring_handle(ColoringAlgorithm algo) {
    auto& h = coloring_.emplace();
    h.algorithm = algo;
    return h;
  }

  SpmvHandle& spmv() { return get(spmv_, "spmv"); }
  SpgemmHandle& spgemm() { return get(spgemm_, "spgemm"); }
  SpaddHandle& spadd() { return get(spadd_, "spadd"); }
  SptrsvHandle& sptrsv() { return get(sptrsv_, "sptrsv"); }
  ColoringHandle& coloring() { return get(coloring_, "coloring"); }

  void destroy_spgemm_handle() { spgemm_.reset(); }
  void destroy_spadd_handle() { spadd_.reset(); }
  void destroy_sptrsv_handle() { sptrsv_.reset(); }

 private:
  template <class H>
  static H& get(std::optional<H>& slot, const char* name) {
    if (!slot) throw Error(std::string(name) + " handle has not been created");
    return *slot;
  }

  std::optional<SpmvHandle> spmv_;
  std::optional<SpgemmHandle> spgemm_;
  std::optional<SpaddHandle> spadd_;
  std::optional<SptrsvHandle> sptrsv_;
  std::optional<ColoringHandle> coloring_;
};

}  // namespace pkern
