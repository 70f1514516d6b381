// Copyright 2026 The pkern Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Host execution layer. Kernels express their parallelism through the
// functions here; the default backend is OpenMP, with a serial fallback when
// the translation unit is compiled without it.
//
// Two levels are exposed: flat loops over work items (rows, batch entries,
// vertices) and blocked loops that hand a contiguous [begin, end) range to a
// single task, which plays the role of a team working through a row block.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <span>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pkern {

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline void set_num_threads(int n) {
#ifdef _OPENMP
  omp_set_num_threads(std::max(1, n));
#else
  (void)n;
#endif
}

// Restores the previous thread count on scope exit.
class ScopedThreadCount {
 public:
  explicit ScopedThreadCount(int n) : previous_(max_threads()) {
    if (n > 0) set_num_threads(n);
  }
  ~ScopedThreadCount() { set_num_threads(previous_); }
  ScopedThreadCount(const ScopedThreadCount&) = delete;
  ScopedThreadCount& operator=(const ScopedThreadCount&) = delete;

 private:
  int previous_;
};

namespace detail {

// Exceptions cannot cross an OpenMP region boundary. Each iteration catches
// locally; the one thrown at the lowest iteration index is rethrown after the
// region so error reports do not depend on scheduling.
class ExceptionSlot {
 public:
  void capture(std::int64_t index) {
    std::lock_guard<std::mutex> lock(mutex_);
    if (index < index_) {
      index_ = index;
      error_ = std::current_exception();
    }
  }
  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::mutex mutex_;
  std::int64_t index_ = std::numeric_limits<std::int64_t>::max();
  std::exception_ptr error_;
};

}  // namespace detail

// Statically scheduled loop over [0, n).
template <class F>
void parallel_for(std::int64_t n, F&& f) {
  if (n <= 0) return;
  detail::ExceptionSlot slot;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (n > 1)
#endif
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      f(i);
    } catch (...) {
      slot.capture(i);
    }
  }
  slot.rethrow();
}

// Dynamically scheduled loop, `chunk` iterations per grab. Used where per
// item cost varies (SpGEMM rows, coloring worklists).
template <class F>
void parallel_for_dynamic(std::int64_t n, std::int64_t chunk, F&& f) {
  if (n <= 0) return;
  chunk = std::max<std::int64_t>(1, chunk);
  detail::ExceptionSlot slot;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, chunk) if (n > 1)
#endif
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      f(i);
    } catch (...) {
      slot.capture(i);
    }
  }
  slot.rethrow();
}

// Splits [0, n) into blocks of `block` items; f(begin, end) runs once per
// block on one thread.
template <class F>
void parallel_for_blocks(std::int64_t n, std::int64_t block, F&& f) {
  if (n <= 0) return;
  block = std::max<std::int64_t>(1, block);
  const std::int64_t nblocks = (n + block - 1) / block;
  parallel_for_dynamic(nblocks, 1, [&](std::int64_t b) {
    const std::int64_t begin = b * block;
    f(begin, std::min(n, begin + block));
  });
}

// Runs f(thread_id, num_threads) once on every thread of a parallel region.
// The team size is fixed for the region, which lets callers partition work
// deterministically per thread.
template <class F>
void parallel_region(F&& f) {
  detail::ExceptionSlot slot;
#ifdef _OPENMP
#pragma omp parallel
  {
    const int tid = omp_get_thread_num();
    try {
      f(tid, omp_get_num_threads());
    } catch (...) {
      slot.capture(tid);
    }
  }
#else
  try {
    f(0, 1);
  } catch (...) {
    slot.capture(0);
  }
#endif
  slot.rethrow();
}

// Dynamic loop where f(thread_id, i) may keep per-thread scratch indexed by
// thread_id. Iterations are handed out `chunk` at a time.
template <class F>
void parallel_for_dynamic_tid(std::int64_t n, std::int64_t chunk, F&& f) {
  if (n <= 0) return;
  chunk = std::max<std::int64_t>(1, chunk);
  std::atomic<std::int64_t> next{0};
  parallel_region([&](int tid, int) {
    for (;;) {
      const std::int64_t b = next.fetch_add(chunk, std::memory_order_relaxed);
      if (b >= n) break;
      const std::int64_t e = std::min(n, b + chunk);
      for (auto i = b; i < e; ++i) f(tid, i);
    }
  });
}

// Contiguous static partition of [0, n) into `parts` pieces; returns the
// range owned by piece `p`.
inline std::pair<std::int64_t, std::int64_t> static_partition(std::int64_t n, int parts, int p) {
  const std::int64_t base = n / parts;
  const std::int64_t extra = n % parts;
  const std::int64_t begin = p * base + std::min<std::int64_t>(p, extra);
  return {begin, begin + base + (p < extra ? 1 : 0)};
}

// In-place exclusive prefix sum. On return data[i] holds the sum of the
// original data[0..i) and the total is returned. Blocked two-pass scan when
// the array is large enough to be worth splitting.
template <class T>
T exclusive_scan_inplace(std::span<T> data) {
  const auto n = static_cast<std::int64_t>(data.size());
  constexpr std::int64_t kSerialCutoff = 1 << 16;
  if (n < kSerialCutoff || max_threads() == 1) {
    T running{};
    for (auto& v : data) {
      const T cur = v;
      v = running;
      running += cur;
    }
    return running;
  }
  const int parts = max_threads();
  std::vector<T> block_sums(static_cast<std::size_t>(parts) + 1, T{});
  parallel_for(parts, [&](std::int64_t p) {
    auto [b, e] = static_partition(n, parts, static_cast<int>(p));
    T s{};
    for (std::int64_t i = b; i < e; ++i) s += data[i];
    block_sums[p + 1] = s;
  });
  for (int p = 0; p < parts; ++p) block_sums[p + 1] += block_sums[p];
  parallel_for(parts, [&](std::int64_t p) {
    auto [b, e] = static_partition(n, parts, static_cast<int>(p));
    T running = block_sums[p];
    for (std::int64_t i = b; i < e; ++i) {
      const T cur = data[i];
      data[i] = running;
      running += cur;
    }
  });
  return block_sums[parts];
}

// Indices i in [0, n) with keep(i) true, in ascending order. Built from a
// prefix sum over per-block counts so the output order is independent of
// the thread count.
template <class Index, class Pred>
std::vector<Index> compact_indices(std::int64_t n, Pred&& keep) {
  if (n <= 0) return {};
  constexpr std::int64_t kBlock = 4096;
  const std::int64_t nblocks = (n + kBlock - 1) / kBlock;
  std::vector<std::int64_t> counts(static_cast<std::size_t>(nblocks) + 1, 0);
  parallel_for(nblocks, [&](std::int64_t b) {
    const std::int64_t end = std::min(n, (b + 1) * kBlock);
    std::int64_t c = 0;
    for (std::int64_t i = b * kBlock; i < end; ++i) c += keep(i) ? 1 : 0;
    counts[b] = c;
  });
  const std::int64_t total = exclusive_scan_inplace(std::span<std::int64_t>(counts));
  std::vector<Index> out(static_cast<std::size_t>(total));
  parallel_for(nblocks, [&](std::int64_t b) {
    const std::int64_t end = std::min(n, (b + 1) * kBlock);
    std::int64_t pos = counts[b];
    for (std::int64_t i = b * kBlock; i < end; ++i) {
      if (keep(i)) out[pos++] = static_cast<Index>(i);
    }
  });
  return out;
}

// Thread count from the PKERN_NUM_THREADS environment variable, or 0 when
// unset / unparsable.
inline int threads_from_environment() {
  const char* v = std::getenv("PKERN_NUM_THREADS");
  if (v == nullptr) return 0;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (end == v || n <= 0) return 0;
  return static_cast<int>(n);
}

}  // namespace pkern
