// Copyright 2026 The pkern Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Sorting networks and a serial LSD radix sort.
//
// bitonic_sort handles any length: the array is treated as if it were
// padded to the next power of two with elements that compare greater than
// everything. A compare-exchange whose upper partner is past the end is a
// no-op, so the padding never needs to exist.

#include <algorithm>
#include <bit>
#include <cassert>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "pkern/error.hpp"
#include "pkern/parallel.hpp"

namespace pkern {

struct SortSegment {
  std::int64_t offset = 0;
  std::int64_t length = 0;
};

namespace detail {

struct NoCompanion {};

template <class K, class V, class Cmp>
inline void compare_exchange(std::span<K> keys, std::span<V> comp, std::int64_t i, std::int64_t p, Cmp& cmp) {
  if (cmp(keys[p], keys[i])) {
    std::swap(keys[i], keys[p]);
    if (!comp.empty()) std::swap(comp[i], comp[p]);
  }
}

// One stage of the ascending-only network over a virtual length-N array.
// half == 0 denotes the flip step of block size `block`; otherwise a
// half-cleaner with distance `half`.
template <class K, class V, class Cmp>
void bitonic_stage(std::span<K> keys, std::span<V> comp, std::int64_t npow2, std::int64_t block,
                   std::int64_t half, Cmp& cmp, bool parallel) {
  const std::int64_t n = static_cast<std::int64_t>(keys.size());
  auto pair = [&](std::int64_t t) {
    std::int64_t i, p;
    if (half == 0) {
      const std::int64_t h = block / 2;
      const std::int64_t base = (t / h) * block;
      const std::int64_t off = t % h;
      i = base + off;
      p = base + block - 1 - off;
    } else {
      i = (t / half) * 2 * half + t % half;
      p = i + half;
    }
    if (p < n) compare_exchange(keys, comp, i, p, cmp);
  };
  const std::int64_t pairs = npow2 / 2;
  if (parallel) {
    parallel_for(pairs, pair);
  } else {
    for (std::int64_t t = 0; t < pairs; ++t) pair(t);
  }
}

template <class K, class V, class Cmp>
void bitonic_sort_impl(std::span<K> keys, std::span<V> comp, Cmp& cmp, bool allow_parallel) {
  const auto n = static_cast<std::int64_t>(keys.size());
  if (n < 2) return;
  constexpr std::int64_t kParallelCutoff = 1 << 15;
  const bool parallel = allow_parallel && n >= kParallelCutoff && max_threads() > 1;
  const auto npow2 = static_cast<std::int64_t>(std::bit_ceil(static_cast<std::uint64_t>(n)));
  for (std::int64_t block = 2; block <= npow2; block *= 2) {
    bitonic_stage(keys, comp, npow2, block, 0, cmp, parallel);
    for (std::int64_t half = block / 4; half >= 1; half /= 2) {
      bitonic_stage(keys, comp, npow2, block, half, cmp, parallel);
    }
  }
}

template <class V>
void check_companion(std::size_t nkeys, std::span<V> comp) {
  if (!comp.empty() && comp.size() != nkeys) {
    throw DimensionError("companion array has " + std::to_string(comp.size()) + " elements, keys have " +
                         std::to_string(nkeys));
  }
}

}  // namespace detail

// In-place bitonic sort, O(n log^2 n) compare-exchanges. Not stable.
template <class K, class Cmp = std::less<K>>
void bitonic_sort(std::span<K> keys, Cmp cmp = Cmp{}) {
  detail::bitonic_sort_impl(keys, std::span<detail::NoCompanion>{}, cmp, true);
}

// Same, permuting `companion` along with the keys.
template <class K, class V, class Cmp = std::less<K>>
void bitonic_sort(std::span<K> keys, std::span<V> companion, Cmp cmp = Cmp{}) {
  detail::check_companion(keys.size(), companion);
  detail::bitonic_sort_impl(keys, companion, cmp, true);
}

template <class K, class Cmp = std::less<K>>
void bitonic_sort(std::vector<K>& keys, Cmp cmp = Cmp{}) {
  bitonic_sort(std::span<K>(keys), cmp);
}

namespace detail {

inline void check_segments(std::int64_t n, std::span<const SortSegment> segs) {
  std::vector<std::int64_t> order(segs.size());
  for (std::size_t s = 0; s < segs.size(); ++s) {
    if (segs[s].offset < 0 || segs[s].length < 0 || segs[s].offset + segs[s].length > n) {
      throw StructureError("segment " + std::to_string(s) + " lies outside the key array",
                           static_cast<std::int64_t>(s));
    }
    order[s] = static_cast<std::int64_t>(s);
  }
  std::sort(order.begin(), order.end(), [&](auto a, auto b) {
    return segs[a].offset != segs[b].offset ? segs[a].offset < segs[b].offset : a < b;
  });
  std::int64_t end = 0;
  std::int64_t prev = -1;
  for (auto s : order) {
    if (segs[s].length == 0) continue;
    if (segs[s].offset < end) {
      throw StructureError("segment " + std::to_string(s) + " overlaps segment " + std::to_string(prev), s);
    }
    end = segs[s].offset + segs[s].length;
    prev = s;
  }
}

template <class K, class V, class Cmp>
void segmented_impl(std::span<K> keys, std::span<V> comp, std::span<const SortSegment> segs, Cmp& cmp) {
  check_segments(static_cast<std::int64_t>(keys.size()), segs);
  auto sub = [&](const SortSegment& s) {
    auto k = keys.subspan(static_cast<std::size_t>(s.offset), static_cast<std::size_t>(s.length));
    auto c = comp.empty() ? comp : comp.subspan(static_cast<std::size_t>(s.offset), static_cast<std::size_t>(s.length));
    return std::pair{k, c};
  };
  const auto nseg = static_cast<std::int64_t>(segs.size());
  if (nseg >= max_threads()) {
    // Enough segments to occupy every thread: one segment per task.
    parallel_for_dynamic(nseg, 1, [&](std::int64_t s) {
      auto [k, c] = sub(segs[s]);
      Cmp local = cmp;
      bitonic_sort_impl(k, c, local, false);
    });
  } else {
    for (const auto& s : segs) {
      auto [k, c] = sub(s);
      bitonic_sort_impl(k, c, cmp, true);
    }
  }
}

}  // namespace detail

// Sorts each segment independently; data outside the segments is untouched.
// Overlapping segments raise StructureError.
template <class K, class Cmp = std::less<K>>
void bitonic_sort_segmented(std::span<K> keys, std::span<const SortSegment> segments, Cmp cmp = Cmp{}) {
  detail::segmented_impl(keys, std::span<detail::NoCompanion>{}, segments, cmp);
}

template <class K, class V, class Cmp = std::less<K>>
void bitonic_sort_segmented(std::span<K> keys, std::span<V> companion, std::span<const SortSegment> segments,
                            Cmp cmp = Cmp{}) {
  detail::check_companion(keys.size(), companion);
  detail::segmented_impl(keys, companion, segments, cmp);
}

namespace detail {

template <class K, class V, class Cmp>
int bitonic_merge_impl(std::span<K> keys, std::span<V> comp, Cmp& cmp) {
  const auto n = static_cast<std::int64_t>(keys.size());
  if (n < 2) return 0;
  // End of the non-descending run; everything after it is non-ascending.
  std::int64_t peak = 0;
  while (peak + 1 < n && !cmp(keys[peak + 1], keys[peak])) ++peak;
#ifndef NDEBUG
  for (std::int64_t i = peak + 1; i + 1 < n; ++i) {
    assert(!cmp(keys[i], keys[i + 1]) && "bitonic_merge: input is not ascending-then-descending");
  }
#endif
  // Pad to a power of two with "+infinity" (index -1) placed right after the
  // peak, which keeps the sequence bitonic.
  const auto npow2 = static_cast<std::int64_t>(std::bit_ceil(static_cast<std::uint64_t>(n)));
  std::vector<std::int64_t> idx(static_cast<std::size_t>(npow2), -1);
  for (std::int64_t i = 0; i <= peak; ++i) idx[i] = i;
  const std::int64_t pad = npow2 - n;
  for (std::int64_t i = peak + 1; i < n; ++i) idx[i + pad] = i;

  auto less = [&](std::int64_t a, std::int64_t b) {
    if (b < 0) return a >= 0;
    if (a < 0) return false;
    return cmp(keys[a], keys[b]);
  };
  int stages = 0;
  for (std::int64_t half = npow2 / 2; half >= 1; half /= 2) {
    auto step = [&](std::int64_t t) {
      const std::int64_t i = (t / half) * 2 * half + t % half;
      const std::int64_t p = i + half;
      if (less(idx[p], idx[i])) std::swap(idx[i], idx[p]);
    };
    if (npow2 >= (1 << 15) && max_threads() > 1) {
      parallel_for(npow2 / 2, step);
    } else {
      for (std::int64_t t = 0; t < npow2 / 2; ++t) step(t);
    }
    ++stages;
  }
  std::vector<K> k2(static_cast<std::size_t>(n));
  for (std::int64_t t = 0; t < n; ++t) k2[t] = keys[idx[t]];
  if (!comp.empty()) {
    std::vector<V> c2(static_cast<std::size_t>(n));
    for (std::int64_t t = 0; t < n; ++t) c2[t] = comp[idx[t]];
    std::copy(c2.begin(), c2.end(), comp.begin());
  }
  std::copy(k2.begin(), k2.end(), keys.begin());
  return stages;
}

}  // namespace detail

// Sorts a bitonic input (an ascending run followed by a descending run, e.g.
// run A followed by run B reversed). Returns the number of half-cleaner
// stages applied, ceil(log2(n)).
template <class K, class Cmp = std::less<K>>
int bitonic_merge(std::span<K> keys, Cmp cmp = Cmp{}) {
  return detail::bitonic_merge_impl(keys, std::span<detail::NoCompanion>{}, cmp);
}

template <class K, class V, class Cmp = std::less<K>>
int bitonic_merge(std::span<K> keys, std::span<V> companion, Cmp cmp = Cmp{}) {
  detail::check_companion(keys.size(), companion);
  return detail::bitonic_merge_impl(keys, companion, cmp);
}

namespace detail {

template <class K, class V>
void radix_sort_impl(std::span<K> keys, std::span<V> comp, std::vector<K>& kbuf, std::vector<V>& cbuf) {
  static_assert(std::is_unsigned_v<K>, "radix_sort needs unsigned integer keys");
  const std::size_t n = keys.size();
  if (n < 2) return;
  kbuf.resize(n);
  if (!comp.empty()) cbuf.resize(n);
  K* src = keys.data();
  K* dst = kbuf.data();
  V* csrc = comp.empty() ? nullptr : comp.data();
  V* cdst = comp.empty() ? nullptr : cbuf.data();
  for (unsigned pass = 0; pass < sizeof(K); ++pass) {
    const unsigned shift = pass * 8;
    std::size_t count[257] = {};
    for (std::size_t i = 0; i < n; ++i) ++count[((src[i] >> shift) & 0xFF) + 1];
    if (count[((src[0] >> shift) & 0xFF) + 1] == n) continue;  // digit constant
    for (int d = 0; d < 256; ++d) count[d + 1] += count[d];
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t p = count[(src[i] >> shift) & 0xFF]++;
      dst[p] = src[i];
      if (csrc) cdst[p] = csrc[i];
    }
    std::swap(src, dst);
    std::swap(csrc, cdst);
  }
  if (src != keys.data()) {
    std::copy(src, src + n, keys.data());
    if (csrc) std::copy(csrc, csrc + n, comp.data());
  }
}

}  // namespace detail

// Stable LSD radix sort, one 8-bit digit per pass. Serial.
template <class K>
void radix_sort(std::span<K> keys) {
  std::vector<K> kbuf;
  std::vector<detail::NoCompanion> cbuf;
  detail::radix_sort_impl(keys, std::span<detail::NoCompanion>{}, kbuf, cbuf);
}

template <class K, class V>
void radix_sort(std::span<K> keys, std::span<V> companion) {
  detail::check_companion(keys.size(), companion);
  std::vector<K> kbuf;
  std::vector<V> cbuf;
  detail::radix_sort_impl(keys, companion, kbuf, cbuf);
}

// Reusable scratch for callers sorting many small arrays.
template <class K, class V>
class RadixSorter {
 public:
  void sort(std::span<K> keys, std::span<V> companion) {
    detail::radix_sort_impl(keys, companion, kbuf_, cbuf_);
  }

 private:
  std::vector<K> kbuf_;
  std::vector<V> cbuf_;
};

}  // namespace pkern
