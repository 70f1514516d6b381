// Copyright 2026 The pkern Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Fixed-capacity hash map used as a sparse row accumulator. Buckets are
// chained through a next-pointer array; slots are handed out in insertion
// order, so keys()/values() list the occupied entries densely. Only the
// buckets that were touched are reset by clear().

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "pkern/error.hpp"

namespace pkern {

enum class AccumulatorLevel { L1, L2 };

template <class Key, class Value>
class HashmapAccumulator {
 public:
  enum class Insert { Added, Merged, Full };

  HashmapAccumulator() = default;
  explicit HashmapAccumulator(std::int64_t capacity, AccumulatorLevel level = AccumulatorLevel::L1)
      : level_(level) {
    reserve(capacity);
  }

  // Discards contents and resizes. Hash size is the next power of two >= 2.
  void reserve(std::int64_t capacity) {
    capacity_ = capacity < 1 ? 1 : capacity;
    const auto hs = std::bit_ceil(static_cast<std::uint64_t>(capacity_ < 2 ? 2 : capacity_));
    shift_ = 32 - std::countr_zero(hs);
    begins_.assign(hs, -1);
    nexts_.assign(static_cast<std::size_t>(capacity_), -1);
    keys_.assign(static_cast<std::size_t>(capacity_), Key{});
    values_.assign(static_cast<std::size_t>(capacity_), Value{});
    used_hashes_.clear();
    used_hashes_.reserve(static_cast<std::size_t>(capacity_));
    size_ = 0;
  }

  std::int64_t capacity() const noexcept { return capacity_; }
  std::int64_t size() const noexcept { return size_; }
  std::int64_t hash_size() const noexcept { return static_cast<std::int64_t>(begins_.size()); }
  AccumulatorLevel level() const noexcept { return level_; }

  std::uint32_t hash(Key k) const noexcept {
    return (static_cast<std::uint32_t>(k) * 0x9E3779B1u) >> shift_;
  }

  // stored[k] += v
  Insert insert_add(Key k, const Value& v) {
    return insert(k, [&](Value& s) { s += v; }, v);
  }

  // stored[k] |= bits
  Insert insert_or(Key k, const Value& bits) {
    return insert(k, [&](Value& s) { s |= bits; }, bits);
  }

  // Pointer to the value stored for k, or nullptr.
  Value* find(Key k) noexcept {
    for (std::int32_t s = begins_[hash(k)]; s != -1; s = nexts_[s]) {
      if (keys_[s] == k) return &values_[s];
    }
    return nullptr;
  }

  std::span<const Key> keys() const noexcept {
    return std::span<const Key>(keys_).first(static_cast<std::size_t>(size_));
  }
  std::span<Value> values() noexcept { return std::span<Value>(values_).first(static_cast<std::size_t>(size_)); }
  std::span<const Value> values() const noexcept {
    return std::span<const Value>(values_).first(static_cast<std::size_t>(size_));
  }

  void clear() noexcept {
    for (auto h : used_hashes_) begins_[h] = -1;
    used_hashes_.clear();
    size_ = 0;
  }

 private:
  template <class Op>
  Insert insert(Key k, Op&& op, const Value& init) {
    const std::uint32_t h = hash(k);
    for (std::int32_t s = begins_[h]; s != -1; s = nexts_[s]) {
      if (keys_[s] == k) {
        op(values_[s]);
        return Insert::Merged;
      }
    }
    if (size_ == capacity_) return Insert::Full;
    const auto s = static_cast<std::int32_t>(size_++);
    keys_[s] = k;
    values_[s] = init;
    if (begins_[h] == -1) used_hashes_.push_back(h);
    nexts_[s] = begins_[h];
    begins_[h] = s;
    return Insert::Added;
  }

  AccumulatorLevel level_ = AccumulatorLevel::L1;
  std::int64_t capacity_ = 0;
  std::int64_t size_ = 0;
  int shift_ = 31;
  std::vector<std::int32_t> begins_;
  std::vector<std::int32_t> nexts_;
  std::vector<Key> keys_;
  std::vector<Value> values_;
  std::vector<std::uint32_t> used_hashes_;
};

// First-level map of bounded size backed by a second level that is only
// allocated once the first one overflows. A key is always looked up in L1
// first and L1 never frees slots before clear(), so no key lands in both.
template <class Key, class Value>
class TwoLevelAccumulator {
 public:
  TwoLevelAccumulator(std::int64_t l1_capacity, std::int64_t l2_capacity)
      : l1_(l1_capacity, AccumulatorLevel::L1), l2_capacity_(l2_capacity) {}

  using Insert = typename HashmapAccumulator<Key, Value>::Insert;

  void insert_add(Key k, const Value& v) {
    if (l1_.insert_add(k, v) == Insert::Full && overflow().insert_add(k, v) == Insert::Full) full();
  }
  void insert_or(Key k, const Value& v) {
    if (l1_.insert_or(k, v) == Insert::Full && overflow().insert_or(k, v) == Insert::Full) full();
  }

  template <class F>
  void for_each(F&& f) {
    auto k1 = l1_.keys();
    auto v1 = l1_.values();
    for (std::size_t s = 0; s < k1.size(); ++s) f(k1[s], v1[s]);
    if (l2_used_) {
      auto k2 = l2_.keys();
      auto v2 = l2_.values();
      for (std::size_t s = 0; s < k2.size(); ++s) f(k2[s], v2[s]);
    }
  }

  std::int64_t size() const noexcept { return l1_.size() + (l2_used_ ? l2_.size() : 0); }
  bool used_l2() const noexcept { return l2_used_; }
  bool l2_allocated() const noexcept { return l2_.capacity() > 0; }

  void clear() {
    l1_.clear();
    if (l2_used_) l2_.clear();
    l2_used_ = false;
  }

  HashmapAccumulator<Key, Value>& l1() noexcept { return l1_; }

 private:
  HashmapAccumulator<Key, Value>& overflow() {
    if (l2_.capacity() == 0) l2_ = HashmapAccumulator<Key, Value>(l2_capacity_, AccumulatorLevel::L2);
    l2_used_ = true;
    return l2_;
  }

  [[noreturn]] static void full() { throw Error("accumulator overflow: row exceeds its size estimate"); }

  HashmapAccumulator<Key, Value> l1_;
  HashmapAccumulator<Key, Value> l2_{};
  std::int64_t l2_capacity_;
  bool l2_used_ = false;
};

}  // namespace pkern
