// Copyright 2026 The pkern Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Batch of equally sized small dense matrices.
//
// Contiguous: matrix after matrix, each row-major.
// Interleaved: matrices are taken in packs of `width`; inside a full pack
// entry (i, j) of all `width` matrices is stored adjacently, so a kernel
// working on one pack operates on `width` matrices in lock step. A trailing
// partial pack is stored contiguously.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pkern/error.hpp"
#include "pkern/types.hpp"

namespace pkern::batched {

enum class BatchLayout { Contiguous, Interleaved };

inline const char* to_string(BatchLayout l) { return l == BatchLayout::Contiguous ? "contiguous" : "interleaved"; }

inline constexpr int kDefaultInterleaveWidth = 8;

template <class Scalar = double>
class DenseBatch {
 public:
  DenseBatch() = default;
  DenseBatch(std::int64_t batch, ordinal_t rows, ordinal_t cols, BatchLayout layout = BatchLayout::Contiguous,
             int width = kDefaultInterleaveWidth)
      : batch_(batch), rows_(rows), cols_(cols), layout_(layout), width_(width) {
    if (batch < 0 || rows < 0 || cols < 0 || width < 1) throw DimensionError("invalid batch shape");
    data_.assign(static_cast<std::size_t>(batch) * rows * cols, Scalar{});
  }

  std::int64_t batch_count() const noexcept { return batch_; }
  ordinal_t rows() const noexcept { return rows_; }
  ordinal_t cols() const noexcept { return cols_; }
  BatchLayout layout() const noexcept { return layout_; }
  int width() const noexcept { return width_; }
  std::int64_t matrix_size() const noexcept { return static_cast<std::int64_t>(rows_) * cols_; }

  // Number of complete packs in the interleaved layout.
  std::int64_t full_packs() const noexcept { return layout_ == BatchLayout::Interleaved ? batch_ / width_ : 0; }
  // First matrix stored contiguously.
  std::int64_t tail_begin() const noexcept { return full_packs() * width_; }

  std::size_t index(std::int64_t b, ordinal_t i, ordinal_t j) const noexcept {
    const std::int64_t e = static_cast<std::int64_t>(i) * cols_ + j;
    if (b >= tail_begin()) {
      return static_cast<std::size_t>(b * matrix_size() + e);
    }
    const std::int64_t pack = b / width_;
    return static_cast<std::size_t>(pack * width_ * matrix_size() + e * width_ + b % width_);
  }

  Scalar& operator()(std::int64_t b, ordinal_t i, ordinal_t j) noexcept { return data_[index(b, i, j)]; }
  const Scalar& operator()(std::int64_t b, ordinal_t i, ordinal_t j) const noexcept {
    return data_[index(b, i, j)];
  }

  std::span<Scalar> data() noexcept { return data_; }
  std::span<const Scalar> data() const noexcept { return data_; }

  // Copy in another layout; entries are moved bit for bit.
  DenseBatch to_layout(BatchLayout layout, int width = kDefaultInterleaveWidth) const {
    DenseBatch out(batch_, rows_, cols_, layout, width);
    for (std::int64_t b = 0; b < batch_; ++b)
      for (ordinal_t i = 0; i < rows_; ++i)
        for (ordinal_t j = 0; j < cols_; ++j) out(b, i, j) = (*this)(b, i, j);
    return out;
  }

  bool same_shape(const DenseBatch& o) const noexcept {
    return batch_ == o.batch_ && rows_ == o.rows_ && cols_ == o.cols_;
  }

 private:
  std::int64_t batch_ = 0;
  ordinal_t rows_ = 0;
  ordinal_t cols_ = 0;
  BatchLayout layout_ = BatchLayout::Contiguous;
  int width_ = kDefaultInterleaveWidth;
  std::vector<Scalar> data_;
};

}  // namespace pkern::batched
