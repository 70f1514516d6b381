// Copyright 2026 The pkern Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "pkern/error.hpp"
#include "pkern/types.hpp"

namespace pkern {

// Dense k-column block, column-major with leading dimension >= rows.
template <class Scalar = double>
class MultiVector {
 public:
  MultiVector() = default;
  MultiVector(ordinal_t rows, ordinal_t num_vectors, Scalar init = Scalar{})
      : MultiVector(rows, num_vectors, rows, init) {}
  MultiVector(ordinal_t rows, ordinal_t num_vectors, ordinal_t leading_dim, Scalar init)
      : rows_(rows), k_(num_vectors), ld_(leading_dim) {
    if (rows < 0 || num_vectors < 0 || leading_dim < rows) {
      throw DimensionError("invalid multivector shape");
    }
    data_.assign(static_cast<std::size_t>(ld_) * static_cast<std::size_t>(k_), init);
  }

  ordinal_t rows() const noexcept { return rows_; }
  ordinal_t num_vectors() const noexcept { return k_; }
  ordinal_t leading_dim() const noexcept { return ld_; }

  Scalar& operator()(ordinal_t i, ordinal_t j) noexcept {
    return data_[static_cast<std::size_t>(j) * ld_ + i];
  }
  const Scalar& operator()(ordinal_t i, ordinal_t j) const noexcept {
    return data_[static_cast<std::size_t>(j) * ld_ + i];
  }

  std::span<Scalar> column(ordinal_t j) noexcept {
    return std::span<Scalar>(data_).subspan(static_cast<std::size_t>(j) * ld_, rows_);
  }
  std::span<const Scalar> column(ordinal_t j) const noexcept {
    return std::span<const Scalar>(data_).subspan(static_cast<std::size_t>(j) * ld_, rows_);
  }

  std::span<Scalar> data() noexcept { return data_; }
  std::span<const Scalar> data() const noexcept { return data_; }

 private:
  ordinal_t rows_ = 0;
  ordinal_t k_ = 0;
  ordinal_t ld_ = 0;
  std::vector<Scalar> data_;
};

}  // namespace pkern
