// Copyright 2026 The pkern Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstdint>
#include <type_traits>

namespace pkern {

// Column / row index. Offsets into entry arrays are 64-bit.
using ordinal_t = std::int32_t;
using offset_t = std::int64_t;

enum class Uplo { Lower, Upper };
enum class Diag { NonUnit, Unit };
enum class Side { Left, Right };
enum class Trans { No, Transpose };

template <class T>
struct is_complex : std::false_type {};
template <class T>
struct is_complex<std::complex<T>> : std::true_type {};

template <class T>
inline constexpr bool is_complex_v = is_complex<T>::value;

template <class Scalar>
constexpr Scalar conj_value(const Scalar& v) {
  if constexpr (is_complex_v<Scalar>) {
    return std::conj(v);
  } else {
    return v;
  }
}

template <class Scalar>
auto abs_value(const Scalar& v) {
  using std::abs;
  return abs(v);
}

}  // namespace pkern
