// Copyright 2026 The pkern Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Batched small dense kernels: gemm, trmm, trtri, lu (no pivoting), trsv.
//
// Every kernel is written once against an element type T that is either a
// scalar or a Pack holding one entry of several interleaved matrices. Packs
// apply the scalar operation lane by lane in the same order, so both layouts
// give bitwise identical results. Work is parallel over the batch only.

#include <array>
#include <cstdint>
#include <cstring>
#include <string>
#include <type_traits>
#include <vector>

#include "pkern/batched/dense_batch.hpp"
#include "pkern/error.hpp"
#include "pkern/parallel.hpp"
#include "pkern/types.hpp"

namespace pkern::batched {

struct TriangleSpec {
  Uplo uplo = Uplo::Lower;
  Diag diag = Diag::NonUnit;
  Side side = Side::Left;
  Trans trans = Trans::No;
};

template <class Scalar, int W>
struct Pack {
  std::array<Scalar, W> v;

  Pack() = default;
  explicit Pack(Scalar s) { v.fill(s); }

  friend Pack operator+(const Pack& a, const Pack& b) {
    Pack r;
    for (int l = 0; l < W; ++l) r.v[l] = a.v[l] + b.v[l];
    return r;
  }
  friend Pack operator-(const Pack& a, const Pack& b) {
    Pack r;
    for (int l = 0; l < W; ++l) r.v[l] = a.v[l] - b.v[l];
    return r;
  }
  friend Pack operator*(const Pack& a, const Pack& b) {
    Pack r;
    for (int l = 0; l < W; ++l) r.v[l] = a.v[l] * b.v[l];
    return r;
  }
  friend Pack operator/(const Pack& a, const Pack& b) {
    Pack r;
    for (int l = 0; l < W; ++l) r.v[l] = a.v[l] / b.v[l];
    return r;
  }
  friend Pack operator-(const Pack& a) {
    Pack r;
    for (int l = 0; l < W; ++l) r.v[l] = -a.v[l];
    return r;
  }
  Pack& operator+=(const Pack& b) { return *this = *this + b; }
  Pack& operator-=(const Pack& b) { return *this = *this - b; }
};

namespace detail {

template <class T>
struct Lanes {
  static constexpr int value = 1;
};
template <class S, int W>
struct Lanes<Pack<S, W>> {
  static constexpr int value = W;
};

template <class T, class Scalar>
inline T load(const Scalar* p) {
  if constexpr (std::is_same_v<T, Scalar>) {
    return *p;
  } else {
    T r;
    std::memcpy(r.v.data(), p, sizeof(r.v));
    return r;
  }
}

template <class T, class Scalar>
inline void store(Scalar* p, const T& x) {
  if constexpr (std::is_same_v<T, Scalar>) {
    *p = x;
  } else {
    std::memcpy(p, x.v.data(), sizeof(x.v));
  }
}

// Lane holding an exact zero, or -1.
template <class T>
inline int zero_lane(const T& x) {
  if constexpr (Lanes<T>::value == 1) {
    return x == T(0) ? 0 : -1;
  } else {
    for (int l = 0; l < Lanes<T>::value; ++l)
      if (x.v[l] == 0) return l;
    return -1;
  }
}

// One matrix (or one pack of matrices) inside a batch.
template <class T, class Scalar>
struct MatView {
  Scalar* base;
  ordinal_t cols;
  int step;

  T get(ordinal_t i, ordinal_t j) const {
    return load<T>(base + (static_cast<std::int64_t>(i) * cols + j) * step);
  }
  void set(ordinal_t i, ordinal_t j, const T& x) const {
    store<T>(base + (static_cast<std::int64_t>(i) * cols + j) * step, x);
  }
};

template <class Scalar, class T>
MatView<T, Scalar> view(DenseBatch<Scalar>& x, std::int64_t b0, int lane, int step) {
  return {x.data().data() + b0 * x.matrix_size() + lane, x.cols(), step};
}

template <class T>
struct Tag {
  using type = T;
};

// Calls f(Tag<T>, first_matrix, lane, step) for every unit of work of a
// batch with the given shape, in parallel.
template <class Scalar, class F>
void for_each_group(const DenseBatch<Scalar>& ref, F&& f) {
  constexpr int kPack = kDefaultInterleaveWidth;
  const std::int64_t nb = ref.batch_count();
  const std::int64_t tail = ref.tail_begin();
  const int w = ref.width();
  if (ref.layout() == BatchLayout::Contiguous) {
    parallel_for(nb, [&](std::int64_t b) { f(Tag<Scalar>{}, b, 0, 1); });
  } else if (w == kPack) {
    const std::int64_t packs = ref.full_packs();
    parallel_for(packs + (nb - tail), [&](std::int64_t g) {
      if (g < packs) {
        f(Tag<Pack<Scalar, kPack>>{}, g * kPack, 0, kPack);
      } else {
        f(Tag<Scalar>{}, tail + (g - packs), 0, 1);
      }
    });
  } else {
    // Other widths: walk the lanes of each pack one at a time.
    parallel_for(nb, [&](std::int64_t b) {
      if (b < tail) {
        f(Tag<Scalar>{}, b - b % w, static_cast<int>(b % w), w);
      } else {
        f(Tag<Scalar>{}, b, 0, 1);
      }
    });
  }
}

template <class Scalar>
void check_same_layout(const DenseBatch<Scalar>& a, const DenseBatch<Scalar>& b, const char* kernel) {
  if (a.batch_count() != b.batch_count()) {
    throw DimensionError(std::string(kernel) + ": batch counts differ (" + std::to_string(a.batch_count()) +
                         " vs " + std::to_string(b.batch_count()) + ")");
  }
  if (a.layout() != b.layout() || (a.layout() == BatchLayout::Interleaved && a.width() != b.width())) {
    throw DimensionError(std::string(kernel) + ": operands use different layouts");
  }
}

[[noreturn]] inline void throw_singular(const char* kernel, std::int64_t b, ordinal_t i, const char* what) {
  throw SingularError(std::string(kernel) + ": " + what + " at matrix " + std::to_string(b) + ", row " +
                          std::to_string(i),
                      b, i);
}

inline bool in_triangle(Uplo uplo, ordinal_t i, ordinal_t j) { return uplo == Uplo::Lower ? j <= i : j >= i; }

// Entry (i, j) of op(A) with the triangle and diagonal convention applied;
// `present` is false for structural zeros.
template <class T, class Scalar>
inline T tri_entry(const MatView<T, Scalar>& a, const TriangleSpec& s, ordinal_t i, ordinal_t j, bool& present) {
  if (s.trans == Trans::Transpose) std::swap(i, j);
  present = in_triangle(s.uplo, i, j);
  if (!present) return T(Scalar(0));
  if (i == j && s.diag == Diag::Unit) return T(Scalar(1));
  return a.get(i, j);
}

}  // namespace detail

// C = beta*C + alpha*A*B for every matrix in the batch. beta == 0 does not
// read C.
template <class Scalar>
void batched_gemm(Scalar alpha, DenseBatch<Scalar>& A, DenseBatch<Scalar>& B, Scalar beta, DenseBatch<Scalar>& C) {
  detail::check_same_layout(A, B, "batched_gemm");
  detail::check_same_layout(A, C, "batched_gemm");
  if (A.cols() != B.rows() || A.rows() != C.rows() || B.cols() != C.cols()) {
    throw DimensionError("batched_gemm: shapes " + std::to_string(A.rows()) + "x" + std::to_string(A.cols()) +
                         " * " + std::to_string(B.rows()) + "x" + std::to_string(B.cols()) + " -> " +
                         std::to_string(C.rows()) + "x" + std::to_string(C.cols()) + " are not conformable");
  }
  const ordinal_t m = C.rows(), n = C.cols(), k = A.cols();
  detail::for_each_group(A, [&](auto tag, std::int64_t b0, int lane, int step) {
    using T = typename decltype(tag)::type;
    auto a = detail::view<Scalar, T>(A, b0, lane, step);
    auto bm = detail::view<Scalar, T>(B, b0, lane, step);
    auto c = detail::view<Scalar, T>(C, b0, lane, step);
    const T al(alpha), be(beta);
    for (ordinal_t i = 0; i < m; ++i) {
      for (ordinal_t j = 0; j < n; ++j) {
        T sum(Scalar(0));
        for (ordinal_t l = 0; l < k; ++l) sum += a.get(i, l) * bm.get(l, j);
        c.set(i, j, beta == Scalar(0) ? al * sum : be * c.get(i, j) + al * sum);
      }
    }
  });
}

// B = alpha*op(A)*B (Left) or B = alpha*B*op(A) (Right), A triangular.
template <class Scalar>
void batched_trmm(const TriangleSpec& spec, Scalar alpha, DenseBatch<Scalar>& A, DenseBatch<Scalar>& B) {
  detail::check_same_layout(A, B, "batched_trmm");
  const ordinal_t m = B.rows(), n = B.cols();
  const ordinal_t na = spec.side == Side::Left ? m : n;
  if (A.rows() != A.cols() || A.rows() != na) {
    throw DimensionError("batched_trmm: A is " + std::to_string(A.rows()) + "x" + std::to_string(A.cols()) +
                         ", B is " + std::to_string(m) + "x" + std::to_string(n));
  }
  detail::for_each_group(A, [&](auto tag, std::int64_t b0, int lane, int step) {
    using T = typename decltype(tag)::type;
    auto a = detail::view<Scalar, T>(A, b0, lane, step);
    auto bm = detail::view<Scalar, T>(B, b0, lane, step);
    const T al(alpha);
    std::vector<T> out(static_cast<std::size_t>(m) * n);
    for (ordinal_t i = 0; i < m; ++i) {
      for (ordinal_t j = 0; j < n; ++j) {
        T sum(Scalar(0));
        bool present = false;
        for (ordinal_t l = 0; l < na; ++l) {
          if (spec.side == Side::Left) {
            const T t = detail::tri_entry(a, spec, i, l, present);
            if (present) sum += t * bm.get(l, j);
          } else {
            const T t = detail::tri_entry(a, spec, l, j, present);
            if (present) sum += bm.get(i, l) * t;
          }
        }
        out[static_cast<std::size_t>(i) * n + j] = al * sum;
      }
    }
    for (ordinal_t i = 0; i < m; ++i)
      for (ordinal_t j = 0; j < n; ++j) bm.set(i, j, out[static_cast<std::size_t>(i) * n + j]);
  });
}

// A = inv(A) on the triangle named by spec.uplo. With a unit diagonal the
// stored diagonal is neither read nor written. side/trans are ignored.
template <class Scalar>
void batched_trtri(const TriangleSpec& spec, DenseBatch<Scalar>& A) {
  if (A.rows() != A.cols()) throw DimensionError("batched_trtri: matrices must be square");
  const ordinal_t n = A.rows();
  const bool unit = spec.diag == Diag::Unit;
  const bool lower = spec.uplo == Uplo::Lower;
  detail::for_each_group(A, [&](auto tag, std::int64_t b0, int lane, int step) {
    using T = typename decltype(tag)::type;
    auto a = detail::view<Scalar, T>(A, b0, lane, step);
    if (!unit) {
      for (ordinal_t i = 0; i < n; ++i) {
        const int z = detail::zero_lane(a.get(i, i));
        if (z >= 0) detail::throw_singular("batched_trtri", b0 + lane + z, i, "zero diagonal");
      }
    }
    const T one(Scalar(1));
    auto diag = [&](ordinal_t i) { return unit ? one : a.get(i, i); };
    std::vector<T> x(static_cast<std::size_t>(n) * n, T(Scalar(0)));
    auto X = [&](ordinal_t i, ordinal_t j) -> T& { return x[static_cast<std::size_t>(i) * n + j]; };
    for (ordinal_t j = 0; j < n; ++j) {
      X(j, j) = one / diag(j);
      if (lower) {
        for (ordinal_t i = j + 1; i < n; ++i) {
          T sum(Scalar(0));
          for (ordinal_t k = j; k < i; ++k) sum += a.get(i, k) * X(k, j);
          X(i, j) = -sum / diag(i);
        }
      } else {
        for (ordinal_t i = j - 1; i >= 0; --i) {
          T sum(Scalar(0));
          for (ordinal_t k = i + 1; k <= j; ++k) sum += a.get(i, k) * X(k, j);
          X(i, j) = -sum / diag(i);
        }
      }
    }
    for (ordinal_t i = 0; i < n; ++i) {
      for (ordinal_t j = 0; j < n; ++j) {
        if (!detail::in_triangle(spec.uplo, i, j) || (unit && i == j)) continue;
        a.set(i, j, X(i, j));
      }
    }
  });
}

// In-place LU without pivoting: strict lower part holds L (unit diagonal
// implied), upper part holds U.
template <class Scalar>
void batched_lu(DenseBatch<Scalar>& A) {
  if (A.rows() != A.cols()) throw DimensionError("batched_lu: matrices must be square");
  const ordinal_t n = A.rows();
  detail::for_each_group(A, [&](auto tag, std::int64_t b0, int lane, int step) {
    using T = typename decltype(tag)::type;
    auto a = detail::view<Scalar, T>(A, b0, lane, step);
    for (ordinal_t k = 0; k < n; ++k) {
      const T piv = a.get(k, k);
      const int z = detail::zero_lane(piv);
      if (z >= 0) detail::throw_singular("batched_lu", b0 + lane + z, k, "zero pivot");
      for (ordinal_t i = k + 1; i < n; ++i) {
        const T l = a.get(i, k) / piv;
        a.set(i, k, l);
        for (ordinal_t j = k + 1; j < n; ++j) a.set(i, j, a.get(i, j) - l * a.get(k, j));
      }
    }
  });
}

// Solves op(A) x = b in place; b holds one column vector per matrix.
template <class Scalar>
void batched_trsv(const TriangleSpec& spec, DenseBatch<Scalar>& A, DenseBatch<Scalar>& b) {
  detail::check_same_layout(A, b, "batched_trsv");
  const ordinal_t n = A.rows();
  if (A.cols() != n || b.rows() != n || b.cols() != 1) {
    throw DimensionError("batched_trsv: A must be n x n and b n x 1");
  }
  const bool forward = (spec.uplo == Uplo::Lower) == (spec.trans == Trans::No);
  detail::for_each_group(A, [&](auto tag, std::int64_t b0, int lane, int step) {
    using T = typename decltype(tag)::type;
    auto a = detail::view<Scalar, T>(A, b0, lane, step);
    auto x = detail::view<Scalar, T>(b, b0, lane, step);
    bool present = false;
    for (ordinal_t t = 0; t < n; ++t) {
      const ordinal_t i = forward ? t : n - 1 - t;
      T sum = x.get(i, 0);
      for (ordinal_t s = 0; s < t; ++s) {
        const ordinal_t j = forward ? s : n - 1 - s;
        const T aij = detail::tri_entry(a, spec, i, j, present);
        if (present) sum -= aij * x.get(j, 0);
      }
      const T d = detail::tri_entry(a, spec, i, i, present);
      const int z = detail::zero_lane(d);
      if (z >= 0) detail::throw_singular("batched_trsv", b0 + lane + z, i, "zero diagonal");
      x.set(i, 0, sum / d);
    }
  });
}

}  // namespace pkern::batched
