// Copyright 2026 The pkern Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// y = beta*y + alpha*op(A)*x for op in {A, A^T, conj(A), A^H}.
//
// Four code paths sit behind one interface: plain/conjugate with one or
// several vectors (row parallel, one dot product per row) and
// transpose/conjugate-transpose with one or several vectors (row parallel
// scatter into per-thread buffers, reduced in thread order so the result is
// reproducible for a fixed thread count).

#include <algorithm>
#include <array>
#include <span>
#include <string>
#include <vector>

#include "pkern/crs.hpp"
#include "pkern/error.hpp"
#include "pkern/handle.hpp"
#include "pkern/multivector.hpp"
#include "pkern/parallel.hpp"
#include "pkern/stencil.hpp"

namespace pkern {

enum class SpmvMode { Plain, Transpose, Conjugate, ConjugateTranspose };

inline const char* to_string(SpmvMode m) {
  switch (m) {
    case SpmvMode::Plain: return "N";
    case SpmvMode::Transpose: return "T";
    case SpmvMode::Conjugate: return "C";
    case SpmvMode::ConjugateTranspose: return "H";
  }
  return "?";
}

inline bool is_transpose_mode(SpmvMode m) {
  return m == SpmvMode::Transpose || m == SpmvMode::ConjugateTranspose;
}
inline bool is_conjugate_mode(SpmvMode m) {
  return m == SpmvMode::Conjugate || m == SpmvMode::ConjugateTranspose;
}

namespace detail {

template <bool Conj, class Scalar>
inline Scalar row_dot(const offset_t* offs, const ordinal_t* cols, const Scalar* vals, const Scalar* x,
                      ordinal_t row) {
  Scalar sum{};
  for (offset_t k = offs[row]; k < offs[row + 1]; ++k) {
    if constexpr (Conj) {
      sum += conj_value(vals[k]) * x[cols[k]];
    } else {
      sum += vals[k] * x[cols[k]];
    }
  }
  return sum;
}

template <class Scalar>
inline void scale_combine(Scalar& y, Scalar beta, Scalar alpha, Scalar sum) {
  // beta == 0 overwrites y, so uninitialised output is never read.
  if (beta == Scalar(0)) {
    y = alpha * sum;
  } else {
    y = beta * y + alpha * sum;
  }
}

template <class F>
void for_rows(const SpmvHandle& h, ordinal_t nrows, F&& f) {
  if (h.rows_per_task <= 1) {
    parallel_for(nrows, [&](std::int64_t i) { f(static_cast<ordinal_t>(i)); });
  } else {
    parallel_for_blocks(nrows, h.rows_per_task, [&](std::int64_t b, std::int64_t e) {
      for (auto i = b; i < e; ++i) f(static_cast<ordinal_t>(i));
    });
  }
}

template <bool Conj, class Scalar>
void spmv_plain_single(const SpmvHandle& h, Scalar alpha, const CrsMatrix<Scalar>& A, const Scalar* x,
                       Scalar beta, Scalar* y) {
  const offset_t* offs = A.row_offsets().data();
  const ordinal_t* cols = A.col_indices().data();
  const Scalar* vals = A.values().data();
  for_rows(h, A.num_rows(), [&](ordinal_t i) {
    scale_combine(y[i], beta, alpha, row_dot<Conj>(offs, cols, vals, x, i));
  });
}

template <bool Conj, class Scalar>
void spmv_plain_multi(const SpmvHandle& h, Scalar alpha, const CrsMatrix<Scalar>& A,
                      const MultiVector<Scalar>& x, Scalar beta, MultiVector<Scalar>& y) {
  constexpr ordinal_t kTile = 8;
  const offset_t* offs = A.row_offsets().data();
  const ordinal_t* cols = A.col_indices().data();
  const Scalar* vals = A.values().data();
  const ordinal_t k = x.num_vectors();
  const ordinal_t ldx = x.leading_dim();
  const Scalar* xd = x.data().data();
  for_rows(h, A.num_rows(), [&](ordinal_t i) {
    for (ordinal_t j0 = 0; j0 < k; j0 += kTile) {
      const ordinal_t jn = std::min(kTile, k - j0);
      std::array<Scalar, kTile> sum{};
      for (offset_t e = offs[i]; e < offs[i + 1]; ++e) {
        const Scalar a = Conj ? conj_value(vals[e]) : vals[e];
        const Scalar* xr = xd + cols[e];
        for (ordinal_t j = 0; j < jn; ++j) {
          sum[j] += a * xr[static_cast<std::size_t>(j0 + j) * ldx];
        }
      }
      for (ordinal_t j = 0; j < jn; ++j) scale_combine(y(i, j0 + j), beta, alpha, sum[j]);
    }
  });
}

// Scatter form. Rows are split statically across threads; each thread
// accumulates into a private buffer and buffers are summed in thread order.
template <bool Conj, class Scalar>
void spmv_transpose_multi(Scalar alpha, const CrsMatrix<Scalar>& A, const Scalar* x, ordinal_t ldx,
                          Scalar beta, Scalar* y, ordinal_t ldy, ordinal_t k) {
  const ordinal_t nrows = A.num_rows();
  const ordinal_t ncols = A.num_cols();
  const offset_t* offs = A.row_offsets().data();
  const ordinal_t* cols = A.col_indices().data();
  const Scalar* vals = A.values().data();
  const std::size_t buf_len = static_cast<std::size_t>(ncols) * k;
  std::vector<std::vector<Scalar>> buffers;
  int team = 1;
  parallel_region([&](int tid, int nthreads) {
#ifdef _OPENMP
#pragma omp single
#endif
    {
      team = nthreads;
      buffers.resize(static_cast<std::size_t>(nthreads));
    }
    auto& buf = buffers[tid];
    buf.assign(buf_len, Scalar{});
    auto [b, e] = static_partition(nrows, nthreads, tid);
    for (auto i = b; i < e; ++i) {
      for (offset_t p = offs[i]; p < offs[i + 1]; ++p) {
        const Scalar a = Conj ? conj_value(vals[p]) : vals[p];
        const std::size_t c = static_cast<std::size_t>(cols[p]);
        for (ordinal_t j = 0; j < k; ++j) {
          buf[static_cast<std::size_t>(j) * ncols + c] += a * x[static_cast<std::size_t>(j) * ldx + i];
        }
      }
    }
  });
  parallel_for(ncols, [&](std::int64_t c) {
    for (ordinal_t j = 0; j < k; ++j) {
      const std::size_t idx = static_cast<std::size_t>(j) * ncols + static_cast<std::size_t>(c);
      Scalar sum{};
      for (int t = 0; t < team; ++t) sum += buffers[t][idx];
      scale_combine(y[static_cast<std::size_t>(j) * ldy + c], beta, alpha, sum);
    }
  });
}

template <class Scalar>
void check_spmv_dims(SpmvMode mode, const CrsMatrix<Scalar>& A, ordinal_t x_rows, ordinal_t y_rows,
                     ordinal_t x_k, ordinal_t y_k) {
  const ordinal_t in = is_transpose_mode(mode) ? A.num_rows() : A.num_cols();
  const ordinal_t out = is_transpose_mode(mode) ? A.num_cols() : A.num_rows();
  if (x_rows != in || y_rows != out) {
    throw DimensionError(std::string("spmv(") + to_string(mode) + "): A is " + std::to_string(A.num_rows()) +
                         "x" + std::to_string(A.num_cols()) + ", x has " + std::to_string(x_rows) +
                         " rows, y has " + std::to_string(y_rows));
  }
  if (x_k != y_k || x_k < 1) {
    throw DimensionError("spmv: x and y must have the same number (>= 1) of vectors");
  }
}

}  // namespace detail

template <class Scalar>
void spmv(const SpmvHandle& h, SpmvMode mode, Scalar alpha, const CrsMatrix<Scalar>& A,
          std::span<const Scalar> x, Scalar beta, std::span<Scalar> y) {
  detail::check_spmv_dims(mode, A, static_cast<ordinal_t>(x.size()), static_cast<ordinal_t>(y.size()), 1, 1);
  switch (mode) {
    case SpmvMode::Plain: detail::spmv_plain_single<false>(h, alpha, A, x.data(), beta, y.data()); break;
    case SpmvMode::Conjugate: detail::spmv_plain_single<true>(h, alpha, A, x.data(), beta, y.data()); break;
    case SpmvMode::Transpose:
      detail::spmv_transpose_multi<false>(alpha, A, x.data(), static_cast<ordinal_t>(x.size()), beta, y.data(),
                                          static_cast<ordinal_t>(y.size()), 1);
      break;
    case SpmvMode::ConjugateTranspose:
      detail::spmv_transpose_multi<true>(alpha, A, x.data(), static_cast<ordinal_t>(x.size()), beta, y.data(),
                                         static_cast<ordinal_t>(y.size()), 1);
      break;
  }
}

template <class Scalar>
void spmv(const SpmvHandle& h, SpmvMode mode, Scalar alpha, const CrsMatrix<Scalar>& A,
          const MultiVector<Scalar>& x, Scalar beta, MultiVector<Scalar>& y) {
  detail::check_spmv_dims(mode, A, x.rows(), y.rows(), x.num_vectors(), y.num_vectors());
  if (x.num_vectors() == 1) {
    spmv(h, mode, alpha, A, x.column(0), beta, y.column(0));
    return;
  }
  switch (mode) {
    case SpmvMode::Plain: detail::spmv_plain_multi<false>(h, alpha, A, x, beta, y); break;
    case SpmvMode::Conjugate: detail::spmv_plain_multi<true>(h, alpha, A, x, beta, y); break;
    case SpmvMode::Transpose:
      detail::spmv_transpose_multi<false>(alpha, A, x.data().data(), x.leading_dim(), beta, y.data().data(),
                                          y.leading_dim(), x.num_vectors());
      break;
    case SpmvMode::ConjugateTranspose:
      detail::spmv_transpose_multi<true>(alpha, A, x.data().data(), x.leading_dim(), beta, y.data().data(),
                                         y.leading_dim(), x.num_vectors());
      break;
  }
}

template <class Scalar>
void spmv(SpmvMode mode, Scalar alpha, const CrsMatrix<Scalar>& A, std::span<const Scalar> x, Scalar beta,
          std::span<Scalar> y) {
  spmv(SpmvHandle{}, mode, alpha, A, x, beta, y);
}

template <class Scalar>
void spmv(SpmvMode mode, Scalar alpha, const CrsMatrix<Scalar>& A, const MultiVector<Scalar>& x, Scalar beta,
          MultiVector<Scalar>& y) {
  spmv(SpmvHandle{}, mode, alpha, A, x, beta, y);
}

// ---------------------------------------------------------------------------
// Structured-grid SpMV.
//
// Rows of lattice points strictly inside the box are assumed to hold exactly
// the stencil's entries in ascending column order, so x is addressed as
// row + offset[s] without touching col_indices. Points on the skin of the box
// may carry boundary-condition rows of any shape and go through the general
// row kernel. Both paths sum in stored entry order, so the result is bitwise
// identical to spmv(Plain).

namespace detail {

inline bool on_skin(const StencilSpec& spec, ordinal_t i, ordinal_t j, ordinal_t k) {
  const int nd = spec.ndims();
  if (i == 0 || i == spec.dims[0] - 1) return true;
  if (nd >= 2 && (j == 0 || j == spec.dims[1] - 1)) return true;
  if (nd >= 3 && (k == 0 || k == spec.dims[2] - 1)) return true;
  return false;
}

template <class F>
void for_each_interior_row(const StencilSpec& spec, F&& f) {
  const ordinal_t nx = spec.dims[0], ny = spec.dims[1], nz = spec.dims[2];
  const int nd = spec.ndims();
  const ordinal_t j0 = nd >= 2 ? 1 : 0, j1 = nd >= 2 ? ny - 1 : ny;
  const ordinal_t k0 = nd >= 3 ? 1 : 0, k1 = nd >= 3 ? nz - 1 : nz;
  for (ordinal_t k = k0; k < k1; ++k)
    for (ordinal_t j = j0; j < j1; ++j)
      for (ordinal_t i = 1; i < nx - 1; ++i) f(static_cast<ordinal_t>(i + nx * (j + ny * k)));
}

template <class Scalar>
SpmvHandle::StructuredState validate_structure(const StencilSpec& spec, const CrsMatrix<Scalar>& A) {
  if (spec.num_points() != A.num_rows() || A.num_rows() != A.num_cols()) {
    throw DimensionError("spmv_structured: box " + std::to_string(spec.dims[0]) + "x" +
                         std::to_string(spec.dims[1]) + "x" + std::to_string(spec.dims[2]) + " has " +
                         std::to_string(spec.num_points()) + " points but A is " +
                         std::to_string(A.num_rows()) + "x" + std::to_string(A.num_cols()));
  }
  SpmvHandle::StructuredState st{A.fingerprint(), spec, stencil_offsets(spec)};
  const auto len = static_cast<offset_t>(st.offsets.size());
  const auto offs = A.row_offsets();
  const auto cols = A.col_indices();
  for_each_interior_row(spec, [&](ordinal_t r) {
    if (offs[r + 1] - offs[r] != len) {
      throw StructureError("spmv_structured: interior row " + std::to_string(r) + " has " +
                               std::to_string(offs[r + 1] - offs[r]) + " entries, stencil " +
                               std::string(to_string(spec.kind)) + " expects " + std::to_string(len),
                           r);
    }
    for (offset_t s = 0; s < len; ++s) {
      if (cols[offs[r] + s] != r + st.offsets[s]) {
        throw StructureError("spmv_structured: interior row " + std::to_string(r) +
                                 " columns do not follow the stencil pattern",
                             r);
      }
    }
  });
  return st;
}

template <int Len, class Scalar>
void structured_lines(const StencilSpec& spec, const std::int64_t* stencil, Scalar alpha,
                      const CrsMatrix<Scalar>& A, const Scalar* x, Scalar beta, Scalar* y) {
  const offset_t* offs = A.row_offsets().data();
  const ordinal_t* cols = A.col_indices().data();
  const Scalar* vals = A.values().data();
  const ordinal_t nx = spec.dims[0], ny = spec.dims[1];
  const std::int64_t nlines = static_cast<std::int64_t>(ny) * spec.dims[2];
  // Long x-lines are split so 1D boxes still spread over threads.
  constexpr ordinal_t kSegment = 2048;
  const std::int64_t segs = (nx + kSegment - 1) / kSegment;
  std::array<std::int64_t, Len> so{};
  for (int s = 0; s < Len; ++s) so[s] = stencil[s];

  parallel_for(nlines * segs, [&](std::int64_t task) {
    const std::int64_t line = task / segs;
    const ordinal_t seg = static_cast<ordinal_t>(task % segs);
    const ordinal_t j = static_cast<ordinal_t>(line % ny);
    const ordinal_t k = static_cast<ordinal_t>(line / ny);
    const ordinal_t ib = seg * kSegment;
    const ordinal_t ie = std::min(nx, ib + kSegment);
    const ordinal_t base = nx * (j + ny * k);
    for (ordinal_t i = ib; i < ie; ++i) {
      const ordinal_t r = base + i;
      if (on_skin(spec, i, j, k)) {
        scale_combine(y[r], beta, alpha, row_dot<false>(offs, cols, vals, x, r));
        continue;
      }
      const Scalar* v = vals + offs[r];
      const Scalar* xr = x + r;
      Scalar sum{};
      for (int s = 0; s < Len; ++s) sum += v[s] * xr[so[s]];
      scale_combine(y[r], beta, alpha, sum);
    }
  });
}

}  // namespace detail

// Checks (once per pattern, cached in the handle) that interior rows match
// the stencil, then applies the structure-exploiting kernel.
template <class Scalar>
void spmv_structured(SpmvHandle& h, const StencilSpec& spec, Scalar alpha, const CrsMatrix<Scalar>& A,
                     std::span<const Scalar> x, Scalar beta, std::span<Scalar> y) {
  if (!h.structured || !(h.structured->fingerprint == A.fingerprint()) || !(h.structured->spec == spec)) {
    h.structured.reset();
    h.structured = detail::validate_structure(spec, A);
  }
  detail::check_spmv_dims(SpmvMode::Plain, A, static_cast<ordinal_t>(x.size()),
                          static_cast<ordinal_t>(y.size()), 1, 1);
  const std::int64_t* so = h.structured->offsets.data();
  switch (spec.kind) {
    case StencilKind::Pt3: detail::structured_lines<3>(spec, so, alpha, A, x.data(), beta, y.data()); break;
    case StencilKind::Pt5: detail::structured_lines<5>(spec, so, alpha, A, x.data(), beta, y.data()); break;
    case StencilKind::Pt7: detail::structured_lines<7>(spec, so, alpha, A, x.data(), beta, y.data()); break;
    case StencilKind::Pt9: detail::structured_lines<9>(spec, so, alpha, A, x.data(), beta, y.data()); break;
    case StencilKind::Pt27: detail::structured_lines<27>(spec, so, alpha, A, x.data(), beta, y.data()); break;
  }
}

}  // namespace pkern
