// Copyright 2026 The pkern Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Benchmark cases for pkern-bench. A case owns its inputs; `run` is the
// timed region, `reset` restores in-place inputs between repetitions, and
// `check` validates the last output (outside the timing).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pkern/pkern.hpp"
#include "pkern/verify/oracles.hpp"
#include "pkern/verify/suite.hpp"

namespace pkern::bench {

struct Options {
  std::string kernel;
  std::string variant;  // empty: kernel default; "all": every variant
  std::string compare;  // variant to time alongside for a speedup column
  std::vector<std::int64_t> sizes;
  std::int64_t n = 0;
  std::int64_t nnz_per_row = 0;
  std::int64_t batch = 0;
  std::string stencil = "7pt";
  std::vector<std::int64_t> dims;
  std::string layout = "contiguous";
  std::string matrix;
  bool include_symbolic = false;
  int reps = 5;
  int warmups = 1;
  std::uint64_t seed = 1;
};

struct Case {
  std::string variant;
  std::int64_t rows = 0;
  std::int64_t cols = 0;
  std::int64_t nnz = 0;
  std::int64_t batch = 0;
  // Groups cases that are compared against each other.
  std::string group;
  std::function<void()> reset;
  std::function<void()> run;
  std::function<bool()> check;
};

struct KernelInfo {
  std::string name;
  std::vector<std::string> variants;  // first is the default
};

inline const std::vector<KernelInfo>& kernel_infos() {
  static const std::vector<KernelInfo> k = {
      {"spmv", {"N", "T", "C", "H"}},
      {"spmv-structured", {"structured", "general"}},
      {"spgemm", {"auto", "hashmap", "dense"}},
      {"spgemm-jacobi", {"fused", "msak"}},
      {"spadd", {"sorted", "unsorted", "bitonic"}},
      {"sptrsv", {"chain", "nochain"}},
      {"batched-gemm", {"contiguous", "interleaved"}},
      {"batched-trmm", {"contiguous", "interleaved"}},
      {"batched-trtri", {"contiguous", "interleaved"}},
      {"batched-lu", {"contiguous", "interleaved"}},
      {"batched-trsv", {"contiguous", "interleaved"}},
      {"color-d1", {"VB", "EB"}},
      {"color-d2", {"NB", "VB2"}},
      {"color-bgpc", {"NB"}},
      {"mis2", {"default"}},
      {"mis2-coarsen", {"default"}},
      {"sort", {"bitonic", "segmented", "radix", "merge"}},
      {"matrix-io", {"write", "read"}},
  };
  return k;
}

inline const KernelInfo* find_info(const std::string& name) {
  for (const auto& k : kernel_infos())
    if (k.name == name) return &k;
  return nullptr;
}

namespace detail {

using Mat = CrsMatrix<double>;

inline std::int64_t or_default(std::int64_t v, std::int64_t def) { return v > 0 ? v : def; }

inline std::vector<std::int64_t> sizes_or(const Options& o, std::int64_t def) {
  if (!o.sizes.empty()) return o.sizes;
  return {or_default(o.n, def)};
}

// Loaded matrix, or a generated square random one with n rows.
inline Mat sparse_input(const Options& o, std::int64_t n, std::int64_t per_row, std::uint64_t salt) {
  if (!o.matrix.empty()) return io::read_matrix_market(std::filesystem::path(o.matrix));
  return io::gen_random_crs(static_cast<ordinal_t>(n), static_cast<ordinal_t>(n),
                            static_cast<ordinal_t>(std::min(per_row, n)), o.seed ^ salt);
}

// Reference row of A*B (or of a generic row combiner) via an ordered map.
inline std::map<ordinal_t, double> product_row(const Mat& A, const Mat& B, ordinal_t i) {
  std::map<ordinal_t, double> row;
  const auto ar = A.row(i);
  for (std::size_t k = 0; k < ar.size(); ++k) {
    const auto br = B.row(ar.cols[k]);
    for (std::size_t l = 0; l < br.size(); ++l) row[br.cols[l]] += ar.vals[k] * br.vals[l];
  }
  return row;
}

inline double row_scale(const Mat& A, const Mat& B, ordinal_t i, ordinal_t c) {
  double s = 0.0;
  const auto ar = A.row(i);
  for (std::size_t k = 0; k < ar.size(); ++k) {
    const auto br = B.row(ar.cols[k]);
    for (std::size_t l = 0; l < br.size(); ++l)
      if (br.cols[l] == c) s += std::abs(ar.vals[k] * br.vals[l]);
  }
  return s;
}

// Samples up to 16 rows of C and compares them with `want_row`.
template <class WantRow, class Scale>
bool sample_rows(const Mat& C, std::uint64_t seed, WantRow&& want_row, Scale&& scale, double tol) {
  if (C.num_rows() == 0) return true;
  std::mt19937_64 rng(seed);
  for (int s = 0; s < 16; ++s) {
    const auto i = static_cast<ordinal_t>(rng() % static_cast<std::uint64_t>(C.num_rows()));
    const std::map<ordinal_t, double> want = want_row(i);
    const auto r = C.row(i);
    if (r.size() != want.size()) return false;
    for (std::size_t k = 0; k < r.size(); ++k) {
      auto it = want.find(r.cols[k]);
      if (it == want.end()) return false;
      if (!oracle::close(r.vals[k], it->second, scale(i, r.cols[k]), tol)) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------

inline std::vector<Case> spmv_cases(const Options& o, const std::vector<std::string>& variants) {
  std::vector<Case> out;
  for (std::int64_t n : sizes_or(o, 100000)) {
    auto A = std::make_shared<Mat>(sparse_input(o, n, or_default(o.nnz_per_row, 10), 0x11));
    for (const auto& v : variants) {
      const SpmvMode mode = v == "T" ? SpmvMode::Transpose
                            : v == "C" ? SpmvMode::Conjugate
                            : v == "H" ? SpmvMode::ConjugateTranspose
                                       : SpmvMode::Plain;
      const bool tr = is_transpose_mode(mode);
      auto x = std::make_shared<std::vector<double>>(io::random_vector(tr ? A->num_rows() : A->num_cols(), o.seed));
      auto y = std::make_shared<std::vector<double>>(static_cast<std::size_t>(tr ? A->num_cols() : A->num_rows()));
      Case c{v, A->num_rows(), A->num_cols(), A->nnz(), 0, std::to_string(n)};
      c.run = [=] { spmv(mode, 1.0, *A, std::span<const double>(*x), 0.0, std::span<double>(*y)); };
      c.check = [=] {
        // Independent scatter/gather loop.
        std::vector<double> want(y->size(), 0.0), mag(y->size(), 0.0);
        for (ordinal_t i = 0; i < A->num_rows(); ++i) {
          const auto r = A->row(i);
          for (std::size_t k = 0; k < r.size(); ++k) {
            const std::size_t dst = tr ? r.cols[k] : i;
            const std::size_t src = tr ? i : r.cols[k];
            want[dst] += r.vals[k] * (*x)[src];
            mag[dst] += std::abs(r.vals[k] * (*x)[src]);
          }
        }
        for (std::size_t i = 0; i < want.size(); ++i)
          if (!oracle::close((*y)[i], want[i], mag[i], 1e-12)) return false;
        return true;
      };
      out.push_back(std::move(c));
    }
  }
  return out;
}

inline StencilSpec stencil_from(const Options& o) {
  const auto kind = parse_stencil_kind(o.stencil);
  if (!kind) throw std::invalid_argument("unknown stencil '" + o.stencil + "' (expected 3pt, 5pt, 7pt, 9pt or 27pt)");
  std::vector<ordinal_t> dims;
  if (o.dims.empty()) {
    const int nd = stencil_dimensionality(*kind);
    dims.assign(static_cast<std::size_t>(nd), nd == 3 ? 64 : nd == 2 ? 512 : 262144);
  } else {
    for (auto d : o.dims) dims.push_back(static_cast<ordinal_t>(d));
  }
  return StencilSpec(*kind, dims);
}

inline std::vector<Case> spmv_structured_cases(const Options& o, const std::vector<std::string>& variants) {
  const StencilSpec spec = stencil_from(o);
  auto A = std::make_shared<Mat>(io::gen_stencil_matrix(spec));
  auto x = std::make_shared<std::vector<double>>(io::random_vector(A->num_cols(), o.seed));
  auto ys = std::make_shared<std::vector<double>>(static_cast<std::size_t>(A->num_rows()));
  auto yg = std::make_shared<std::vector<double>>(static_cast<std::size_t>(A->num_rows()));
  auto h = std::make_shared<SpmvHandle>();
  std::vector<Case> out;
  for (const auto& v : variants) {
    Case c{v, A->num_rows(), A->num_cols(), A->nnz(), 0, std::string(to_string(spec.kind))};
    const bool structured = v == "structured";
    auto y = structured ? ys : yg;
    c.reset = [=] {
      if (structured && !h->structured) {
        // Pattern validation is a one-time cost per matrix; keep it out of
        // the timed region.
        std::vector<double> tmp(y->size());
        spmv_structured(*h, spec, 1.0, *A, std::span<const double>(*x), 0.0, std::span<double>(tmp));
      }
    };
    if (structured) {
      c.run = [=] { spmv_structured(*h, spec, 1.0, *A, std::span<const double>(*x), 0.0, std::span<double>(*y)); };
    } else {
      c.run = [=] { spmv(SpmvMode::Plain, 1.0, *A, std::span<const double>(*x), 0.0, std::span<double>(*y)); };
    }
    c.check = [=] {
      std::vector<double> ref(y->size());
      spmv(SpmvMode::Plain, 1.0, *A, std::span<const double>(*x), 0.0, std::span<double>(ref));
      return ref == *y;
    };
    out.push_back(std::move(c));
  }
  return out;
}

inline std::vector<Case> spgemm_cases(const Options& o, const std::vector<std::string>& variants) {
  std::vector<Case> out;
  for (std::int64_t n : sizes_or(o, 20000)) {
    auto A = std::make_shared<Mat>(sparse_input(o, n, or_default(o.nnz_per_row, 8), 0x21));
    auto B = std::make_shared<Mat>(A->num_rows() == A->num_cols() ? *A : transpose(*A));
    for (const auto& v : variants) {
      auto h = std::make_shared<SpgemmHandle>();
      h->accumulator = v == "hashmap" ? SpgemmAccumulator::Hashmap
                       : v == "dense" ? SpgemmAccumulator::Dense
                                      : SpgemmAccumulator::Auto;
      auto C = std::make_shared<Mat>();
      spgemm_symbolic(*h, *A, *B);
      Case c{v, A->num_rows(), B->num_cols(), A->nnz(), 0, std::to_string(n)};
      const bool sym = o.include_symbolic;
      c.run = [=] {
        if (sym) spgemm_symbolic(*h, *A, *B);
        *C = spgemm_numeric(*h, *A, *B);
      };
      c.check = [=, seed = o.seed] {
        return sample_rows(
            *C, seed, [&](ordinal_t i) { return product_row(*A, *B, i); },
            [&](ordinal_t i, ordinal_t col) { return row_scale(*A, *B, i, col); }, 1e-12);
      };
      out.push_back(std::move(c));
    }
  }
  return out;
}

inline std::vector<Case> spgemm_jacobi_cases(const Options& o, const std::vector<std::string>& variants) {
  std::vector<Case> out;
  for (std::int64_t n : sizes_or(o, 20000)) {
    const auto per = or_default(o.nnz_per_row, 8);
    auto A = std::make_shared<Mat>(
        io::gen_diag_dominant(static_cast<ordinal_t>(n), static_cast<ordinal_t>(std::min(per, n)), o.seed ^ 0x31));
    auto B = std::make_shared<Mat>(io::gen_random_crs(static_cast<ordinal_t>(n), static_cast<ordinal_t>(n),
                                                      static_cast<ordinal_t>(std::min(per, n)), o.seed ^ 0x32));
    auto dinv = std::make_shared<std::vector<double>>(verify::inverse_diagonal(*A));
    const double omega = 2.0 / 3.0;
    auto fused = std::make_shared<Mat>();
    for (const auto& v : variants) {
      Case c{v, A->num_rows(), B->num_cols(), A->nnz(), 0, std::to_string(n)};
      auto C = std::make_shared<Mat>();
      if (v == "fused") {
        auto h = std::make_shared<SpgemmHandle>();
        spgemm_jacobi_symbolic(*h, *A, *B);
        const bool sym = o.include_symbolic;
        c.run = [=] {
          if (sym) spgemm_jacobi_symbolic(*h, *A, *B);
          *C = spgemm_jacobi_numeric(*h, omega, std::span<const double>(*dinv), *A, *B);
        };
      } else {
        c.run = [=] { *C = verify::jacobi_reference(omega, *dinv, *A, *B).C; };
      }
      c.check = [=, seed = o.seed] {
        return sample_rows(
            *C, seed,
            [&](ordinal_t i) {
              auto row = product_row(*A, *B, i);
              for (auto& [col, val] : row) val *= -omega * (*dinv)[i];
              const auto br = B->row(i);
              for (std::size_t k = 0; k < br.size(); ++k) row[br.cols[k]] += br.vals[k];
              return row;
            },
            [&](ordinal_t i, ordinal_t col) {
              double s = std::abs(omega * (*dinv)[i]) * row_scale(*A, *B, i, col);
              const auto br = B->row(i);
              for (std::size_t k = 0; k < br.size(); ++k)
                if (br.cols[k] == col) s += std::abs(br.vals[k]);
              return s;
            },
            1e-12);
      };
      out.push_back(std::move(c));
    }
  }
  return out;
}

inline std::vector<Case> spadd_cases(const Options& o, const std::vector<std::string>& variants) {
  std::vector<Case> out;
  for (std::int64_t n : sizes_or(o, 100000)) {
    const auto per = or_default(o.nnz_per_row, 30);
    auto A = std::make_shared<Mat>(sparse_input(o, n, per, 0x41));
    std::mt19937_64 vr(o.seed ^ 0x42);
    auto B = std::make_shared<Mat>(o.matrix.empty()
                                       ? io::gen_random_crs(A->num_rows(), A->num_cols(),
                                                            static_cast<ordinal_t>(std::min<std::int64_t>(per, A->num_cols())),
                                                            o.seed ^ 0x42)
                                       : verify::detail::revalue(*A, vr));
    for (const auto& v : variants) {
      auto h = std::make_shared<SpaddHandle>();
      h->merge = v == "bitonic" ? SpaddMerge::Bitonic : SpaddMerge::Sequential;
      const bool sorted = v != "unsorted";
      spadd_symbolic(*h, *A, *B, sorted);
      auto C = std::make_shared<Mat>();
      Case c{v, A->num_rows(), A->num_cols(), A->nnz() + B->nnz(), 0, std::to_string(n)};
      const bool sym = o.include_symbolic;
      c.run = [=] {
        if (sym) spadd_symbolic(*h, *A, *B, sorted);
        *C = spadd_numeric(*h, 1.0, *A, -0.5, *B);
      };
      c.check = [=, seed = o.seed] {
        return sample_rows(
            *C, seed,
            [&](ordinal_t i) {
              std::map<ordinal_t, double> row;
              const auto ar = A->row(i), br = B->row(i);
              for (std::size_t k = 0; k < ar.size(); ++k) row[ar.cols[k]] += ar.vals[k];
              for (std::size_t k = 0; k < br.size(); ++k) row[br.cols[k]] += -0.5 * br.vals[k];
              return row;
            },
            [&](ordinal_t i, ordinal_t col) {
              double s = 0.0;
              const auto ar = A->row(i), br = B->row(i);
              for (std::size_t k = 0; k < ar.size(); ++k)
                if (ar.cols[k] == col) s += std::abs(ar.vals[k]);
              for (std::size_t k = 0; k < br.size(); ++k)
                if (br.cols[k] == col) s += 0.5 * std::abs(br.vals[k]);
              return s;
            },
            1e-13);
      };
      out.push_back(std::move(c));
    }
  }
  return out;
}

// Lower triangle (with diagonal) of a loaded matrix.
inline Mat lower_part(const Mat& m) {
  std::vector<ordinal_t> ri, ci;
  std::vector<double> v;
  for (ordinal_t i = 0; i < m.num_rows(); ++i) {
    const auto r = m.row(i);
    for (std::size_t k = 0; k < r.size(); ++k) {
      if (r.cols[k] > i) continue;
      ri.push_back(i);
      ci.push_back(r.cols[k]);
      v.push_back(r.vals[k]);
    }
  }
  return canonicalize(from_triplets<double>(m.num_rows(), m.num_cols(), ri, ci, v));
}

inline std::vector<Case> sptrsv_cases(const Options& o, const std::vector<std::string>& variants) {
  std::vector<Case> out;
  for (std::int64_t n : sizes_or(o, 100000)) {
    auto L = std::make_shared<Mat>(
        o.matrix.empty() ? io::gen_random_triangular(static_cast<ordinal_t>(n),
                                                     static_cast<ordinal_t>(or_default(o.nnz_per_row, 8)), Uplo::Lower,
                                                     o.seed ^ 0x51)
                         : lower_part(io::read_matrix_market(std::filesystem::path(o.matrix))));
    auto b = std::make_shared<std::vector<double>>(io::random_vector(L->num_rows(), o.seed));
    for (const auto& v : variants) {
      auto h = std::make_shared<SptrsvHandle>();
      h->uplo = Uplo::Lower;
      h->chaining = v == "chain";
      sptrsv_symbolic(*h, *L);
      auto x = std::make_shared<std::vector<double>>(b->size());
      Case c{v, L->num_rows(), L->num_cols(), L->nnz(), 0, std::to_string(n)};
      const bool sym = o.include_symbolic;
      c.run = [=] {
        if (sym) sptrsv_symbolic(*h, *L);
        sptrsv_solve(*h, *L, std::span<const double>(*b), std::span<double>(*x));
      };
      c.check = [=] { return verify::solve_residual(*L, *x, *b) <= 1e-12; };
      out.push_back(std::move(c));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

using batched::BatchLayout;
using batched::DenseBatch;

inline BatchLayout layout_of(const std::string& v) {
  if (v == "interleaved") return BatchLayout::Interleaved;
  if (v == "contiguous") return BatchLayout::Contiguous;
  throw std::invalid_argument("unknown layout '" + v + "'");
}

// Batched cases share the structure: fresh inputs restored before every
// repetition, checked against the dense oracle on the first and last
// matrices.
inline std::vector<Case> batched_cases(const Options& o, const std::vector<std::string>& variants) {
  std::vector<Case> out;
  const std::string k = o.kernel;
  const std::vector<std::int64_t> sizes = o.sizes.empty() ? std::vector<std::int64_t>{3, 5, 7, 9, 11, 13, 15} : o.sizes;
  const std::int64_t nb = or_default(o.batch, 16384);
  for (std::int64_t s64 : sizes) {
    const auto s = static_cast<ordinal_t>(s64);
    for (const auto& v : variants) {
      const BatchLayout lay = layout_of(v);
      batched::TriangleSpec spec;  // lower, non-unit, left, no transpose
      DenseBatch<double> a0(nb, s, s), b0(nb, s, k == "batched-trsv" ? 1 : s), c0(nb, s, s);
      io::fill_random(a0, o.seed ^ 0x61);
      io::fill_random(b0, o.seed ^ 0x62);
      io::fill_random(c0, o.seed ^ 0x63);
      if (k == "batched-lu") io::make_diag_dominant(a0);
      if (k == "batched-trtri" || k == "batched-trsv" || k == "batched-trmm") io::make_triangular(a0, Uplo::Lower);
      struct State {
        DenseBatch<double> a0, b0, c0, a, b, c;
      };
      auto st = std::make_shared<State>();
      st->a0 = a0.to_layout(lay);
      st->b0 = b0.to_layout(lay);
      st->c0 = c0.to_layout(lay);
      Case c{v, s, s, 0, nb, std::to_string(s)};
      c.reset = [st] {
        st->a = st->a0;
        st->b = st->b0;
        st->c = st->c0;
      };
      if (k == "batched-gemm") {
        c.run = [st] { batched::batched_gemm(1.0, st->a, st->b, 0.5, st->c); };
      } else if (k == "batched-trmm") {
        c.run = [st, spec] { batched::batched_trmm(spec, 1.0, st->a, st->b); };
      } else if (k == "batched-trtri") {
        c.run = [st, spec] { batched::batched_trtri(spec, st->a); };
      } else if (k == "batched-lu") {
        c.run = [st] { batched::batched_lu(st->a); };
      } else {
        c.run = [st, spec] { batched::batched_trsv(spec, st->a, st->b); };
      }
      c.check = [st, k, s, nb, spec] {
        namespace vd = verify::detail;
        for (std::int64_t m : {std::int64_t{0}, nb - 1}) {
          if (m < 0) continue;
          const auto A = vd::extract(st->a0, m), B = vd::extract(st->b0, m), C = vd::extract(st->c0, m);
          const auto T = vd::effective_triangle(A, spec);
          if (k == "batched-gemm") {
            const auto want = oracle::add(0.5, C, 1.0, oracle::multiply(A, B));
            const auto mag = oracle::add(0.5, vd::abs_of(C), 1.0, oracle::multiply(vd::abs_of(A), vd::abs_of(B)));
            const auto got = vd::extract(st->c, m);
            for (std::size_t e = 0; e < got.a.size(); ++e)
              if (!oracle::close(got.a[e], want.a[e], mag.a[e], 1e-13)) return false;
          } else if (k == "batched-trmm") {
            const auto want = oracle::multiply(T, B);
            const auto mag = oracle::multiply(vd::abs_of(T), vd::abs_of(B));
            const auto got = vd::extract(st->b, m);
            for (std::size_t e = 0; e < got.a.size(); ++e)
              if (!oracle::close(got.a[e], want.a[e], mag.a[e], 1e-13)) return false;
          } else if (k == "batched-trtri") {
            const auto p = oracle::multiply(T, vd::effective_triangle(vd::extract(st->a, m), spec));
            for (ordinal_t i = 0; i < s; ++i)
              for (ordinal_t j = 0; j < s; ++j)
                if (std::abs(p(i, j) - (i == j ? 1.0 : 0.0)) > 1e-11) return false;
          } else if (k == "batched-lu") {
            const auto f = vd::extract(st->a, m);
            oracle::Dense<double> L(s, s), U(s, s);
            for (ordinal_t i = 0; i < s; ++i)
              for (ordinal_t j = 0; j < s; ++j) {
                if (j < i) L(i, j) = f(i, j);
                else U(i, j) = f(i, j);
                if (i == j) L(i, j) = 1.0;
              }
            if (vd::inf_norm(oracle::add(1.0, oracle::multiply(L, U), -1.0, A)) > 1e-11 * vd::inf_norm(A)) return false;
          } else {
            const auto x = vd::extract(st->b, m);
            const auto r = oracle::add(1.0, oracle::multiply(T, x), -1.0, B);
            if (vd::inf_norm(r) > 1e-12 * (vd::inf_norm(T) * vd::inf_norm(x) + vd::inf_norm(B))) return false;
          }
        }
        return true;
      };
      out.push_back(std::move(c));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

inline StaticCrsGraph graph_input(const Options& o, std::int64_t n, std::uint64_t salt) {
  if (!o.matrix.empty()) return io::read_matrix_market(std::filesystem::path(o.matrix)).graph();
  return io::gen_random_graph(static_cast<ordinal_t>(n), static_cast<ordinal_t>(or_default(o.nnz_per_row, 8)),
                              o.seed ^ salt);
}

inline std::vector<Case> coloring_cases(const Options& o, const std::vector<std::string>& variants) {
  std::vector<Case> out;
  for (std::int64_t n : sizes_or(o, 100000)) {
    auto g = std::make_shared<StaticCrsGraph>(o.kernel == "color-bgpc"
                                                  ? sparse_input(o, n, or_default(o.nnz_per_row, 8), 0x71).graph()
                                                  : graph_input(o, n, 0x72));
    for (const auto& v : variants) {
      auto result = std::make_shared<graph::Coloring>();
      auto h = std::make_shared<ColoringHandle>();
      h->algorithm = v == "EB" ? ColoringAlgorithm::EB
                     : v == "VB2" ? ColoringAlgorithm::VB2
                     : v == "NB" ? ColoringAlgorithm::NB
                                 : ColoringAlgorithm::VB;
      Case c{v, g->num_rows(), g->num_cols(), g->nnz(), 0, std::to_string(n)};
      const std::string k = o.kernel;
      c.run = [=] {
        if (k == "color-d1") *result = graph::color_d1(*h, *g);
        else if (k == "color-d2") *result = graph::color_d2(*h, *g);
        else *result = graph::color_bgpc(*h, *g);
      };
      c.check = [=] {
        if (k == "color-bgpc") return static_cast<bool>(graph::verify_bgpc(*g, result->colors));
        return static_cast<bool>(graph::verify_coloring(*g, k == "color-d1" ? 1 : 2, result->colors));
      };
      out.push_back(std::move(c));
    }
  }
  return out;
}

inline std::vector<Case> mis2_cases(const Options& o, const std::vector<std::string>& variants) {
  std::vector<Case> out;
  for (std::int64_t n : sizes_or(o, 100000)) {
    auto g = std::make_shared<StaticCrsGraph>(graph_input(o, n, 0x81));
    for (const auto& v : variants) {
      Case c{v, g->num_rows(), g->num_cols(), g->nnz(), 0, std::to_string(n)};
      const std::uint64_t seed = o.seed;
      if (o.kernel == "mis2") {
        auto r = std::make_shared<graph::Mis2Result>();
        c.run = [=] { *r = graph::mis2(*g, seed); };
        c.check = [=] { return oracle::check_mis2(*g, r->in_set).empty(); };
      } else {
        auto r = std::make_shared<graph::Mis2Aggregates>();
        c.run = [=] { *r = graph::mis2_coarsen(*g, seed); };
        c.check = [=] { return verify::check_coarsening(*g, *r).empty(); };
      }
      out.push_back(std::move(c));
    }
  }
  return out;
}

inline std::vector<Case> sort_cases(const Options& o, const std::vector<std::string>& variants) {
  std::vector<Case> out;
  for (std::int64_t n : sizes_or(o, 1 << 20)) {
    std::mt19937_64 rng(o.seed ^ 0x91);
    auto orig = std::make_shared<std::vector<std::uint32_t>>(static_cast<std::size_t>(n));
    for (auto& x : *orig) x = static_cast<std::uint32_t>(rng());
    for (const auto& v : variants) {
      auto keys = std::make_shared<std::vector<std::uint32_t>>();
      auto segs = std::make_shared<std::vector<SortSegment>>();
      if (v == "segmented") {
        // 256-element segments.
        for (std::int64_t p = 0; p < n; p += 256) segs->push_back({p, std::min<std::int64_t>(256, n - p)});
      }
      auto init = std::make_shared<std::vector<std::uint32_t>>(*orig);
      if (v == "merge") {
        const auto half = init->begin() + static_cast<std::ptrdiff_t>(init->size() / 2);
        std::sort(init->begin(), half);
        std::sort(half, init->end(), std::greater<>());
      }
      Case c{v, n, 1, n, 0, std::to_string(n)};
      c.reset = [=] { *keys = *init; };
      if (v == "bitonic") c.run = [=] { bitonic_sort(std::span<std::uint32_t>(*keys)); };
      else if (v == "segmented")
        c.run = [=] { bitonic_sort_segmented(std::span<std::uint32_t>(*keys), std::span<const SortSegment>(*segs)); };
      else if (v == "radix") c.run = [=] { radix_sort(std::span<std::uint32_t>(*keys)); };
      else c.run = [=] { bitonic_merge(std::span<std::uint32_t>(*keys)); };
      c.check = [=] {
        if (v != "segmented") return std::is_sorted(keys->begin(), keys->end());
        for (const auto& s : *segs)
          if (!std::is_sorted(keys->begin() + s.offset, keys->begin() + s.offset + s.length)) return false;
        return true;
      };
      out.push_back(std::move(c));
    }
  }
  return out;
}

inline std::vector<Case> matrix_io_cases(const Options& o, const std::vector<std::string>& variants) {
  std::vector<Case> out;
  for (std::int64_t n : sizes_or(o, 10000)) {
    auto A = std::make_shared<Mat>(sparse_input(o, n, or_default(o.nnz_per_row, 10), 0xa1));
    std::ostringstream os;
    io::write_matrix_market(*A, os);
    auto text = std::make_shared<std::string>(os.str());
    for (const auto& v : variants) {
      auto back = std::make_shared<Mat>();
      auto written = std::make_shared<std::string>();
      Case c{v, A->num_rows(), A->num_cols(), A->nnz(), 0, std::to_string(n)};
      if (v == "write") {
        c.run = [=] {
          std::ostringstream s;
          io::write_matrix_market(*A, s);
          *written = s.str();
        };
        c.check = [=] { return *written == *text; };
      } else {
        c.run = [=] {
          std::istringstream s(*text);
          *back = io::read_matrix_market(s);
        };
        c.check = [=] { return oracle::identical(*back, canonicalize(*A)); };
      }
      out.push_back(std::move(c));
    }
  }
  return out;
}

}  // namespace detail

inline std::vector<Case> make_cases(const Options& o, const std::vector<std::string>& variants) {
  const std::string& k = o.kernel;
  if (k == "spmv") return detail::spmv_cases(o, variants);
  if (k == "spmv-structured") return detail::spmv_structured_cases(o, variants);
  if (k == "spgemm") return detail::spgemm_cases(o, variants);
  if (k == "spgemm-jacobi") return detail::spgemm_jacobi_cases(o, variants);
  if (k == "spadd") return detail::spadd_cases(o, variants);
  if (k == "sptrsv") return detail::sptrsv_cases(o, variants);
  if (k.rfind("batched-", 0) == 0) return detail::batched_cases(o, variants);
  if (k.rfind("color-", 0) == 0) return detail::coloring_cases(o, variants);
  if (k.rfind("mis2", 0) == 0) return detail::mis2_cases(o, variants);
  if (k == "sort") return detail::sort_cases(o, variants);
  if (k == "matrix-io") return detail::matrix_io_cases(o, variants);
  throw std::invalid_argument("unknown kernel '" + k + "'");
}

}  // namespace pkern::bench
