// Copyright 2026 The pkern Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Randomized oracle checks, one routine per public kernel. Used by the
// command-line `verify` / `verify-all` and by the test suites.

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <exception>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "pkern/pkern.hpp"
#include "pkern/verify/oracles.hpp"

namespace pkern::verify {

struct Config {
  ordinal_t n = 0;         // problem size bound; 0 picks the kernel default
  int trials = 0;          // 0 picks the kernel default
  std::uint64_t seed = 1;
  std::int64_t batch = 0;  // batched kernels; 0 picks the default
  // Name of a kernel whose symbolic output is deliberately corrupted, to
  // show the checks catch it. Only "spadd" and "spgemm" honor it.
  std::string inject_fault;
};

struct Report {
  std::string kernel;
  int passed = 0;
  int total = 0;
  std::string first_failure;
  bool ok() const { return total > 0 && passed == total; }
};

namespace detail {

class Tally {
 public:
  explicit Tally(std::string kernel) { r_.kernel = std::move(kernel); }

  // f returns an empty string on success or a failure description.
  template <class F>
  void trial(int t, F&& f) {
    ++r_.total;
    std::string msg;
    try {
      msg = f();
    } catch (const std::exception& e) {
      msg = std::string("exception: ") + e.what();
    }
    if (msg.empty()) {
      ++r_.passed;
    } else if (r_.first_failure.empty()) {
      r_.first_failure = "trial " + std::to_string(t) + ": " + msg;
    }
  }

  Report report() && { return std::move(r_); }

 private:
  Report r_;
};

inline std::mt19937_64 trial_rng(std::uint64_t seed, int trial, std::uint64_t salt) {
  return std::mt19937_64(pkern::detail::mix64(pkern::detail::mix64(seed, salt), static_cast<std::uint64_t>(trial)));
}

inline ordinal_t uniform_int(std::mt19937_64& rng, ordinal_t lo, ordinal_t hi) {
  return std::uniform_int_distribution<ordinal_t>(lo, hi)(rng);
}

inline double uniform(std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int pick(const Config& c, int def) { return c.trials > 0 ? c.trials : def; }
inline ordinal_t pick_n(const Config& c, ordinal_t def) { return c.n > 0 ? c.n : def; }

// Unsorted rows with duplicate columns: a random matrix plus, in some rows,
// repeated entries, then each row shuffled.
inline CrsMatrix<double> messy_matrix(std::mt19937_64& rng, ordinal_t m, ordinal_t n, ordinal_t per_row) {
  std::vector<ordinal_t> ri, ci;
  std::vector<double> v;
  std::vector<offset_t> offs{0};
  for (ordinal_t i = 0; i < m; ++i) {
    const ordinal_t k = n == 0 ? 0 : uniform_int(rng, 0, std::min(per_row, n));
    std::vector<std::pair<ordinal_t, double>> row;
    for (ordinal_t t = 0; t < k; ++t) row.emplace_back(uniform_int(rng, 0, n - 1), uniform(rng));
    if (!row.empty() && uniform_int(rng, 0, 2) == 0) row.push_back({row.front().first, uniform(rng)});
    std::shuffle(row.begin(), row.end(), rng);
    for (auto& [c, x] : row) {
      ci.push_back(c);
      v.push_back(x);
    }
    offs.push_back(static_cast<offset_t>(ci.size()));
  }
  return build_crs(m, n, std::move(offs), std::move(ci), std::move(v));
}

// Same pattern, fresh values.
template <class Scalar>
CrsMatrix<Scalar> revalue(const CrsMatrix<Scalar>& m, std::mt19937_64& rng) {
  std::vector<Scalar> v(static_cast<std::size_t>(m.nnz()));
  for (auto& x : v) x = static_cast<Scalar>(uniform(rng));
  return m.with_values(std::move(v));
}

// Shuffles the entries of every row (pattern changes order only).
inline CrsMatrix<double> shuffle_rows(const CrsMatrix<double>& m, std::mt19937_64& rng) {
  std::vector<ordinal_t> ci(m.col_indices().begin(), m.col_indices().end());
  std::vector<double> v(m.values().begin(), m.values().end());
  const auto o = m.row_offsets();
  for (ordinal_t i = 0; i < m.num_rows(); ++i) {
    std::vector<std::size_t> p(static_cast<std::size_t>(o[i + 1] - o[i]));
    std::iota(p.begin(), p.end(), static_cast<std::size_t>(o[i]));
    std::shuffle(p.begin(), p.end(), rng);
    for (std::size_t k = 0; k < p.size(); ++k) {
      ci[o[i] + k] = m.col_indices()[p[k]];
      v[o[i] + k] = m.values()[p[k]];
    }
  }
  return build_crs(m.num_rows(), m.num_cols(), std::vector<offset_t>(o.begin(), o.end()), std::move(ci), std::move(v));
}

// Adds one to the count of row 0 in a symbolic result.
inline void corrupt_offsets(std::vector<offset_t>& offs) {
  for (std::size_t i = 1; i < offs.size(); ++i) ++offs[i];
}

template <class Scalar>
std::string check_spmv_case(std::mt19937_64& rng, const CrsMatrix<Scalar>& A, int k, SpmvMode mode, double tol) {
  const bool tr = is_transpose_mode(mode);
  const ordinal_t in = tr ? A.num_rows() : A.num_cols();
  const ordinal_t out = tr ? A.num_cols() : A.num_rows();
  auto rnd = [&]() {
    if constexpr (is_complex_v<Scalar>) {
      return Scalar(uniform(rng), uniform(rng));
    } else {
      return Scalar(uniform(rng));
    }
  };
  const Scalar alpha = rnd(), beta = rnd();
  MultiVector<Scalar> X(in, k), Y(out, k);
  for (ordinal_t j = 0; j < k; ++j) {
    for (ordinal_t i = 0; i < in; ++i) X(i, j) = rnd();
    for (ordinal_t i = 0; i < out; ++i) Y(i, j) = rnd();
  }
  const MultiVector<Scalar> Y0 = Y;
  spmv(mode, alpha, A, X, beta, Y);

  const auto D = oracle::densify(A);
  const auto Dabs = oracle::densify_abs(A);
  for (ordinal_t j = 0; j < k; ++j) {
    const auto ax = oracle::matvec(D, std::span<const Scalar>(X.column(j)), tr, is_conjugate_mode(mode));
    std::vector<double> xa(static_cast<std::size_t>(in));
    for (ordinal_t i = 0; i < in; ++i) xa[i] = static_cast<double>(abs_value(X(i, j)));
    const auto mag = oracle::matvec(Dabs, std::span<const double>(xa), tr, false);
    for (ordinal_t i = 0; i < out; ++i) {
      const Scalar want = beta * Y0(i, j) + alpha * ax[i];
      const double scale = static_cast<double>(abs_value(beta) * abs_value(Y0(i, j)) + abs_value(alpha) * mag[i]);
      if (!oracle::close(Y(i, j), want, scale, tol)) {
        std::ostringstream os;
        os << "spmv(" << to_string(mode) << ") k=" << k << " entry (" << i << "," << j << ") differs from the dense oracle";
        return os.str();
      }
    }
    // Single-vector call on this column must agree bit for bit.
    std::vector<Scalar> y1(Y0.column(j).begin(), Y0.column(j).end());
    spmv(mode, alpha, A, std::span<const Scalar>(X.column(j)), beta, std::span<Scalar>(y1));
    if (!std::equal(y1.begin(), y1.end(), Y.column(j).begin())) {
      return "multivector column " + std::to_string(j) + " differs from the single-vector result";
    }
  }
  return {};
}

}  // namespace detail

// ---------------------------------------------------------------------------

inline Report verify_spmv(const Config& cfg) {
  detail::Tally t("spmv");
  const ordinal_t N = detail::pick_n(cfg, 60);
  const int trials = detail::pick(cfg, 40);
  const SpmvMode modes[] = {SpmvMode::Plain, SpmvMode::Transpose, SpmvMode::Conjugate, SpmvMode::ConjugateTranspose};
  for (int tr = 0; tr < trials; ++tr) {
    t.trial(tr, [&]() -> std::string {
      auto rng = detail::trial_rng(cfg.seed, tr, 0x51);
      const ordinal_t m = detail::uniform_int(rng, 1, N), n = detail::uniform_int(rng, 1, N);
      const ordinal_t per = detail::uniform_int(rng, 0, std::min<ordinal_t>(n, 12));
      const int k = tr % 2 == 0 ? 1 : 4;
      const auto A = io::gen_random_crs(m, n, per, rng());
      if (tr % 4 == 3) {
        // Complex values so the conjugate modes differ from the plain ones.
        const auto B = io::gen_random_crs(m, n, per, rng());
        std::vector<std::complex<double>> cv(static_cast<std::size_t>(A.nnz()));
        for (std::size_t e = 0; e < cv.size(); ++e) cv[e] = {A.values()[e], detail::uniform(rng)};
        const CrsMatrix<std::complex<double>> Ac(A.shared_graph(), std::move(cv));
        for (SpmvMode md : modes) {
          if (auto msg = detail::check_spmv_case(rng, Ac, k, md, 1e-12); !msg.empty()) return "complex " + msg;
        }
        return {};
      }
      for (SpmvMode md : modes) {
        if (auto msg = detail::check_spmv_case(rng, A, k, md, 1e-12); !msg.empty()) return msg;
      }
      return {};
    });
  }
  return std::move(t).report();
}

inline Report verify_spmv_structured(const Config& cfg) {
  detail::Tally t("spmv-structured");
  const ordinal_t N = detail::pick_n(cfg, 12);
  const int trials = detail::pick(cfg, 20);
  const StencilKind kinds[] = {StencilKind::Pt3, StencilKind::Pt5, StencilKind::Pt7, StencilKind::Pt9,
                               StencilKind::Pt27};
  for (int tr = 0; tr < trials; ++tr) {
    t.trial(tr, [&]() -> std::string {
      auto rng = detail::trial_rng(cfg.seed, tr, 0x52);
      const StencilKind kind = kinds[tr % 5];
      const int nd = stencil_dimensionality(kind);
      // Keep every box at or below N^3 points.
      const ordinal_t side = nd == 1 ? N * N * N : nd == 2 ? static_cast<ordinal_t>(std::lround(std::pow(N, 1.5))) : N;
      std::vector<ordinal_t> dims;
      for (int d = 0; d < nd; ++d) dims.push_back(detail::uniform_int(rng, 1, std::max<ordinal_t>(1, side)));
      const StencilSpec spec(kind, dims);
      const auto A = io::gen_stencil_matrix(spec);
      const auto x = io::random_vector(A.num_cols(), rng());
      const auto y0 = io::random_vector(A.num_rows(), rng());
      const double alpha = detail::uniform(rng), beta = detail::uniform(rng);
      std::vector<double> ys = y0, yg = y0;
      SpmvHandle h;
      spmv_structured(h, spec, alpha, A, std::span<const double>(x), beta, std::span<double>(ys));
      spmv(SpmvMode::Plain, alpha, A, std::span<const double>(x), beta, std::span<double>(yg));
      const auto mag = oracle::abs_matvec(A, std::span<const double>(x));
      for (std::size_t i = 0; i < ys.size(); ++i) {
        const double scale = std::abs(beta * y0[i]) + std::abs(alpha) * mag[i];
        if (!oracle::close(ys[i], yg[i], scale, 1e-13)) {
          return std::string(to_string(kind)) + " row " + std::to_string(i) + " differs from general spmv";
        }
      }
      return {};
    });
  }
  return std::move(t).report();
}

inline Report verify_spgemm(const Config& cfg) {
  detail::Tally t("spgemm");
  const ordinal_t N = detail::pick_n(cfg, 40);
  const int trials = detail::pick(cfg, 50);
  const bool fault = cfg.inject_fault == "spgemm";
  for (int tr = 0; tr < trials; ++tr) {
    t.trial(tr, [&]() -> std::string {
      auto rng = detail::trial_rng(cfg.seed, tr, 0x53);
      const ordinal_t lo = std::max<ordinal_t>(1, N / 2);
      const ordinal_t m = detail::uniform_int(rng, lo, N), k = detail::uniform_int(rng, lo, N),
                      n = detail::uniform_int(rng, lo, N);
      const auto A = io::gen_random_crs(m, k, detail::uniform_int(rng, 0, std::min<ordinal_t>(k, 8)), rng());
      const auto B = io::gen_random_crs(k, n, detail::uniform_int(rng, 0, std::min<ordinal_t>(n, 8)), rng());

      const auto want_counts = oracle::product_row_counts(A.graph(), B.graph());
      SpgemmHandle hh, hd, hu;
      hh.accumulator = SpgemmAccumulator::Hashmap;
      hd.accumulator = SpgemmAccumulator::Dense;
      hu.accumulator = SpgemmAccumulator::Hashmap;
      hu.use_compression = false;
      spgemm_symbolic(hh, A, B);
      if (fault) detail::corrupt_offsets(hh.c_row_offsets);
      spgemm_symbolic(hd, A, B);
      spgemm_symbolic(hu, A, B);
      if (oracle::row_counts(hh.c_row_offsets) != want_counts) return "symbolic row counts differ from the oracle";
      if (hu.c_row_offsets != hh.c_row_offsets) return "compression changed the symbolic counts";
      if (hd.c_row_offsets != hh.c_row_offsets) return "dense and hashmap symbolic counts differ";

      const auto Ch = spgemm_numeric(hh, A, B);
      const auto Cd = spgemm_numeric(hd, A, B);
      const auto want = oracle::multiply(oracle::densify(A), oracle::densify(B));
      const auto scale = oracle::multiply(oracle::densify_abs(A), oracle::densify_abs(B));
      if (!oracle::matches_dense(Ch, want, scale, 1e-12)) return "numeric product differs from the dense oracle";
      if (!oracle::identical(Ch, Cd)) return "dense and hashmap accumulators produced different output";
      if (oracle::row_counts(Ch.row_offsets()) != want_counts) return "numeric pattern differs from symbolic";

      // Reuse with new values on the same pattern.
      const auto A2 = detail::revalue(A, rng), B2 = detail::revalue(B, rng);
      if (!oracle::identical(spgemm_numeric(hh, A2, B2), spgemm(A2, B2))) {
        return "numeric reuse differs from a fresh run";
      }
      return {};
    });
  }
  return std::move(t).report();
}

// Three-kernel reference for the Jacobi product: E = A*B, F = D^-1 E,
// C = B - omega F, all with library kernels. Returns C and the multiplies
// the three steps perform.
struct JacobiReference {
  CrsMatrix<double> C;
  std::uint64_t multiplies = 0;
};

inline JacobiReference jacobi_reference(double omega, std::span<const double> dinv, const CrsMatrix<double>& A,
                                        const CrsMatrix<double>& B) {
  SpgemmHandle h;
  spgemm_symbolic(h, A, B);
  const auto E = spgemm_numeric(h, A, B);
  std::vector<double> fv(E.values().begin(), E.values().end());
  std::uint64_t scale_mults = 0;
  for (ordinal_t i = 0; i < E.num_rows(); ++i) {
    for (offset_t p = E.row_offsets()[i]; p < E.row_offsets()[i + 1]; ++p) {
      fv[p] *= dinv[i];
      ++scale_mults;
    }
  }
  const auto F = E.with_values(std::move(fv));
  SpaddHandle ha;
  spadd_symbolic(ha, B, F, true);
  JacobiReference r{spadd_numeric(ha, 1.0, B, -omega, F), 0};
  r.multiplies = h.multiply_count + scale_mults + ha.multiply_count;
  return r;
}

inline std::vector<double> inverse_diagonal(const CrsMatrix<double>& A) {
  std::vector<double> d(static_cast<std::size_t>(A.num_rows()), 0.0);
  for (ordinal_t i = 0; i < A.num_rows(); ++i) {
    const auto r = A.row(i);
    for (std::size_t k = 0; k < r.size(); ++k)
      if (r.cols[k] == i) d[i] += r.vals[k];
    d[i] = 1.0 / d[i];
  }
  return d;
}

inline Report verify_spgemm_jacobi(const Config& cfg) {
  detail::Tally t("spgemm-jacobi");
  const ordinal_t N = detail::pick_n(cfg, 30);
  const int trials = detail::pick(cfg, 30);
  for (int tr = 0; tr < trials; ++tr) {
    t.trial(tr, [&]() -> std::string {
      auto rng = detail::trial_rng(cfg.seed, tr, 0x54);
      const ordinal_t n = detail::uniform_int(rng, 1, N), p = detail::uniform_int(rng, 1, N);
      const auto A = io::gen_diag_dominant(n, detail::uniform_int(rng, 1, std::min<ordinal_t>(n, 6)), rng());
      const auto B = io::gen_random_crs(n, p, detail::uniform_int(rng, 0, std::min<ordinal_t>(p, 6)), rng());
      const double omega = detail::uniform(rng, 0.1, 1.5);
      const auto dinv = inverse_diagonal(A);

      SpgemmHandle h;
      spgemm_jacobi_symbolic(h, A, B);
      const auto C = spgemm_jacobi_numeric(h, omega, std::span<const double>(dinv), A, B);
      const auto ref = jacobi_reference(omega, dinv, A, B);

      // Scale: |B| + omega |D^-1| |A| |B|.
      auto Dabs = oracle::densify_abs(A);
      for (ordinal_t i = 0; i < n; ++i)
        for (ordinal_t j = 0; j < n; ++j) Dabs(i, j) *= std::abs(omega * dinv[i]);
      const auto scale = oracle::add(1.0, oracle::densify_abs(B), 1.0, oracle::multiply(Dabs, oracle::densify_abs(B)));
      if (!oracle::matches_dense(C, oracle::densify(ref.C), scale, 1e-12)) {
        return "fused result differs from the three-kernel composition";
      }
      if (oracle::row_counts(C.row_offsets()) != oracle::row_counts(ref.C.row_offsets())) {
        return "fused pattern differs from the composition pattern";
      }
      return {};
    });
  }
  return std::move(t).report();
}

inline Report verify_spadd(const Config& cfg) {
  detail::Tally t("spadd");
  const ordinal_t N = detail::pick_n(cfg, 60);
  const int trials = detail::pick(cfg, 50);
  const bool fault = cfg.inject_fault == "spadd";
  for (int tr = 0; tr < trials; ++tr) {
    t.trial(tr, [&]() -> std::string {
      auto rng = detail::trial_rng(cfg.seed, tr, 0x55);
      const ordinal_t m = detail::uniform_int(rng, 1, N), n = detail::uniform_int(rng, 1, N);
      const double alpha = detail::uniform(rng), beta = detail::uniform(rng);

      // Messy inputs (unsorted, duplicates) through the unsorted path.
      const auto A = detail::messy_matrix(rng, m, n, 10);
      const auto B = detail::messy_matrix(rng, m, n, 10);
      SpaddHandle h;
      spadd_symbolic(h, A, B, false);
      if (fault) detail::corrupt_offsets(h.c_row_offsets);
      if (oracle::row_counts(h.c_row_offsets) != oracle::union_row_counts(A.graph(), B.graph())) {
        return "symbolic row counts differ from the union oracle";
      }
      const auto C = spadd_numeric(h, alpha, A, beta, B);
      const auto want = oracle::add(alpha, oracle::densify(A), beta, oracle::densify(B));
      const auto scale = oracle::add(std::abs(alpha), oracle::densify_abs(A), std::abs(beta), oracle::densify_abs(B));
      if (!oracle::matches_dense(C, want, scale, 1e-13)) return "result differs from dense alpha*A + beta*B";
      if (!C.sorted_rows() || !C.merged_rows()) return "output rows are not sorted and merged";

      // Merged inputs: sorted (both merges) and unsorted paths agree exactly.
      const auto As = canonicalize(A), Bs = canonicalize(B);
      const auto Au = detail::shuffle_rows(As, rng), Bu = detail::shuffle_rows(Bs, rng);
      SpaddHandle hs, hb, hu;
      hb.merge = SpaddMerge::Bitonic;
      spadd_symbolic(hs, As, Bs, true);
      spadd_symbolic(hb, As, Bs, true);
      spadd_symbolic(hu, Au, Bu, false);
      const auto Cs = spadd_numeric(hs, alpha, As, beta, Bs);
      if (!oracle::identical(Cs, spadd_numeric(hb, alpha, As, beta, Bs))) return "bitonic merge path differs";
      if (!oracle::identical(Cs, spadd_numeric(hu, alpha, Au, beta, Bu))) return "sorted and unsorted paths differ";

      // Numeric-only rerun with new values.
      const auto A2 = detail::revalue(A, rng), B2 = detail::revalue(B, rng);
      if (!oracle::identical(spadd_numeric(h, alpha, A2, beta, B2), spadd(alpha, A2, beta, B2))) {
        return "numeric reuse differs from a fresh run";
      }
      return {};
    });
  }
  return std::move(t).report();
}

// ||A x - b||_inf / (||A||_inf ||x||_inf + ||b||_inf), computed directly
// from the stored entries.
inline double solve_residual(const CrsMatrix<double>& A, std::span<const double> x, std::span<const double> b) {
  double rmax = 0.0, anorm = 0.0, xnorm = 0.0, bnorm = 0.0;
  for (ordinal_t i = 0; i < A.num_rows(); ++i) {
    const auto r = A.row(i);
    double s = 0.0, rowabs = 0.0;
    for (std::size_t k = 0; k < r.size(); ++k) {
      s += r.vals[k] * x[r.cols[k]];
      rowabs += std::abs(r.vals[k]);
    }
    rmax = std::max(rmax, std::abs(s - b[i]));
    anorm = std::max(anorm, rowabs);
    xnorm = std::max(xnorm, std::abs(x[i]));
    bnorm = std::max(bnorm, std::abs(b[i]));
  }
  const double denom = anorm * xnorm + bnorm;
  return denom == 0.0 ? rmax : rmax / denom;
}

inline std::string check_sptrsv_case(const CrsMatrix<double>& L, Uplo uplo, std::span<const double> b) {
  SptrsvHandle on, off;
  on.uplo = off.uplo = uplo;
  off.chaining = false;
  const auto& s = sptrsv_symbolic(on, L);
  sptrsv_symbolic(off, L);
  if (auto msg = oracle::check_level_schedule(L.graph(), uplo, s); !msg.empty()) return "schedule: " + msg;
  if (s.num_levels != oracle::longest_chain(L.graph(), uplo)) return "level count differs from the longest chain";
  const auto x = sptrsv_solve(on, L, b);
  const auto x2 = sptrsv_solve(off, L, b);
  if (x != x2) return "chaining changed the solution";
  if (solve_residual(L, x, b) > 1e-12) return "residual above 1e-12";
  return {};
}

inline Report verify_sptrsv(const Config& cfg) {
  detail::Tally t("sptrsv");
  const ordinal_t N = detail::pick_n(cfg, 500);
  const int trials = detail::pick(cfg, 30);
  for (int tr = 0; tr < trials; ++tr) {
    t.trial(tr, [&]() -> std::string {
      auto rng = detail::trial_rng(cfg.seed, tr, 0x56);
      const Uplo uplo = tr % 2 == 0 ? Uplo::Lower : Uplo::Upper;
      const ordinal_t n = detail::uniform_int(rng, 1, N);
      const auto L = io::gen_random_triangular(n, detail::uniform_int(rng, 0, 8), uplo, rng());
      const auto b = io::random_vector(n, rng());
      return check_sptrsv_case(L, uplo, b);
    });
  }
  return std::move(t).report();
}

// ---------------------------------------------------------------------------
// Batched kernels. Every trial runs one size of the grid in both layouts.

namespace detail {

inline constexpr ordinal_t kBatchSizes[] = {3, 5, 7, 9, 11, 13, 15};

using batched::BatchLayout;
using batched::DenseBatch;

inline oracle::Dense<double> extract(const DenseBatch<double>& x, std::int64_t b) {
  oracle::Dense<double> d(x.rows(), x.cols());
  for (ordinal_t i = 0; i < x.rows(); ++i)
    for (ordinal_t j = 0; j < x.cols(); ++j) d(i, j) = x(b, i, j);
  return d;
}

// op(A) with the triangle and diagonal convention applied.
inline oracle::Dense<double> effective_triangle(const oracle::Dense<double>& A, const batched::TriangleSpec& s) {
  oracle::Dense<double> T(A.rows, A.cols);
  for (ordinal_t i = 0; i < A.rows; ++i)
    for (ordinal_t j = 0; j < A.cols; ++j) {
      const bool in = s.uplo == Uplo::Lower ? j <= i : j >= i;
      if (!in) continue;
      T(i, j) = (i == j && s.diag == Diag::Unit) ? 1.0 : A(i, j);
    }
  return s.trans == Trans::Transpose ? oracle::transpose(T) : T;
}

inline oracle::Dense<double> abs_of(const oracle::Dense<double>& A) {
  oracle::Dense<double> r = A;
  for (auto& v : r.a) v = std::abs(v);
  return r;
}

inline double inf_norm(const oracle::Dense<double>& A) {
  double best = 0.0;
  for (ordinal_t i = 0; i < A.rows; ++i) {
    double s = 0.0;
    for (ordinal_t j = 0; j < A.cols; ++j) s += std::abs(A(i, j));
    best = std::max(best, s);
  }
  return best;
}

inline batched::TriangleSpec random_spec(std::mt19937_64& rng) {
  batched::TriangleSpec s;
  s.uplo = uniform_int(rng, 0, 1) ? Uplo::Upper : Uplo::Lower;
  s.diag = uniform_int(rng, 0, 1) ? Diag::Unit : Diag::NonUnit;
  s.side = uniform_int(rng, 0, 1) ? Side::Right : Side::Left;
  s.trans = uniform_int(rng, 0, 1) ? Trans::Transpose : Trans::No;
  return s;
}

// Per-matrix bitwise equality across layouts.
inline bool same_values(const DenseBatch<double>& x, const DenseBatch<double>& y) {
  for (std::int64_t b = 0; b < x.batch_count(); ++b)
    for (ordinal_t i = 0; i < x.rows(); ++i)
      for (ordinal_t j = 0; j < x.cols(); ++j)
        if (std::bit_cast<std::uint64_t>(x(b, i, j)) != std::bit_cast<std::uint64_t>(y(b, i, j))) return false;
  return true;
}

// Runs `kernel` on copies of the inputs in both layouts and checks the
// outputs match bit for bit. Returns the contiguous result.
template <class F>
std::string run_both_layouts(std::vector<DenseBatch<double>> inputs, F&& kernel, std::vector<DenseBatch<double>>& out) {
  std::vector<DenseBatch<double>> inter;
  for (auto& x : inputs) inter.push_back(x.to_layout(BatchLayout::Interleaved));
  kernel(inputs);
  kernel(inter);
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    if (!same_values(inputs[k], inter[k])) return "contiguous and interleaved layouts differ";
  }
  out = std::move(inputs);
  return {};
}

inline std::int64_t batch_of(const Config& cfg) { return cfg.batch > 0 ? cfg.batch : 203; }

}  // namespace detail

inline Report verify_batched_gemm(const Config& cfg) {
  detail::Tally t("batched-gemm");
  const int trials = detail::pick(cfg, 7);
  const std::int64_t nb = detail::batch_of(cfg);
  for (int tr = 0; tr < trials; ++tr) {
    t.trial(tr, [&]() -> std::string {
      auto rng = detail::trial_rng(cfg.seed, tr, 0x57);
      const ordinal_t s = detail::kBatchSizes[tr % 7];
      batched::DenseBatch<double> A(nb, s, s), B(nb, s, s), C(nb, s, s);
      io::fill_random(A, rng());
      io::fill_random(B, rng());
      io::fill_random(C, rng());
      const double alpha = detail::uniform(rng), beta = detail::uniform(rng);
      std::vector<batched::DenseBatch<double>> out;
      auto msg = detail::run_both_layouts({A, B, C}, [&](auto& v) { batched::batched_gemm(alpha, v[0], v[1], beta, v[2]); }, out);
      if (!msg.empty()) return msg;
      for (std::int64_t b = 0; b < nb; ++b) {
        const auto a = detail::extract(A, b), bb = detail::extract(B, b), c0 = detail::extract(C, b);
        const auto want = oracle::add(beta, c0, alpha, oracle::multiply(a, bb));
        const auto scale = oracle::add(std::abs(beta), detail::abs_of(c0), std::abs(alpha),
                                       oracle::multiply(detail::abs_of(a), detail::abs_of(bb)));
        const auto got = detail::extract(out[2], b);
        for (std::size_t e = 0; e < got.a.size(); ++e)
          if (!oracle::close(got.a[e], want.a[e], scale.a[e], 1e-13)) return "matrix " + std::to_string(b) + " differs";
      }
      return {};
    });
  }
  return std::move(t).report();
}

inline Report verify_batched_trmm(const Config& cfg) {
  detail::Tally t("batched-trmm");
  const int trials = detail::pick(cfg, 14);
  const std::int64_t nb = detail::batch_of(cfg);
  for (int tr = 0; tr < trials; ++tr) {
    t.trial(tr, [&]() -> std::string {
      auto rng = detail::trial_rng(cfg.seed, tr, 0x58);
      const ordinal_t s = detail::kBatchSizes[tr % 7];
      const auto spec = detail::random_spec(rng);
      const ordinal_t bc = detail::uniform_int(rng, 1, s);
      batched::DenseBatch<double> A(nb, s, s);
      batched::DenseBatch<double> B = spec.side == Side::Left ? batched::DenseBatch<double>(nb, s, bc)
                                                              : batched::DenseBatch<double>(nb, bc, s);
      io::fill_random(A, rng());
      io::fill_random(B, rng());
      const double alpha = detail::uniform(rng);
      std::vector<batched::DenseBatch<double>> out;
      auto msg = detail::run_both_layouts({A, B}, [&](auto& v) { batched::batched_trmm(spec, alpha, v[0], v[1]); }, out);
      if (!msg.empty()) return msg;
      for (std::int64_t b = 0; b < nb; ++b) {
        const auto T = detail::effective_triangle(detail::extract(A, b), spec);
        const auto b0 = detail::extract(B, b);
        const auto prod = spec.side == Side::Left ? oracle::multiply(T, b0) : oracle::multiply(b0, T);
        const auto mag = spec.side == Side::Left ? oracle::multiply(detail::abs_of(T), detail::abs_of(b0))
                                                 : oracle::multiply(detail::abs_of(b0), detail::abs_of(T));
        const auto got = detail::extract(out[1], b);
        for (std::size_t e = 0; e < got.a.size(); ++e)
          if (!oracle::close(got.a[e], alpha * prod.a[e], std::abs(alpha) * mag.a[e], 1e-13))
            return "matrix " + std::to_string(b) + " differs";
      }
      return {};
    });
  }
  return std::move(t).report();
}

inline Report verify_batched_trtri(const Config& cfg) {
  detail::Tally t("batched-trtri");
  const int trials = detail::pick(cfg, 14);
  const std::int64_t nb = detail::batch_of(cfg);
  for (int tr = 0; tr < trials; ++tr) {
    t.trial(tr, [&]() -> std::string {
      auto rng = detail::trial_rng(cfg.seed, tr, 0x59);
      const ordinal_t s = detail::kBatchSizes[tr % 7];
      auto spec = detail::random_spec(rng);
      spec.trans = Trans::No;
      batched::DenseBatch<double> A(nb, s, s);
      io::fill_random(A, rng());
      io::make_triangular(A, spec.uplo);
      std::vector<batched::DenseBatch<double>> out;
      auto msg = detail::run_both_layouts({A}, [&](auto& v) { batched::batched_trtri(spec, v[0]); }, out);
      if (!msg.empty()) return msg;
      for (std::int64_t b = 0; b < nb; ++b) {
        const auto a = detail::extract(A, b), x = detail::extract(out[0], b);
        const auto prod = oracle::multiply(detail::effective_triangle(a, spec), detail::effective_triangle(x, spec));
        for (ordinal_t i = 0; i < s; ++i)
          for (ordinal_t j = 0; j < s; ++j) {
            if (std::abs(prod(i, j) - (i == j ? 1.0 : 0.0)) > 1e-11) return "A*inv(A) != I in matrix " + std::to_string(b);
            const bool in = spec.uplo == Uplo::Lower ? j <= i : j >= i;
            const bool kept = !in || (i == j && spec.diag == Diag::Unit);
            if (kept && x(i, j) != a(i, j)) return "entry outside the inverted triangle changed";
          }
      }
      return {};
    });
  }
  return std::move(t).report();
}

inline Report verify_batched_lu(const Config& cfg) {
  detail::Tally t("batched-lu");
  const int trials = detail::pick(cfg, 7);
  const std::int64_t nb = detail::batch_of(cfg);
  for (int tr = 0; tr < trials; ++tr) {
    t.trial(tr, [&]() -> std::string {
      auto rng = detail::trial_rng(cfg.seed, tr, 0x5a);
      const ordinal_t s = detail::kBatchSizes[tr % 7];
      batched::DenseBatch<double> A(nb, s, s);
      io::fill_random(A, rng());
      io::make_diag_dominant(A);
      std::vector<batched::DenseBatch<double>> out;
      auto msg = detail::run_both_layouts({A}, [&](auto& v) { batched::batched_lu(v[0]); }, out);
      if (!msg.empty()) return msg;
      for (std::int64_t b = 0; b < nb; ++b) {
        const auto a = detail::extract(A, b), f = detail::extract(out[0], b);
        oracle::Dense<double> L(s, s), U(s, s);
        for (ordinal_t i = 0; i < s; ++i)
          for (ordinal_t j = 0; j < s; ++j) {
            if (j < i) L(i, j) = f(i, j);
            else U(i, j) = f(i, j);
            if (i == j) L(i, j) = 1.0;
          }
        const auto diff = oracle::add(1.0, oracle::multiply(L, U), -1.0, a);
        if (detail::inf_norm(diff) > 1e-11 * detail::inf_norm(a)) return "L*U != A in matrix " + std::to_string(b);
      }
      return {};
    });
  }
  return std::move(t).report();
}

inline Report verify_batched_trsv(const Config& cfg) {
  detail::Tally t("batched-trsv");
  const int trials = detail::pick(cfg, 14);
  const std::int64_t nb = detail::batch_of(cfg);
  for (int tr = 0; tr < trials; ++tr) {
    t.trial(tr, [&]() -> std::string {
      auto rng = detail::trial_rng(cfg.seed, tr, 0x5b);
      const ordinal_t s = detail::kBatchSizes[tr % 7];
      auto spec = detail::random_spec(rng);
      spec.side = Side::Left;
      batched::DenseBatch<double> A(nb, s, s), B(nb, s, 1);
      io::fill_random(A, rng());
      io::make_triangular(A, spec.uplo);
      io::fill_random(B, rng());
      std::vector<batched::DenseBatch<double>> out;
      auto msg = detail::run_both_layouts({A, B}, [&](auto& v) { batched::batched_trsv(spec, v[0], v[1]); }, out);
      if (!msg.empty()) return msg;

      // Inverse-then-multiply must reproduce the solve.
      batched::DenseBatch<double> Ainv = A, X2 = B;
      batched::batched_trtri(spec, Ainv);
      batched::batched_trmm(spec, 1.0, Ainv, X2);

      for (std::int64_t b = 0; b < nb; ++b) {
        const auto T = detail::effective_triangle(detail::extract(A, b), spec);
        const auto rhs = detail::extract(B, b), x = detail::extract(out[1], b);
        const auto r = oracle::add(1.0, oracle::multiply(T, x), -1.0, rhs);
        const double denom = detail::inf_norm(T) * detail::inf_norm(x) + detail::inf_norm(rhs);
        if (detail::inf_norm(r) > 1e-12 * denom) return "residual too large in matrix " + std::to_string(b);
        for (ordinal_t i = 0; i < s; ++i)
          if (std::abs(X2(b, i, 0) - x(i, 0)) > 1e-10 * std::max(1.0, std::abs(x(i, 0))))
            return "trtri+trmm disagrees with trsv in matrix " + std::to_string(b);
      }
      return {};
    });
  }
  return std::move(t).report();
}

// ---------------------------------------------------------------------------
// Graph kernels.

namespace detail {

// Random graph for trial t: mostly random, every fifth one a stencil graph.
inline StaticCrsGraph trial_graph(std::mt19937_64& rng, int t, ordinal_t N) {
  if (t % 5 == 4) {
    const StencilKind kinds[] = {StencilKind::Pt3, StencilKind::Pt5, StencilKind::Pt7, StencilKind::Pt9,
                                 StencilKind::Pt27};
    const StencilKind k = kinds[(t / 5) % 5];
    const int nd = stencil_dimensionality(k);
    const ordinal_t side = std::max<ordinal_t>(
        1, static_cast<ordinal_t>(std::lround(std::pow(static_cast<double>(N), 1.0 / nd))));
    std::vector<ordinal_t> dims;
    for (int d = 0; d < nd; ++d) dims.push_back(uniform_int(rng, 1, side));
    return io::gen_stencil_matrix(StencilSpec(k, dims)).graph();
  }
  const ordinal_t n = uniform_int(rng, 1, N);
  return io::gen_random_graph(n, uniform_int(rng, 0, 8), rng());
}

}  // namespace detail

inline Report verify_color_d1(const Config& cfg) {
  detail::Tally t("color-d1");
  const ordinal_t N = detail::pick_n(cfg, 400);
  const int trials = detail::pick(cfg, 40);
  for (int tr = 0; tr < trials; ++tr) {
    t.trial(tr, [&]() -> std::string {
      auto rng = detail::trial_rng(cfg.seed, tr, 0x5c);
      const auto g = detail::trial_graph(rng, tr, N);
      const ordinal_t dmax = oracle::max_degree(oracle::undirected(g));
      for (auto algo : {ColoringAlgorithm::VB, ColoringAlgorithm::EB}) {
        const auto c = graph::color_d1(g, algo);
        const auto chk = graph::verify_coloring(g, 1, c.colors);
        if (!chk) {
          return std::string(to_string(algo)) + " invalid at (" + std::to_string(chk.first) + "," +
                 std::to_string(chk.second) + ")";
        }
        if (algo == ColoringAlgorithm::VB && c.num_colors > dmax + 1) return "VB used more than max degree + 1 colors";
      }
      return {};
    });
  }
  return std::move(t).report();
}

inline Report verify_color_d2(const Config& cfg) {
  detail::Tally t("color-d2");
  const ordinal_t N = detail::pick_n(cfg, 300);
  const int trials = detail::pick(cfg, 30);
  for (int tr = 0; tr < trials; ++tr) {
    t.trial(tr, [&]() -> std::string {
      auto rng = detail::trial_rng(cfg.seed, tr, 0x5d);
      const auto g = detail::trial_graph(rng, tr, N);
      const auto adj = oracle::undirected(g);
      const std::int64_t dmax = oracle::max_degree(adj);
      for (auto algo : {ColoringAlgorithm::VB2, ColoringAlgorithm::NB}) {
        ColoringHandle h;
        h.algorithm = algo;
        std::string observer_error;
        if (algo == ColoringAlgorithm::NB) {
          // Forbidden sets handed out must equal a from-scratch recomputation.
          h.nb_observer = [&](const NbRoundState& s) {
            if (!observer_error.empty()) return;
            for (std::size_t k = 0; k < s.pending.size(); ++k) {
              const ordinal_t v = s.pending[k];
              std::uint64_t want = 0;
              auto mark = [&](ordinal_t w) {
                const color_t c = s.colors[w];
                if (c > s.window_base && c <= s.window_base + 64) want |= std::uint64_t{1} << (c - s.window_base - 1);
              };
              mark(v);
              for (ordinal_t w : oracle::ball2(adj, v)) mark(w);
              if (want != s.forbidden[k]) {
                observer_error = "NB forbidden set of vertex " + std::to_string(v) + " is stale in round " +
                                 std::to_string(s.round);
                return;
              }
            }
          };
        }
        const auto c = graph::color_d2(h, g);
        if (!observer_error.empty()) return observer_error;
        const auto chk = graph::verify_coloring(g, 2, c.colors);
        if (!chk) {
          return std::string(to_string(algo)) + " invalid at (" + std::to_string(chk.first) + "," +
                 std::to_string(chk.second) + ")";
        }
        if (c.num_colors > dmax * dmax + 1) return std::string(to_string(algo)) + " used more than max degree^2 + 1 colors";
      }
      return {};
    });
  }
  return std::move(t).report();
}

inline Report verify_color_bgpc(const Config& cfg) {
  detail::Tally t("color-bgpc");
  const ordinal_t N = detail::pick_n(cfg, 200);
  const int trials = detail::pick(cfg, 30);
  for (int tr = 0; tr < trials; ++tr) {
    t.trial(tr, [&]() -> std::string {
      auto rng = detail::trial_rng(cfg.seed, tr, 0x5e);
      const ordinal_t m = detail::uniform_int(rng, 1, N), n = detail::uniform_int(rng, 1, N);
      const auto M = detail::messy_matrix(rng, m, n, 6);
      ColoringHandle h;
      h.algorithm = ColoringAlgorithm::NB;
      const auto c = graph::color_bgpc(h, M);
      const auto chk = graph::verify_bgpc(M.graph(), c.colors);
      if (!chk) return "rows " + std::to_string(chk.first) + " and " + std::to_string(chk.second) + " conflict";
      return {};
    });
  }
  return std::move(t).report();
}

inline Report verify_mis2(const Config& cfg) {
  detail::Tally t("mis2");
  const ordinal_t N = detail::pick_n(cfg, 400);
  const int trials = detail::pick(cfg, 30);
  for (int tr = 0; tr < trials; ++tr) {
    t.trial(tr, [&]() -> std::string {
      auto rng = detail::trial_rng(cfg.seed, tr, 0x5f);
      const auto g = detail::trial_graph(rng, tr, N);
      const std::uint64_t seed = rng();
      const auto r = graph::mis2(g, seed);
      if (auto msg = oracle::check_mis2(g, r.in_set); !msg.empty()) return msg;
      for (int threads : {1, 2, 8}) {
        ScopedThreadCount scope(threads);
        if (graph::mis2(g, seed).in_set != r.in_set) return "output changed with " + std::to_string(threads) + " threads";
      }
      return {};
    });
  }
  return std::move(t).report();
}

inline std::string check_coarsening(const StaticCrsGraph& g, const graph::Mis2Aggregates& a) {
  const auto adj = oracle::undirected(g);
  std::vector<char> is_root(adj.size(), 0);
  for (ordinal_t r : a.roots) is_root[r] = 1;
  if (a.num_aggregates != static_cast<ordinal_t>(a.roots.size())) return "aggregate count differs from root count";
  for (ordinal_t v = 0; v < static_cast<ordinal_t>(adj.size()); ++v) {
    const ordinal_t r = a.root_of[v];
    if (r < 0) return "vertex " + std::to_string(v) + " has no aggregate";
    if (!is_root[r]) return "vertex " + std::to_string(v) + " labeled with a non-root";
    if (is_root[v] && r != v) return "root " + std::to_string(v) + " not labeled with itself";
    if (oracle::hop_distance(adj, v, r, 2) > 2) return "vertex " + std::to_string(v) + " is farther than 2 from its root";
    if (a.roots[a.aggregate[v]] != r) return "aggregate index disagrees with root label";
  }
  return {};
}

inline Report verify_mis2_coarsen(const Config& cfg) {
  detail::Tally t("mis2-coarsen");
  const ordinal_t N = detail::pick_n(cfg, 400);
  const int trials = detail::pick(cfg, 30);
  for (int tr = 0; tr < trials; ++tr) {
    t.trial(tr, [&]() -> std::string {
      auto rng = detail::trial_rng(cfg.seed, tr, 0x60);
      const auto g = detail::trial_graph(rng, tr, N);
      const std::uint64_t seed = rng();
      const auto a = graph::mis2_coarsen(g, seed);
      const auto r = graph::mis2(g, seed);
      if (a.roots != r.roots) return "aggregate roots differ from the MIS-2";
      return check_coarsening(g, a);
    });
  }
  return std::move(t).report();
}

// ---------------------------------------------------------------------------
// Sorting.

namespace detail {

inline std::vector<std::uint32_t> random_keys(std::mt19937_64& rng, std::size_t n) {
  std::vector<std::uint32_t> k(n);
  // Narrow ranges on some arrays to get many duplicates.
  const std::uint32_t mask = uniform_int(rng, 0, 2) == 0 ? 0xFu : 0xFFFFFFFFu;
  for (auto& x : k) x = static_cast<std::uint32_t>(rng()) & mask;
  return k;
}

// Companion starts as the identity; afterwards keys[i] must equal
// orig[comp[i]] and comp must be a permutation.
inline bool permutation_consistent(const std::vector<std::uint32_t>& orig, const std::vector<std::uint32_t>& keys,
                                   const std::vector<std::int32_t>& comp) {
  std::vector<char> seen(orig.size(), 0);
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const auto c = comp[i];
    if (c < 0 || static_cast<std::size_t>(c) >= orig.size() || seen[c]) return false;
    seen[c] = 1;
    if (orig[c] != keys[i]) return false;
  }
  return true;
}

inline std::vector<std::int32_t> iota_companion(std::size_t n) {
  std::vector<std::int32_t> c(n);
  std::iota(c.begin(), c.end(), 0);
  return c;
}

}  // namespace detail

inline std::string check_bitonic_sort(std::vector<std::uint32_t> keys) {
  const auto orig = keys;
  auto want = keys;
  std::sort(want.begin(), want.end());
  auto comp = detail::iota_companion(keys.size());
  bitonic_sort(std::span<std::uint32_t>(keys), std::span<std::int32_t>(comp));
  if (keys != want) return "bitonic_sort differs from std::sort (n=" + std::to_string(keys.size()) + ")";
  if (!detail::permutation_consistent(orig, keys, comp)) return "companion is not the matching permutation";
  // Reversed comparator on distinct keys gives the exact reverse.
  std::vector<std::uint32_t> distinct(want.begin(), std::unique(want.begin(), want.end()));
  auto desc = distinct;
  std::reverse(desc.begin(), desc.end());
  std::vector<std::uint32_t> shuffled = desc;
  std::rotate(shuffled.begin(), shuffled.begin() + static_cast<std::ptrdiff_t>(shuffled.size() / 3), shuffled.end());
  bitonic_sort(std::span<std::uint32_t>(shuffled), std::greater<std::uint32_t>{});
  if (shuffled != desc) return "descending comparator is not the reverse of ascending";
  return {};
}

inline std::string check_segmented_sort(std::mt19937_64& rng, std::vector<std::uint32_t> keys) {
  const auto orig = keys;
  std::vector<SortSegment> segs;
  std::int64_t pos = 0;
  const auto n = static_cast<std::int64_t>(keys.size());
  while (pos < n) {
    const std::int64_t gap = detail::uniform_int(rng, 0, 2);
    const std::int64_t len = std::min<std::int64_t>(n - std::min(n, pos + gap), detail::uniform_int(rng, 0, 300));
    pos = std::min(n, pos + gap);
    segs.push_back({pos, len});
    pos += len;
  }
  auto comp = detail::iota_companion(keys.size());
  bitonic_sort_segmented(std::span<std::uint32_t>(keys), std::span<std::int32_t>(comp),
                         std::span<const SortSegment>(segs));
  auto want = orig;
  std::vector<char> covered(keys.size(), 0);
  for (const auto& s : segs) {
    std::sort(want.begin() + s.offset, want.begin() + s.offset + s.length);
    std::fill(covered.begin() + s.offset, covered.begin() + s.offset + s.length, 1);
  }
  if (keys != want) return "segmented sort differs from per-segment std::sort";
  if (!detail::permutation_consistent(orig, keys, comp)) return "segmented companion is not the matching permutation";
  for (std::size_t i = 0; i < keys.size(); ++i)
    if (!covered[i] && comp[i] != static_cast<std::int32_t>(i)) return "data outside every segment moved";
  return {};
}

inline int ceil_log2(std::int64_t n) {
  return n <= 1 ? 0 : std::bit_width(static_cast<std::uint64_t>(n - 1));
}

inline std::string check_bitonic_merge(std::vector<std::uint32_t> a, std::vector<std::uint32_t> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::vector<std::uint32_t> want;
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(want));
  std::vector<std::uint32_t> keys = a;
  keys.insert(keys.end(), b.rbegin(), b.rend());
  const auto orig = keys;
  auto comp = detail::iota_companion(keys.size());
  const int stages = bitonic_merge(std::span<std::uint32_t>(keys), std::span<std::int32_t>(comp));
  if (keys != want) return "bitonic_merge output is not the merged sequence";
  if (!detail::permutation_consistent(orig, keys, comp)) return "merge companion is not the matching permutation";
  if (stages != ceil_log2(static_cast<std::int64_t>(keys.size()))) {
    return "merge used " + std::to_string(stages) + " stages, expected " +
           std::to_string(ceil_log2(static_cast<std::int64_t>(keys.size())));
  }
  return {};
}

inline std::string check_radix_sort(std::vector<std::uint32_t> keys) {
  const auto orig = keys;
  auto comp = detail::iota_companion(keys.size());
  radix_sort(std::span<std::uint32_t>(keys), std::span<std::int32_t>(comp));
  auto idx = detail::iota_companion(orig.size());
  std::stable_sort(idx.begin(), idx.end(), [&](auto x, auto y) { return orig[x] < orig[y]; });
  if (comp != idx) return "radix_sort is not a stable sort";
  if (!detail::permutation_consistent(orig, keys, comp)) return "radix companion is not the matching permutation";
  return {};
}

inline Report verify_sort(const Config& cfg) {
  detail::Tally t("sort");
  const ordinal_t N = detail::pick_n(cfg, 3000);
  const int trials = detail::pick(cfg, 100);
  for (int tr = 0; tr < trials; ++tr) {
    t.trial(tr, [&]() -> std::string {
      auto rng = detail::trial_rng(cfg.seed, tr, 0x61);
      const auto n = static_cast<std::size_t>(detail::uniform_int(rng, 0, N));
      const auto keys = detail::random_keys(rng, n);
      if (auto m = check_bitonic_sort(keys); !m.empty()) return m;
      if (auto m = check_segmented_sort(rng, keys); !m.empty()) return m;
      const auto split = static_cast<std::ptrdiff_t>(detail::uniform_int(rng, 0, static_cast<ordinal_t>(n)));
      if (auto m = check_bitonic_merge({keys.begin(), keys.begin() + split}, {keys.begin() + split, keys.end()});
          !m.empty())
        return m;
      return check_radix_sort(keys);
    });
  }
  return std::move(t).report();
}

// ---------------------------------------------------------------------------

inline Report verify_matrix_io(const Config& cfg) {
  detail::Tally t("matrix-io");
  const ordinal_t N = detail::pick_n(cfg, 100);
  const int trials = detail::pick(cfg, 20);
  for (int tr = 0; tr < trials; ++tr) {
    t.trial(tr, [&]() -> std::string {
      auto rng = detail::trial_rng(cfg.seed, tr, 0x62);
      const ordinal_t m = detail::uniform_int(rng, 0, N), n = detail::uniform_int(rng, 0, N);
      const auto A = detail::messy_matrix(rng, m, n, 8);
      std::stringstream ss;
      io::write_matrix_market(A, ss);
      const auto back = io::read_matrix_market(ss);
      if (!oracle::identical(back, canonicalize(A))) return "write/read round trip changed the matrix";
      return {};
    });
  }
  return std::move(t).report();
}

// Degenerate shapes through every kernel.
inline Report verify_edge_cases(const Config& cfg) {
  (void)cfg;
  detail::Tally t("edge-cases");
  const CrsMatrix<double> empty = build_crs<double>(0, 0, {0}, {}, {});
  const CrsMatrix<double> wide = build_crs<double>(0, 5, {0}, {}, {});
  const CrsMatrix<double> tall = build_crs<double>(5, 0, {0, 0, 0, 0, 0, 0}, {}, {});
  const CrsMatrix<double> zero_rows = build_crs<double>(4, 4, {0, 0, 0, 0, 0}, {}, {});
  int k = 0;
  t.trial(k++, [&]() -> std::string {
    std::vector<double> y(5, 2.0), x;
    spmv(SpmvMode::Plain, 1.0, tall, std::span<const double>(x), 0.5, std::span<double>(y));
    for (double v : y)
      if (v != 1.0) return "spmv on a 5x0 matrix did not just scale y";
    return {};
  });
  t.trial(k++, [&]() -> std::string {
    const auto C = spgemm(tall, wide);
    if (C.num_rows() != 5 || C.num_cols() != 5 || C.nnz() != 0) return "5x0 * 0x5 product is not an empty 5x5";
    if (spgemm(empty, empty).nnz() != 0) return "0x0 product is not empty";
    return {};
  });
  t.trial(k++, [&]() -> std::string {
    if (spadd(1.0, zero_rows, 1.0, zero_rows).nnz() != 0) return "sum of empty matrices is not empty";
    if (spadd(1.0, empty, 1.0, empty).num_rows() != 0) return "0x0 sum is not 0x0";
    return {};
  });
  t.trial(k++, [&]() -> std::string {
    SptrsvHandle h;
    const auto& s = sptrsv_symbolic(h, empty);
    if (s.num_levels != 0) return "empty triangle has levels";
    if (!sptrsv_solve(h, empty, std::span<const double>()).empty()) return "empty solve returned data";
    return {};
  });
  t.trial(k++, [&]() -> std::string {
    const StaticCrsGraph g = StaticCrsGraph::build(0, 0, {0}, {});
    if (graph::color_d1(g).num_colors != 0 || graph::color_d2(g).num_colors != 0) return "empty graph used colors";
    if (!graph::mis2(g).roots.empty()) return "empty graph has MIS-2 roots";
    const StaticCrsGraph iso = StaticCrsGraph::build(3, 3, {0, 0, 0, 0}, {});
    if (graph::color_d1(iso, ColoringAlgorithm::EB).num_colors != 1) return "edgeless graph needs more than 1 color";
    if (graph::mis2(iso).roots.size() != 3) return "edgeless graph MIS-2 is not every vertex";
    return {};
  });
  t.trial(k++, [&]() -> std::string {
    std::vector<std::uint32_t> none;
    bitonic_sort(std::span<std::uint32_t>(none));
    radix_sort(std::span<std::uint32_t>(none));
    if (bitonic_merge(std::span<std::uint32_t>(none)) != 0) return "empty merge used stages";
    return {};
  });
  t.trial(k++, [&]() -> std::string {
    batched::DenseBatch<double> A(0, 3, 3), B(0, 3, 3), C(0, 3, 3);
    batched::batched_gemm(1.0, A, B, 0.0, C);
    batched::batched_lu(A);
    return {};
  });
  t.trial(k++, [&]() -> std::string {
    std::stringstream ss;
    io::write_matrix_market(empty, ss);
    const auto back = io::read_matrix_market(ss);
    if (back.num_rows() != 0 || back.nnz() != 0) return "empty matrix round trip failed";
    return {};
  });
  return std::move(t).report();
}

// ---------------------------------------------------------------------------

struct KernelEntry {
  std::string_view name;
  Report (*run)(const Config&);
};

inline const std::vector<KernelEntry>& kernels() {
  static const std::vector<KernelEntry> k = {
      {"spmv", verify_spmv},
      {"spmv-structured", verify_spmv_structured},
      {"spgemm", verify_spgemm},
      {"spgemm-jacobi", verify_spgemm_jacobi},
      {"spadd", verify_spadd},
      {"sptrsv", verify_sptrsv},
      {"batched-gemm", verify_batched_gemm},
      {"batched-trmm", verify_batched_trmm},
      {"batched-trtri", verify_batched_trtri},
      {"batched-lu", verify_batched_lu},
      {"batched-trsv", verify_batched_trsv},
      {"color-d1", verify_color_d1},
      {"color-d2", verify_color_d2},
      {"color-bgpc", verify_color_bgpc},
      {"mis2", verify_mis2},
      {"mis2-coarsen", verify_mis2_coarsen},
      {"sort", verify_sort},
      {"matrix-io", verify_matrix_io},
      {"edge-cases", verify_edge_cases},
  };
  return k;
}

inline const KernelEntry* find_kernel(std::string_view name) {
  for (const auto& k : kernels())
    if (k.name == name) return &k;
  return nullptr;
}

}  // namespace pkern::verify
