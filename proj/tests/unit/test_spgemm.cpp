// Copyright 2026 The pkern Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>

#include "pkern/pkern.hpp"
#include "pkern/verify/oracles.hpp"
#include "pkern/verify/suite.hpp"

namespace pkern {
namespace {

CrsMatrix<double> identity(ordinal_t n) {
  std::vector<offset_t> o(n + 1);
  std::vector<ordinal_t> c(n);
  for (ordinal_t i = 0; i <= n; ++i) o[i] = i;
  for (ordinal_t i = 0; i < n; ++i) c[i] = i;
  return build_crs<double>(n, n, o, c, std::vector<double>(n, 1.0));
}

TEST(Compress, BitPlacement) {
  const auto g = StaticCrsGraph::build(3, 70, {0, 3, 4, 4}, {0, 1, 33, 64});
  const auto cg = compress(g);
  ASSERT_EQ(cg.row_end(0) - cg.row_begin(0), 2);
  EXPECT_EQ(cg.blocks[0], 0);
  EXPECT_EQ(cg.masks[0], 0b11u);
  EXPECT_EQ(cg.blocks[1], 1);
  EXPECT_EQ(cg.masks[1], 0b10u);
  ASSERT_EQ(cg.row_end(1) - cg.row_begin(1), 1);
  EXPECT_EQ(cg.blocks[2], 2);
  EXPECT_EQ(cg.masks[2], 0b1u);
  EXPECT_EQ(cg.row_end(2), cg.row_begin(2));
}

TEST(Compress, RoundTrip) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 20; ++t) {
    const auto A = verify::detail::messy_matrix(rng, 30, 200, 12);
    const auto cg = compress(A);
    const auto sets = oracle::pattern_sets(A.graph());
    for (ordinal_t i = 0; i < 30; ++i) {
      const auto row = decompress_row(cg, i);
      EXPECT_EQ(std::set<ordinal_t>(row.begin(), row.end()), sets[i]);
    }
  }
}

TEST(SpgemmSymbolic, IdentityKeepsRowCounts) {
  const auto B = io::gen_random_crs(3, 5, 2, 4);
  SpgemmHandle h;
  const auto offs = spgemm_symbolic(h, identity(3), B);
  EXPECT_EQ(oracle::row_counts(offs), oracle::row_counts(B.row_offsets()));
}

TEST(SpgemmSymbolic, BooleanProductExample) {
  const auto A = build_crs<double>(2, 2, {0, 2, 3}, {0, 1, 1}, {1, 1, 1});
  const auto B = build_crs<double>(2, 2, {0, 1, 3}, {0, 0, 1}, {1, 1, 1});
  SpgemmHandle h;
  EXPECT_EQ(oracle::row_counts(spgemm_symbolic(h, A, B)), (std::vector<offset_t>{2, 2}));
}

TEST(SpgemmSymbolic, EmptyRowGivesZero) {
  const auto A = build_crs<double>(3, 3, {0, 1, 1, 2}, {0, 2}, {1, 1});
  const auto B = io::gen_random_crs(3, 4, 3, 2);
  SpgemmHandle h;
  EXPECT_EQ(oracle::row_counts(spgemm_symbolic(h, A, B))[1], 0);
}

TEST(SpgemmSymbolic, DimensionMismatch) {
  SpgemmHandle h;
  EXPECT_THROW(spgemm_symbolic(h, io::gen_random_crs(3, 4, 1, 1), io::gen_random_crs(3, 4, 1, 1)), DimensionError);
}

TEST(SpgemmNumeric, IdentityReturnsB) {
  const auto B = io::gen_random_crs(6, 9, 4, 8);
  EXPECT_TRUE(oracle::identical(spgemm(identity(6), B), B));
}

TEST(SpgemmNumeric, TwoByTwo) {
  const auto A = build_crs<double>(2, 2, {0, 2, 3}, {0, 1, 1}, {1, 2, 3});
  const auto B = build_crs<double>(2, 2, {0, 1, 3}, {0, 0, 1}, {4, 1, 1});
  const auto C = oracle::densify(spgemm(A, B));
  EXPECT_EQ(C.a, (std::vector<double>{6, 2, 3, 3}));
}

TEST(SpgemmNumeric, RandomFortyMatchesDense) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 50; ++t) {
    const auto A = io::gen_random_crs(40, 40, 8, rng()), B = io::gen_random_crs(40, 40, 8, rng());
    SpgemmHandle h;
    spgemm_symbolic(h, A, B);
    const auto C = spgemm_numeric(h, A, B);
    EXPECT_EQ(oracle::row_counts(C.row_offsets()), oracle::product_row_counts(A.graph(), B.graph()));
    EXPECT_TRUE(oracle::matches_dense(C, oracle::multiply(oracle::densify(A), oracle::densify(B)),
                                      oracle::multiply(oracle::densify_abs(A), oracle::densify_abs(B)), 1e-12));
    EXPECT_TRUE(C.sorted_rows() && C.merged_rows());
  }
}

TEST(SpgemmNumeric, AccumulatorsAndCompressionAgree) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    const auto A = io::gen_random_crs(50, 70, 6, rng()), B = io::gen_random_crs(70, 90, 9, rng());
    std::vector<CrsMatrix<double>> outs;
    for (auto acc : {SpgemmAccumulator::Hashmap, SpgemmAccumulator::Dense, SpgemmAccumulator::Auto})
      for (bool comp : {true, false})
        for (auto method : {SpgemmParallelMethod::RowBlocks, SpgemmParallelMethod::SingleRow}) {
          SpgemmHandle h;
          h.accumulator = acc;
          h.use_compression = comp;
          h.method = method;
          spgemm_symbolic(h, A, B);
          outs.push_back(spgemm_numeric(h, A, B));
        }
    for (const auto& C : outs) EXPECT_TRUE(oracle::identical(C, outs[0]));
  }
}

TEST(SpgemmNumeric, TinyL1ForcesSecondLevel) {
  const auto A = io::gen_random_crs(20, 60, 10, 1), B = io::gen_random_crs(60, 300, 20, 2);
  SpgemmHandle h;
  h.accumulator = SpgemmAccumulator::Hashmap;
  h.l1_capacity = 4;
  spgemm_symbolic(h, A, B);
  const auto C = spgemm_numeric(h, A, B);
  EXPECT_GT(h.l2_rows, 0);
  EXPECT_TRUE(oracle::identical(C, spgemm(A, B)));
}

TEST(SpgemmNumeric, StaleHandle) {
  const auto A = io::gen_random_crs(10, 10, 3, 1), B = io::gen_random_crs(10, 10, 3, 2);
  SpgemmHandle h;
  EXPECT_THROW(spgemm_numeric(h, A, B), Error);
  spgemm_symbolic(h, A, B);
  EXPECT_THROW(spgemm_numeric(h, io::gen_random_crs(10, 10, 3, 99), B), StaleHandleError);
  EXPECT_THROW(spgemm_numeric(h, A, io::gen_random_crs(10, 10, 4, 2)), StaleHandleError);
}

TEST(SpgemmNumeric, ReuseWithNewValues) {
  std::mt19937_64 rng(5);
  const auto A = io::gen_random_crs(25, 25, 5, 1), B = io::gen_random_crs(25, 25, 5, 2);
  SpgemmHandle h;
  spgemm_symbolic(h, A, B);
  spgemm_numeric(h, A, B);
  const auto A2 = verify::detail::revalue(A, rng), B2 = verify::detail::revalue(B, rng);
  EXPECT_TRUE(oracle::identical(spgemm_numeric(h, A2, B2), spgemm(A2, B2)));
}

TEST(SpgemmJacobi, OmegaZeroGivesB) {
  const auto A = io::gen_diag_dominant(15, 4, 1);
  const auto B = io::gen_random_crs(15, 8, 3, 2);
  const auto dinv = verify::inverse_diagonal(A);
  SpgemmHandle h;
  spgemm_jacobi_symbolic(h, A, B);
  const auto C = spgemm_jacobi_numeric(h, 0.0, std::span<const double>(dinv), A, B);
  EXPECT_EQ(oracle::densify(C).a, oracle::densify(B).a);
  // Pattern is B union A*B; the product-only slots hold zeros.
  EXPECT_EQ(oracle::row_counts(C.row_offsets()),
            oracle::union_row_counts(B.graph(), spgemm(A, B).graph()));
}

TEST(SpgemmJacobi, IdentityScalesB) {
  const auto B = io::gen_random_crs(12, 7, 3, 3);
  const std::vector<double> dinv(12, 1.0);
  for (double omega : {0.3, 1.0, 1.7}) {
    SpgemmHandle h;
    spgemm_jacobi_symbolic(h, identity(12), B);
    const auto C = spgemm_jacobi_numeric(h, omega, std::span<const double>(dinv), identity(12), B);
    const auto D = oracle::densify(C), Db = oracle::densify(B);
    for (std::size_t e = 0; e < D.a.size(); ++e)
      EXPECT_TRUE(oracle::close(D.a[e], (1 - omega) * Db.a[e], std::abs(Db.a[e]) * (1 + omega), 1e-15));
  }
}

TEST(SpgemmJacobi, MatchesThreeKernelComposition) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 20; ++t) {
    const auto A = io::gen_diag_dominant(30, 5, rng()), B = io::gen_random_crs(30, 10, 4, rng());
    const auto dinv = verify::inverse_diagonal(A);
    SpgemmHandle h;
    spgemm_jacobi_symbolic(h, A, B);
    const auto C = spgemm_jacobi_numeric(h, 0.8, std::span<const double>(dinv), A, B);
    const auto ref = verify::jacobi_reference(0.8, dinv, A, B);
    auto scale = oracle::densify_abs(B);
    const auto prod = oracle::multiply(oracle::densify_abs(A), oracle::densify_abs(B));
    for (ordinal_t i = 0; i < 30; ++i)
      for (ordinal_t j = 0; j < 10; ++j) scale(i, j) += 0.8 * std::abs(dinv[i]) * prod(i, j);
    EXPECT_TRUE(oracle::matches_dense(C, oracle::densify(ref.C), scale, 1e-12));
  }
}

TEST(SpgemmJacobi, Errors) {
  const auto A = io::gen_random_crs(4, 5, 2, 1), B = io::gen_random_crs(5, 3, 2, 2);
  SpgemmHandle h;
  EXPECT_THROW(spgemm_jacobi_symbolic(h, A, B), DimensionError);
  const auto Sq = io::gen_diag_dominant(5, 2, 3);
  spgemm_jacobi_symbolic(h, Sq, B);
  std::vector<double> short_dinv(3, 1.0);
  EXPECT_THROW(spgemm_jacobi_numeric(h, 1.0, std::span<const double>(short_dinv), Sq, B), DimensionError);
  // A plain symbolic cannot feed the Jacobi numeric.
  SpgemmHandle plain;
  spgemm_symbolic(plain, Sq, B);
  const auto dinv = verify::inverse_diagonal(Sq);
  EXPECT_THROW(spgemm_jacobi_numeric(plain, 1.0, std::span<const double>(dinv), Sq, B), StaleHandleError);
}

TEST(SpgemmJacobi, MultiplyCounts) {
  // Fused: one product per A(i,k)*B(k,j) pair plus the per-row scale and
  // one multiply per scaled product entry.
  const auto A = io::gen_diag_dominant(20, 4, 1), B = io::gen_random_crs(20, 9, 3, 2);
  const auto dinv = verify::inverse_diagonal(A);
  SpgemmHandle h;
  spgemm_jacobi_symbolic(h, A, B);
  spgemm_jacobi_numeric(h, 0.5, std::span<const double>(dinv), A, B);
  std::uint64_t flops = 0;
  for (ordinal_t i = 0; i < 20; ++i)
    for (ordinal_t k : A.graph().row(i)) flops += static_cast<std::uint64_t>(B.graph().degree(k));
  const auto E = spgemm(A, B);
  EXPECT_EQ(h.multiply_count, flops + 20 + static_cast<std::uint64_t>(E.nnz()));
}

}  // namespace
}  // namespace pkern
