// Copyright 2026 The pkern Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>

#include "pkern/pkern.hpp"
#include "pkern/verify/oracles.hpp"
#include "pkern/verify/suite.hpp"

namespace pkern {
namespace {

using V = std::vector<double>;

CrsMatrix<double> diagonal(ordinal_t n) {
  std::vector<offset_t> o(n + 1);
  std::vector<ordinal_t> c(n);
  V v(n);
  for (ordinal_t i = 0; i <= n; ++i) o[i] = i;
  for (ordinal_t i = 0; i < n; ++i) {
    c[i] = i;
    v[i] = 1.0 + i;
  }
  return build_crs<double>(n, n, o, c, v);
}

TEST(SptrsvSymbolic, DiagonalIsOneLevel) {
  SptrsvHandle h;
  const auto& s = sptrsv_symbolic(h, diagonal(6));
  EXPECT_EQ(s.num_levels, 1);
  EXPECT_EQ(s.level_rows(0).size(), 6u);
}

TEST(SptrsvSymbolic, BidiagonalIsAChain) {
  const auto L = from_triplets<double>(5, 5, {0, 1, 1, 2, 2, 3, 3, 4, 4}, {0, 0, 1, 1, 2, 2, 3, 3, 4},
                                       V(9, 1.0));
  SptrsvHandle h;
  const auto& s = sptrsv_symbolic(h, L);
  EXPECT_EQ(s.num_levels, 5);
  for (ordinal_t l = 0; l < 5; ++l) EXPECT_EQ(s.level_rows(l).size(), 1u);
  // Five thin levels chain into one group.
  ASSERT_EQ(s.groups.size(), 1u);
  EXPECT_TRUE(s.groups[0].chained);
}

TEST(SptrsvSymbolic, TwoIndependentChains) {
  const auto L = from_triplets<double>(4, 4, {0, 1, 1, 2, 3, 3}, {0, 0, 1, 2, 2, 3}, V(6, 2.0));
  SptrsvHandle h;
  const auto& s = sptrsv_symbolic(h, L);
  EXPECT_EQ(s.num_levels, 2);
  EXPECT_EQ(s.level_rows(0).size(), 2u);
  EXPECT_EQ(s.level_rows(1).size(), 2u);
  EXPECT_EQ(oracle::check_level_schedule(L.graph(), Uplo::Lower, s), "");
}

TEST(SptrsvSymbolic, ScheduleIsValidOnRandomTriangles) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 20; ++t) {
    const Uplo uplo = t % 2 ? Uplo::Upper : Uplo::Lower;
    const auto L = io::gen_random_triangular(300, 4, uplo, rng());
    SptrsvHandle h;
    h.uplo = uplo;
    const auto& s = sptrsv_symbolic(h, L);
    EXPECT_EQ(oracle::check_level_schedule(L.graph(), uplo, s), "");
    EXPECT_EQ(s.num_levels, oracle::longest_chain(L.graph(), uplo));
  }
}

TEST(SptrsvSymbolic, Errors) {
  SptrsvHandle h;
  EXPECT_THROW(sptrsv_symbolic(h, io::gen_random_crs(3, 4, 1, 1)), DimensionError);
  const auto missing = from_triplets<double>(2, 2, {0, 1}, {0, 0}, V{1, 1});
  try {
    sptrsv_symbolic(h, missing);
    FAIL();
  } catch (const StructureError& e) {
    EXPECT_EQ(e.index(), 1);
  }
  const auto zero = from_triplets<double>(2, 2, {0, 1}, {0, 1}, V{1, 0});
  try {
    sptrsv_symbolic(h, zero);
    FAIL();
  } catch (const SingularError& e) {
    EXPECT_EQ(e.row(), 1);
  }
  const auto upper_entry = from_triplets<double>(2, 2, {0, 0, 1}, {0, 1, 1}, V{1, 1, 1});
  EXPECT_THROW(sptrsv_symbolic(h, upper_entry), StructureError);
}

TEST(SptrsvSolve, IdentityReturnsB) {
  const auto I = from_triplets<double>(3, 3, {0, 1, 2}, {0, 1, 2}, V(3, 1.0));
  SptrsvHandle h;
  sptrsv_symbolic(h, I);
  const V b{3, -1, 2};
  EXPECT_EQ(sptrsv_solve(h, I, std::span<const double>(b)), b);
}

TEST(SptrsvSolve, TwoByTwo) {
  const auto L = from_triplets<double>(2, 2, {0, 1, 1}, {0, 0, 1}, V{2, 1, 2});
  SptrsvHandle h;
  sptrsv_symbolic(h, L);
  const V b{2, 4};
  EXPECT_EQ(sptrsv_solve(h, L, std::span<const double>(b)), (V{1, 1.5}));
}

TEST(SptrsvSolve, UpperIsTransposeOfLower) {
  const auto L = io::gen_random_triangular(200, 5, Uplo::Lower, 4);
  const auto U = transpose(L);
  const V b = io::random_vector(200, 5);
  SptrsvHandle h;
  h.uplo = Uplo::Upper;
  sptrsv_symbolic(h, U);
  const auto x = sptrsv_solve(h, U, std::span<const double>(b));
  EXPECT_LE(verify::solve_residual(U, x, b), 1e-12);
  const auto want = oracle::triangular_solve(oracle::densify(U), Uplo::Upper, b);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(x[i], want[i], 1e-12 * (1 + std::abs(want[i])));
}

TEST(SptrsvSolve, ChainingIsBitwiseNeutral) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 10; ++t) {
    const auto L = io::gen_random_triangular(2000, 3, Uplo::Lower, rng());
    const V b = io::random_vector(2000, rng());
    for (ordinal_t threshold : {1, 4, 32, 1000}) {
      SptrsvHandle on, off;
      on.chain_threshold = threshold;
      off.chaining = false;
      sptrsv_symbolic(on, L);
      sptrsv_symbolic(off, L);
      EXPECT_EQ(sptrsv_solve(on, L, std::span<const double>(b)), sptrsv_solve(off, L, std::span<const double>(b)));
    }
  }
}

TEST(SptrsvSolve, UnsortedRowsWithDiagonalAnywhere) {
  const auto L = from_triplets<double>(3, 3, {1, 1, 2, 2, 2, 0}, {1, 0, 2, 0, 1, 0}, V{4, 1, 5, 1, 1, 2});
  SptrsvHandle h;
  sptrsv_symbolic(h, L);
  const V b{2, 9, 17};
  const auto x = sptrsv_solve(h, L, std::span<const double>(b));
  EXPECT_LE(verify::solve_residual(L, x, b), 1e-15);
}

TEST(SptrsvSolve, StaleHandleAndSizes) {
  const auto L = io::gen_random_triangular(10, 2, Uplo::Lower, 1);
  SptrsvHandle h;
  const V b(10, 1.0);
  EXPECT_THROW(sptrsv_solve(h, L, std::span<const double>(b)), Error);
  sptrsv_symbolic(h, L);
  EXPECT_THROW(sptrsv_solve(h, io::gen_random_triangular(10, 3, Uplo::Lower, 2), std::span<const double>(b)),
               StaleHandleError);
  const V short_b(9, 1.0);
  EXPECT_THROW(sptrsv_solve(h, L, std::span<const double>(short_b)), DimensionError);
}

}  // namespace
}  // namespace pkern
