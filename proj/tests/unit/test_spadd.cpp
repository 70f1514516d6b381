// Copyright 2026 The pkern Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>

#include "pkern/pkern.hpp"
#include "pkern/verify/oracles.hpp"
#include "pkern/verify/suite.hpp"

namespace pkern {
namespace {

using verify::detail::messy_matrix;

TEST(SpaddSymbolic, UnionExample) {
  const auto A = build_crs<double>(1, 3, {0, 2}, {0, 2}, {1, 1});
  const auto B = build_crs<double>(1, 3, {0, 2}, {1, 2}, {1, 1});
  for (bool sorted : {true, false}) {
    SpaddHandle h;
    EXPECT_EQ(spadd_symbolic(h, A, B, sorted).back(), 3);
    const auto C = spadd_numeric(h, 1.0, A, 1.0, B);
    EXPECT_EQ(std::vector<ordinal_t>(C.col_indices().begin(), C.col_indices().end()), (std::vector<ordinal_t>{0, 1, 2}));
  }
}

TEST(SpaddSymbolic, EmptyBCountsDistinctColumnsOfA) {
  std::mt19937_64 rng(1);
  const auto A = messy_matrix(rng, 20, 15, 8);
  const auto B = build_crs<double>(20, 15, std::vector<offset_t>(21, 0), {}, {});
  SpaddHandle h;
  const auto offs = spadd_symbolic(h, A, B, false);
  const auto sets = oracle::pattern_sets(A.graph());
  for (ordinal_t i = 0; i < 20; ++i) EXPECT_EQ(offs[i + 1] - offs[i], static_cast<offset_t>(sets[i].size()));
}

TEST(SpaddSymbolic, DuplicatesMerge) {
  const auto A = build_crs<double>(1, 6, {0, 3}, {5, 5, 5}, {1, 2, 3});
  const auto B = build_crs<double>(1, 6, {0, 1}, {5}, {4});
  SpaddHandle h;
  EXPECT_EQ(spadd_symbolic(h, A, B, false).back(), 1);
  const auto C = spadd_numeric(h, 1.0, A, 2.0, B);
  EXPECT_EQ(C.values()[0], 14.0);
}

TEST(SpaddSymbolic, Errors) {
  SpaddHandle h;
  EXPECT_THROW(spadd_symbolic(h, io::gen_random_crs(3, 3, 1, 1), io::gen_random_crs(3, 4, 1, 1), false),
               DimensionError);
  const auto unsorted = build_crs<double>(3, 4, {0, 0, 2, 2}, {3, 1}, {1, 1});
  try {
    spadd_symbolic(h, io::gen_random_crs(3, 4, 1, 1), unsorted, true);
    FAIL();
  } catch (const StructureError& e) {
    EXPECT_NE(std::string(e.what()).find("row 1"), std::string::npos) << e.what();
  }
}

TEST(SpaddNumeric, BetaZeroKeepsUnionPattern) {
  const auto A = build_crs<double>(1, 4, {0, 2}, {0, 2}, {5, 6});
  const auto B = build_crs<double>(1, 4, {0, 2}, {1, 2}, {7, 8});
  const auto C = spadd(1.0, A, 0.0, B);
  EXPECT_EQ(std::vector<double>(C.values().begin(), C.values().end()), (std::vector<double>{5, 0, 6}));
}

TEST(SpaddNumeric, CancellationKeepsPattern) {
  const auto A = io::gen_random_crs(30, 30, 5, 2);
  const auto C = spadd(1.0, A, -1.0, A);
  EXPECT_EQ(C.nnz(), A.nnz());
  for (double v : C.values()) EXPECT_EQ(v, 0.0);
}

TEST(SpaddNumeric, ThousandByThousand) {
  const auto A = io::gen_random_crs(1000, 1000, 30, 3), B = io::gen_random_crs(1000, 1000, 30, 4);
  const auto C = spadd(0.5, A, -2.0, B);
  EXPECT_TRUE(oracle::matches_dense(C, oracle::add(0.5, oracle::densify(A), -2.0, oracle::densify(B)),
                                    oracle::add(0.5, oracle::densify_abs(A), 2.0, oracle::densify_abs(B)), 1e-13));
}

TEST(SpaddNumeric, SortedUnsortedAndBitonicAgree) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 30; ++t) {
    const auto A = io::gen_random_crs(40, 50, 7, rng()), B = io::gen_random_crs(40, 50, 9, rng());
    SpaddHandle hs, hu, hb;
    hb.merge = SpaddMerge::Bitonic;
    spadd_symbolic(hs, A, B, true);
    spadd_symbolic(hu, A, B, false);
    spadd_symbolic(hb, A, B, true);
    const auto Cs = spadd_numeric(hs, 1.5, A, -0.5, B);
    EXPECT_TRUE(oracle::identical(Cs, spadd_numeric(hu, 1.5, A, -0.5, B)));
    EXPECT_TRUE(oracle::identical(Cs, spadd_numeric(hb, 1.5, A, -0.5, B)));
  }
}

TEST(SpaddNumeric, PatternCommutes) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 20; ++t) {
    const auto A = messy_matrix(rng, 25, 25, 6), B = messy_matrix(rng, 25, 25, 6);
    const auto AB = spadd(1.0, A, 1.0, B), BA = spadd(1.0, B, 1.0, A);
    EXPECT_TRUE(std::equal(AB.row_offsets().begin(), AB.row_offsets().end(), BA.row_offsets().begin()));
    EXPECT_TRUE(std::equal(AB.col_indices().begin(), AB.col_indices().end(), BA.col_indices().begin()));
  }
}

TEST(SpaddNumeric, ReuseAndStaleHandle) {
  std::mt19937_64 rng(7);
  const auto A = messy_matrix(rng, 30, 20, 5), B = messy_matrix(rng, 30, 20, 5);
  SpaddHandle h;
  EXPECT_THROW(spadd_numeric(h, 1.0, A, 1.0, B), Error);
  spadd_symbolic(h, A, B, false);
  const auto A2 = verify::detail::revalue(A, rng), B2 = verify::detail::revalue(B, rng);
  EXPECT_TRUE(oracle::identical(spadd_numeric(h, 2.0, A2, 3.0, B2), spadd(2.0, A2, 3.0, B2)));
  EXPECT_THROW(spadd_numeric(h, 1.0, B, 1.0, A), StaleHandleError);
}

TEST(SpaddNumeric, ScatterMapsAreTotal) {
  std::mt19937_64 rng(8);
  const auto A = messy_matrix(rng, 30, 20, 5), B = messy_matrix(rng, 30, 20, 5);
  SpaddHandle h;
  const auto offs = spadd_symbolic(h, A, B, false);
  ASSERT_EQ(h.a_pos.size(), static_cast<std::size_t>(A.nnz()));
  ASSERT_EQ(h.b_pos.size(), static_cast<std::size_t>(B.nnz()));
  for (ordinal_t i = 0; i < 30; ++i) {
    const auto width = offs[i + 1] - offs[i];
    for (offset_t k = A.row_offsets()[i]; k < A.row_offsets()[i + 1]; ++k) EXPECT_LT(h.a_pos[k], width);
    for (offset_t k = B.row_offsets()[i]; k < B.row_offsets()[i + 1]; ++k) EXPECT_LT(h.b_pos[k], width);
  }
}

}  // namespace
}  // namespace pkern
