// Copyright 2026 The pkern Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <map>
#include <random>

#include "pkern/pkern.hpp"
#include "pkern/verify/oracles.hpp"

namespace pkern {
namespace {

template <class F>
std::string error_text(F&& f) {
  try {
    f();
  } catch (const StructureError& e) {
    return e.what();
  }
  return {};
}

TEST(BuildCrs, SmallestMatrix) {
  const auto m = build_crs<double>(1, 2, {0, 2}, {0, 1}, {1.0, 2.0});
  EXPECT_EQ(m.num_rows(), 1);
  EXPECT_EQ(m.num_cols(), 2);
  EXPECT_EQ(m.nnz(), 2);
  EXPECT_TRUE(m.sorted_rows());
  EXPECT_TRUE(m.merged_rows());
}

TEST(BuildCrs, NonMonotoneOffsets) {
  const auto msg = error_text([] { build_crs<double>(2, 2, {0, 2, 1}, {0}, {1.0}); });
  EXPECT_NE(msg.find("non-monotone row offset at row 1"), std::string::npos) << msg;
}

TEST(BuildCrs, ColumnOutOfRange) {
  const auto msg = error_text([] { build_crs<double>(1, 3, {0, 2}, {0, 5}, {1.0, 2.0}); });
  EXPECT_NE(msg.find("column 5 out of range"), std::string::npos) << msg;
}

TEST(BuildCrs, ErrorCarriesFirstOffendingIndex) {
  try {
    build_crs<double>(1, 3, {0, 3}, {0, 7, 9}, {1, 2, 3});
    FAIL();
  } catch (const StructureError& e) {
    EXPECT_EQ(e.index(), 1);
  }
}

TEST(BuildCrs, LengthMismatch) {
  EXPECT_THROW(build_crs<double>(1, 2, {0, 2}, {0, 1}, {1.0}), StructureError);
  EXPECT_THROW(build_crs<double>(2, 2, {0, 2}, {0, 1}, {1.0, 2.0}), StructureError);
  EXPECT_THROW(build_crs<double>(1, 2, {0, 3}, {0, 1}, {1.0, 2.0}), StructureError);
  EXPECT_THROW(build_crs<double>(1, 2, {1, 2}, {0}, {1.0}), StructureError);
}

TEST(BuildCrs, FlagsByInspection) {
  const auto unsorted = build_crs<double>(1, 3, {0, 2}, {2, 0}, {1, 1});
  EXPECT_FALSE(unsorted.sorted_rows());
  const auto dup = build_crs<double>(1, 3, {0, 2}, {1, 1}, {1, 1});
  EXPECT_TRUE(dup.sorted_rows());
  EXPECT_FALSE(dup.merged_rows());
}

TEST(Canonicalize, SortsAndMergesDuplicates) {
  const auto m = build_crs<double>(1, 3, {0, 3}, {2, 0, 2}, {1, 3, 4});
  const auto c = canonicalize(m);
  ASSERT_EQ(c.nnz(), 2);
  EXPECT_EQ(c.col_indices()[0], 0);
  EXPECT_EQ(c.col_indices()[1], 2);
  EXPECT_EQ(c.values()[0], 3.0);
  EXPECT_EQ(c.values()[1], 5.0);
  EXPECT_TRUE(c.sorted_rows() && c.merged_rows());
}

TEST(Canonicalize, IdempotentOnCanonicalInput) {
  const auto m = io::gen_random_crs(20, 30, 5, 3);
  EXPECT_TRUE(oracle::identical(canonicalize(m), m));
  EXPECT_TRUE(oracle::identical(canonicalize(canonicalize(m)), canonicalize(m)));
}

TEST(Canonicalize, EmptyMatrix) {
  const auto m = build_crs<double>(3, 3, {0, 0, 0, 0}, {}, {});
  const auto c = canonicalize(m);
  EXPECT_EQ(c.nnz(), 0);
  EXPECT_EQ(c.num_rows(), 3);
}

TEST(Canonicalize, KeepsExplicitZeros) {
  const auto m = build_crs<double>(1, 2, {0, 2}, {1, 0}, {0.0, 1.0});
  EXPECT_EQ(canonicalize(m).nnz(), 2);
}

// Raw triplets with duplicates summed must densify to the same thing as the
// canonical matrix built from them.
TEST(Canonicalize, MatchesTripletOracle) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 50; ++t) {
    const ordinal_t m = 1 + static_cast<ordinal_t>(rng() % 12), n = 1 + static_cast<ordinal_t>(rng() % 12);
    const int k = static_cast<int>(rng() % 60);
    std::vector<ordinal_t> r, c;
    std::vector<double> v;
    std::map<std::pair<ordinal_t, ordinal_t>, double> want;
    for (int e = 0; e < k; ++e) {
      r.push_back(static_cast<ordinal_t>(rng() % m));
      c.push_back(static_cast<ordinal_t>(rng() % n));
      v.push_back(static_cast<double>(rng() % 7) - 3.0);
      want[{r.back(), c.back()}] += v.back();
    }
    const auto C = canonicalize(from_triplets(m, n, r, c, v));
    EXPECT_EQ(C.nnz(), static_cast<offset_t>(want.size()));
    const auto D = oracle::densify(C);
    for (ordinal_t i = 0; i < m; ++i)
      for (ordinal_t j = 0; j < n; ++j) {
        const auto it = want.find({i, j});
        EXPECT_EQ(D(i, j), it == want.end() ? 0.0 : it->second);
      }
  }
}

TEST(Transpose, TwoByTwo) {
  const auto A = build_crs<double>(2, 2, {0, 2, 3}, {0, 1, 1}, {1, 2, 3});
  const auto T = transpose(A);
  const auto D = oracle::densify(T);
  EXPECT_EQ(D(0, 0), 1.0);
  EXPECT_EQ(D(0, 1), 0.0);
  EXPECT_EQ(D(1, 0), 2.0);
  EXPECT_EQ(D(1, 1), 3.0);
  EXPECT_TRUE(T.sorted_rows() && T.merged_rows());
}

TEST(Transpose, Involution) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 20; ++t) {
    const auto A = io::gen_random_crs(1 + t, 2 + 2 * t, t % 3, rng());
    EXPECT_TRUE(oracle::identical(transpose(transpose(A)), canonicalize(A)));
    const auto Dt = oracle::transpose(oracle::densify(A));
    EXPECT_EQ(oracle::densify(transpose(A)).a, Dt.a);
  }
}

TEST(Transpose, DiagonalIsFixed) {
  const auto D = build_crs<double>(3, 3, {0, 1, 2, 3}, {0, 1, 2}, {1, 2, 3});
  EXPECT_TRUE(oracle::identical(transpose(D), D));
}

TEST(Fingerprint, EqualForIdenticalStructure) {
  const auto A = io::gen_random_crs(30, 30, 4, 5);
  const auto B = A.with_values(std::vector<double>(A.nnz(), 9.0));
  EXPECT_EQ(A.fingerprint(), B.fingerprint());
  const auto C = build_crs<double>(30, 30, std::vector<offset_t>(A.row_offsets().begin(), A.row_offsets().end()),
                                   std::vector<ordinal_t>(A.col_indices().begin(), A.col_indices().end()),
                                   std::vector<double>(A.nnz(), 1.0));
  EXPECT_EQ(A.fingerprint(), C.fingerprint());
}

TEST(Fingerprint, DiffersWhenStructureDiffers) {
  const auto A = build_crs<double>(2, 3, {0, 1, 2}, {0, 1}, {1, 1});
  const auto B = build_crs<double>(2, 3, {0, 1, 2}, {0, 2}, {1, 1});
  const auto C = build_crs<double>(2, 3, {0, 2, 2}, {0, 1}, {1, 1});
  EXPECT_FALSE(A.fingerprint() == B.fingerprint());
  EXPECT_FALSE(A.fingerprint() == C.fingerprint());
}

TEST(MultiVector, ShapeAndErrors) {
  MultiVector<double> X(4, 3, 1.5);
  EXPECT_EQ(X.rows(), 4);
  EXPECT_EQ(X.num_vectors(), 3);
  EXPECT_EQ(X(3, 2), 1.5);
  EXPECT_EQ(X.column(1).size(), 4u);
  EXPECT_THROW(MultiVector<double>(4, 1, 2, 0.0), DimensionError);
}

}  // namespace
}  // namespace pkern
