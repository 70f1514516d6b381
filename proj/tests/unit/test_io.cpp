// Copyright 2026 The pkern Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <sstream>

#include "pkern/pkern.hpp"
#include "pkern/verify/oracles.hpp"
#include "pkern/verify/suite.hpp"

namespace pkern::io {
namespace {

CrsMatrix<double> parse(const std::string& text) {
  std::istringstream in(text);
  return read_matrix_market(in);
}

std::int64_t parse_error_line(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

TEST(ReadMatrixMarket, Diagonal) {
  const auto m = parse("%%MatrixMarket matrix coordinate real general\n% comment\n2 2 2\n1 1 1.0\n2 2 2.0\n");
  EXPECT_EQ(oracle::densify(m).a, (std::vector<double>{1, 0, 0, 2}));
}

TEST(ReadMatrixMarket, SymmetricExpansion) {
  const auto m = parse("%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n2 1 3.0\n");
  EXPECT_EQ(oracle::densify(m).a, (std::vector<double>{0, 3, 3, 0}));
}

TEST(ReadMatrixMarket, SkewSymmetric) {
  const auto m = parse("%%MatrixMarket matrix coordinate real skew-symmetric\n2 2 1\n2 1 3.0\n");
  EXPECT_EQ(oracle::densify(m).a, (std::vector<double>{0, -3, 3, 0}));
}

TEST(ReadMatrixMarket, PatternValuesAreOne) {
  const auto m = parse("%%MatrixMarket matrix coordinate pattern general\n2 3 2\n1 3\n2 1\n");
  EXPECT_EQ(oracle::densify(m).a, (std::vector<double>{0, 0, 1, 1, 0, 0}));
}

TEST(ReadMatrixMarket, IntegerAndArray) {
  const auto a = parse("%%MatrixMarket matrix coordinate integer general\n1 1 1\n1 1 7\n");
  EXPECT_EQ(a.values()[0], 7.0);
  const auto b = parse("%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n4\n");
  EXPECT_EQ(oracle::densify(b).a, (std::vector<double>{1, 3, 2, 4}));
}

TEST(ReadMatrixMarket, DuplicatesSum) {
  const auto m = parse("%%MatrixMarket matrix coordinate real general\n1 1 2\n1 1 1.5\n1 1 2.5\n");
  ASSERT_EQ(m.nnz(), 1);
  EXPECT_EQ(m.values()[0], 4.0);
}

TEST(ReadMatrixMarket, ErrorsCarryLineNumbers) {
  EXPECT_EQ(parse_error_line(""), 1);
  EXPECT_EQ(parse_error_line("%%MatrixMarket matrix coordinate complex general\n1 1 0\n"), 1);
  EXPECT_EQ(parse_error_line("%MatrixMarket matrix coordinate real general\n1 1 0\n"), 1);
  EXPECT_EQ(parse_error_line("%%MatrixMarket matrix coordinate real general\n% c\n2 2\n"), 3);
  EXPECT_EQ(parse_error_line("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1\n3 1 1\n"), 4);
  EXPECT_EQ(parse_error_line("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1\n"), 4);
  EXPECT_EQ(parse_error_line("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 1\n"), 3);
  EXPECT_EQ(parse_error_line("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 1 1\n2 2 2\n"), 4);
  EXPECT_EQ(parse_error_line("%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n1 2 1\n"), 3);
  EXPECT_EQ(parse_error_line("%%MatrixMarket matrix coordinate real symmetric\n2 3 0\n"), 2);
}

TEST(WriteMatrixMarket, RoundTrips) {
  const auto d = build_crs<double>(2, 2, {0, 1, 2}, {0, 1}, {1.0, 2.0});
  std::stringstream ss;
  write_matrix_market(d, ss);
  EXPECT_TRUE(oracle::identical(read_matrix_market(ss), d));

  const auto r = gen_random_crs(100, 100, 10, 4);
  std::stringstream s2;
  write_matrix_market(r, s2);
  EXPECT_TRUE(oracle::identical(read_matrix_market(s2), r));

  const auto e = build_crs<double>(0, 0, {0}, {}, {});
  std::stringstream s3;
  write_matrix_market(e, s3);
  EXPECT_EQ(read_matrix_market(s3).num_rows(), 0);
}

TEST(WriteMatrixMarket, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "pkern_io_test.mtx";
  const auto r = gen_random_crs(30, 40, 5, 8);
  write_matrix_market(r, path);
  EXPECT_TRUE(oracle::identical(read_matrix_market(path), r));
  std::filesystem::remove(path);
  EXPECT_THROW(read_matrix_market(path), Error);
}

TEST(GenStencil, FivePointCenter) {
  const auto A = gen_stencil_matrix(StencilSpec(StencilKind::Pt5, {3, 3}));
  const auto row = A.row(4);
  EXPECT_EQ(row.size(), 5u);
  double sum = 0;
  for (double v : row.vals) sum += v;
  EXPECT_EQ(sum, 0.0);
}

TEST(GenStencil, ThreePointTwoPoints) {
  const auto A = gen_stencil_matrix(StencilSpec(StencilKind::Pt3, {2}));
  EXPECT_EQ(A.row(0).size(), 2u);
  EXPECT_EQ(A.row(1).size(), 2u);
}

TEST(GenStencil, TwentySevenPointCenter) {
  const auto A = gen_stencil_matrix(StencilSpec(StencilKind::Pt27, {3, 3, 3}));
  EXPECT_EQ(A.row(13).size(), 27u);
}

TEST(GenStencil, StructurallySymmetricAndCanonical) {
  for (auto [k, dims] : {std::pair{StencilKind::Pt9, std::vector<ordinal_t>{6, 5}},
                         std::pair{StencilKind::Pt7, std::vector<ordinal_t>{4, 3, 5}}}) {
    const auto A = gen_stencil_matrix(StencilSpec(k, dims));
    EXPECT_TRUE(A.sorted_rows() && A.merged_rows());
    EXPECT_TRUE(oracle::identical(transpose(A), A));
  }
  EXPECT_THROW(gen_stencil_matrix(StencilSpec(StencilKind::Pt5, {0, 3})), DimensionError);
}

TEST(GenRandom, DeterministicAndExact) {
  const auto a = gen_random_crs(50, 80, 7, 11), b = gen_random_crs(50, 80, 7, 11);
  EXPECT_TRUE(oracle::identical(a, b));
  EXPECT_FALSE(oracle::identical(a, gen_random_crs(50, 80, 7, 12)));
  for (ordinal_t i = 0; i < 50; ++i) EXPECT_EQ(a.row(i).size(), 7u);
  EXPECT_TRUE(a.sorted_rows() && a.merged_rows());
  for (double v : a.values()) {
    EXPECT_GE(v, -1.0);
    EXPECT_LE(v, 1.0);
  }
  const auto dense = gen_random_crs(5, 6, 6, 1);
  EXPECT_EQ(dense.nnz(), 30);
  EXPECT_THROW(gen_random_crs(5, 6, 7, 1), DimensionError);
}

TEST(GenRandom, TriangularIsDominantAndSolvable) {
  for (auto uplo : {Uplo::Lower, Uplo::Upper}) {
    const auto T = gen_random_triangular(100, 6, uplo, 3);
    for (ordinal_t i = 0; i < 100; ++i) {
      const auto r = T.row(i);
      double diag = 0, off = 0;
      for (std::size_t k = 0; k < r.size(); ++k) {
        if (r.cols[k] == i) diag = std::abs(r.vals[k]);
        else off += std::abs(r.vals[k]);
        EXPECT_TRUE(uplo == Uplo::Lower ? r.cols[k] <= i : r.cols[k] >= i);
      }
      EXPECT_GE(diag, off + 1.0);
    }
    SptrsvHandle h;
    h.uplo = uplo;
    sptrsv_symbolic(h, T);
    const auto b = random_vector(100, 4);
    EXPECT_LE(verify::solve_residual(T, sptrsv_solve(h, T, std::span<const double>(b)), b), 1e-12);
  }
}

TEST(MatrixIoSuite, Passes) {
  const auto r = verify::verify_matrix_io(verify::Config{});
  EXPECT_TRUE(r.ok()) << r.first_failure;
}

}  // namespace
}  // namespace pkern::io
