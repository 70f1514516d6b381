// Copyright 2026 The pkern Authors
// SPDX-License-Identifier: Apache-2.0

// The oracle suites behind `pkern-bench verify`.

#include <gtest/gtest.h>

#include "pkern/verify/suite.hpp"

namespace pkern::verify {
namespace {

class RegisteredSuite : public ::testing::TestWithParam<std::string_view> {};

TEST_P(RegisteredSuite, PassesAtDefaultSize) {
  const auto* k = find_kernel(GetParam());
  ASSERT_NE(k, nullptr);
  const auto r = k->run(Config{});
  EXPECT_GT(r.total, 0);
  EXPECT_TRUE(r.ok()) << r.kernel << ": " << r.first_failure;
}

std::vector<std::string_view> names() {
  std::vector<std::string_view> n;
  for (const auto& k : kernels()) n.push_back(k.name);
  return n;
}

INSTANTIATE_TEST_SUITE_P(All, RegisteredSuite, ::testing::ValuesIn(names()), [](const auto& info) {
  std::string s(info.param);
  for (auto& c : s)
    if (c == '-') c = '_';
  return s;
});

TEST(Suite, EveryKernelFamilyIsRegistered) {
  for (std::string_view k : {"spmv", "spmv-structured", "spgemm", "spgemm-jacobi", "spadd", "sptrsv", "batched-gemm",
                             "batched-trmm", "batched-trtri", "batched-lu", "batched-trsv", "color-d1", "color-d2",
                             "color-bgpc", "mis2", "mis2-coarsen", "sort", "matrix-io", "edge-cases"})
    EXPECT_NE(find_kernel(k), nullptr) << k;
  EXPECT_EQ(find_kernel("nope"), nullptr);
}

TEST(Suite, InjectedFaultsAreCaught) {
  for (std::string_view k : {"spadd", "spgemm"}) {
    Config cfg;
    cfg.trials = 5;
    cfg.inject_fault = std::string(k);
    const auto r = find_kernel(k)->run(cfg);
    EXPECT_FALSE(r.ok()) << k;
    EXPECT_EQ(r.passed, 0);
    EXPECT_NE(r.first_failure.find("row counts"), std::string::npos) << r.first_failure;
  }
}

TEST(Suite, SeedChangesInputsNotOutcome) {
  Config a, b;
  a.seed = 1;
  b.seed = 12345;
  EXPECT_TRUE(verify_spgemm(a).ok());
  EXPECT_TRUE(verify_spgemm(b).ok());
}

}  // namespace
}  // namespace pkern::verify
