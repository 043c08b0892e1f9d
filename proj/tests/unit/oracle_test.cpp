// Copyright 2026 The mvp-forge Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>

#include "helpers.hpp"
#include "mvp/checks.hpp"
#include "mvp/error.hpp"
#include "mvp/oracle.hpp"

namespace mvp {
namespace {

using test::labels;

TEST(Oracle, DistinctSequenceCounts) {
  EXPECT_EQ(oracle::distinct_sequences(7, 4).size(), 840u);
  EXPECT_EQ(oracle::distinct_sequences(6, 3).size(), 120u);
  EXPECT_EQ(oracle::distinct_sequences(3, 1).size(), 3u);
}

TEST(Oracle, MaximalRunsOnKnownPair) {
  const auto runs = oracle::all_maximal_runs(labels("bca"), labels("abc"));
  bool found = false;
  for (const auto& r : runs) found = found || (r.p == 0 && r.t == 1 && r.len == 2);
  EXPECT_TRUE(found);
  EXPECT_EQ(oracle::brute_match_length(labels("bca"), labels("abc"), 2), 2u);
  EXPECT_EQ(oracle::brute_match_length(labels("abc"), labels("abc"), 2), 0u);
}

TEST(Oracle, MaxRewardIsAlpha) {
  EXPECT_DOUBLE_EQ(oracle::max_r_correct(labels("cab"), 6, RewardConfig{}), 3.0);
}

TEST(Oracle, Spearman) {
  const std::vector<double> x{1, 2, 3, 4, 5};
  EXPECT_DOUBLE_EQ(oracle::spearman(x, std::vector<double>{2, 4, 6, 8, 10}), 1.0);
  EXPECT_DOUBLE_EQ(oracle::spearman(x, std::vector<double>{5, 4, 3, 2, 1}), -1.0);
  EXPECT_NEAR(oracle::spearman(x, std::vector<double>{1, 1, 2, 2, 3}), 0.9486832980505138, 1e-12);
}

TEST(Oracle, MannKendall) {
  std::vector<double> up;
  for (int i = 0; i < 50; ++i) up.push_back(i);
  const auto trend = oracle::mann_kendall(up);
  EXPECT_EQ(trend.s, 50.0 * 49.0 / 2.0);
  EXPECT_LT(trend.p_value, 1e-6);
  const std::vector<double> flat(30, 1.0);
  EXPECT_EQ(oracle::mann_kendall(flat).p_value, 1.0);
  // small textbook series: S = 4 for 1,3,2,4
  EXPECT_EQ(oracle::mann_kendall(std::vector<double>{1, 3, 2, 4}).s, 4.0);
}

TEST(Oracle, CentralDifferencesOfQuadratic) {
  auto f = [](std::span<const double> x) { return x[0] * x[0] + 3.0 * x[1]; };
  const std::vector<double> x{2.0, -1.0};
  const auto g = oracle::central_differences(f, x, 1e-5);
  EXPECT_NEAR(g[0], 4.0, 1e-8);
  EXPECT_NEAR(g[1], 3.0, 1e-8);
}

TEST(VerifySuites, NamesAndUnknownSuite) {
  EXPECT_EQ(verify::suite_names().back(), "all");
  EXPECT_THROW(verify::run_suite("nope"), ConfigError);
}

TEST(VerifySuites, GrpoSuitePasses) {
  for (const auto& r : verify::run_suite("grpo")) {
    EXPECT_TRUE(r.passed()) << r.name;
    EXPECT_GT(r.instances, 0u);
  }
}

}  // namespace
}  // namespace mvp
