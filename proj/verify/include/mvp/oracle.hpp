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

#pragma once

// Independent reference computations used to check the production engines.
// Nothing here calls into the code paths it verifies: the scorers are naive
// per-position loops and exhaustive run enumeration, the de-dup rescan uses
// its own dot product, and the statistics are textbook two-pass formulas.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mvp/embedding.hpp"
#include "mvp/reward.hpp"
#include "mvp/types.hpp"

namespace mvp::oracle {

using Labels = std::vector<CandidateLabel>;

// Every ordered sequence of `len` distinct labels drawn from a pool.
std::vector<Labels> distinct_sequences(std::size_t pool_size, std::size_t len);

double brute_token_score(const Labels& pred, const Labels& truth, const RewardConfig& cfg);

struct BruteRun {
  std::size_t p, t, len;
};
// All maximal common runs, found by checking every (p, t, len) triple.
std::vector<BruteRun> all_maximal_runs(const Labels& pred, const Labels& truth);
// L_match under greedy longest-first, leftmost-first, non-overlapping (on
// the prediction side) selection of offset runs.
std::size_t brute_match_length(const Labels& pred, const Labels& truth,
                               std::size_t min_len);
double brute_continuity(const Labels& pred, const Labels& truth, const RewardConfig& cfg);
double brute_r_correct(const Labels& pred, const Labels& truth, const RewardConfig& cfg);

// Maximum r_correct over every duplicate-free length-K prediction.
double max_r_correct(const Labels& truth, std::size_t pool_size, const RewardConfig& cfg);

// Straight rescan de-dup returning positions; empty if fewer than n found.
std::vector<std::size_t> rescan_select(const EmbeddingSequence& seq, std::size_t start_pos,
                                       std::size_t n, double kappa);

// (r - mean) / (population std + eps) in long double.
std::vector<double> reference_advantages(std::span<const double> rewards, double eps);

// Central differences of f around x with step h.
std::vector<double> central_differences(const std::function<double(std::span<const double>)>& f,
                                        std::span<const double> x, double h);

double spearman(std::span<const double> x, std::span<const double> y);

struct MannKendall {
  double s = 0.0;
  double z = 0.0;
  double p_value = 1.0;  // two-sided
};
MannKendall mann_kendall(std::span<const double> series);

}  // namespace mvp::oracle
