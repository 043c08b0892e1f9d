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

// Hierarchical reward for MVP predictions.
//
//   token score     s(i) = alpha/K  if pred[i] == truth[i]
//                          gamma/K  if pred[i] is elsewhere in truth
//                          0        otherwise
//   continuity      (gamma/K) * L_match, L_match = total length of the maximal
//                   common runs (length >= min_substring_len) that start at
//                   different positions in pred and truth, chosen greedily by
//                   length without overlapping on the prediction side
//   r_correct       token score + continuity
//   r_total         beta_fmt * r_format + (1 - beta_fmt) * r_correct
//
// Predictions longer than K are truncated to K; shorter ones score only the
// positions they have.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mvp/types.hpp"

namespace mvp {

enum class RewardMode { kExactOnly, kContentAware, kContentPlusSequence };

std::string_view to_string(RewardMode mode);
// Accepts exact_only | content_aware | content_plus_sequence. Throws
// mvp::ConfigError otherwise.
RewardMode parse_reward_mode(std::string_view name);

struct RewardConfig {
  double alpha = 3.0;
  double gamma = 0.9;
  double beta_fmt = 0.1;
  std::size_t min_substring_len = 2;
  RewardMode mode = RewardMode::kContentPlusSequence;
  // When set, a repeated predicted label earns content credit only on its
  // first occurrence.
  bool dedup_content_credit = false;

  // alpha > gamma > 0, beta_fmt in [0, 1], min_substring_len >= 1.
  void validate() const;
};

enum class Verdict : std::uint8_t { kExact, kContent, kMiss };
std::string_view to_string(Verdict v);

struct PositionVerdict {
  CandidateLabel label;
  Verdict verdict = Verdict::kMiss;
};

struct MatchedRun {
  std::size_t pred_start = 0;
  std::size_t truth_start = 0;
  std::size_t length = 0;

  friend bool operator==(const MatchedRun&, const MatchedRun&) = default;
};

struct ParsedResponse {
  std::string think_text;
  std::vector<CandidateLabel> labels;
  bool format_ok = false;
};

// Never throws. See the implementation notes for the accepted structure.
ParsedResponse parse_response(std::string_view raw);

struct TokenScore {
  double value = 0.0;
  std::vector<PositionVerdict> per_position;
};

// Throws mvp::EmptyTruth when truth is empty.
TokenScore token_score(std::span<const CandidateLabel> pred,
                       std::span<const CandidateLabel> truth, const RewardConfig& cfg);

struct ContinuityBonus {
  double value = 0.0;
  std::vector<MatchedRun> runs;
};

// Zero (and no runs) outside kContentPlusSequence. Throws mvp::EmptyTruth.
ContinuityBonus continuity_bonus(std::span<const CandidateLabel> pred,
                                 std::span<const CandidateLabel> truth,
                                 const RewardConfig& cfg);

struct RewardBreakdown {
  double token_score = 0.0;
  double continuity_bonus = 0.0;
  double r_correct = 0.0;
  int r_format = 0;
  double r_total = 0.0;
  std::vector<PositionVerdict> per_position;
  std::vector<MatchedRun> matched_runs;
  std::size_t pred_length = 0;
  std::size_t truth_length = 0;
  RewardMode mode = RewardMode::kContentPlusSequence;

  bool length_mismatch() const { return pred_length != truth_length; }
};

// r_format and r_total left at 0.
RewardBreakdown correctness_reward(std::span<const CandidateLabel> pred,
                                   std::span<const CandidateLabel> truth,
                                   const RewardConfig& cfg);

// Fills r_format / r_total on top of correctness_reward.
RewardBreakdown score_prediction(std::span<const CandidateLabel> pred, bool format_ok,
                                 std::span<const CandidateLabel> truth,
                                 const RewardConfig& cfg);

RewardBreakdown total_reward(std::string_view raw_response,
                             std::span<const CandidateLabel> truth,
                             const RewardConfig& cfg);

nlohmann::ordered_json to_json(const RewardBreakdown& b);
nlohmann::ordered_json to_json(const RewardConfig& cfg);

}  // namespace mvp
