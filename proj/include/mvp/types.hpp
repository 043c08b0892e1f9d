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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mvp {

// One decoded frame of a video (1 FPS decode ordinal).
struct FrameRef {
  std::string video_id;
  double timestamp_s = 0.0;
  std::uint32_t frame_index = 0;

  friend bool operator==(const FrameRef&, const FrameRef&) = default;
};

// A lowercase letter naming one slot of a candidate pool.
class CandidateLabel {
 public:
  static constexpr std::size_t kAlphabetSize = 26;

  constexpr CandidateLabel() = default;
  // Throws mvp::DataError unless 'a' <= letter <= 'z'.
  explicit CandidateLabel(char letter);
  static CandidateLabel from_index(std::size_t index);

  constexpr char letter() const { return letter_; }
  constexpr std::size_t index() const {
    return static_cast<std::size_t>(letter_ - 'a');
  }

  friend constexpr bool operator==(CandidateLabel, CandidateLabel) = default;
  friend constexpr auto operator<=>(CandidateLabel, CandidateLabel) = default;

 private:
  char letter_ = 'a';
};

struct Candidate {
  CandidateLabel label;
  FrameRef frame;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

// One cloze instance: visible context, the masked run's position in it, a
// shuffled pool of masked frames plus distractors, and the ground-truth
// label sequence in original temporal order.
struct MvpSample {
  std::string sample_id;
  std::vector<FrameRef> context;
  std::size_t gap_position = 0;
  std::vector<Candidate> candidates;
  std::vector<CandidateLabel> answer;
  std::size_t mask_count = 0;
  std::size_t distractor_count = 0;
  std::uint64_t seed = 0;

  std::size_t pool_size() const { return candidates.size(); }
  // Frame behind a label, or nullptr if the label is not in the pool.
  const FrameRef* frame_for(CandidateLabel label) const;

  friend bool operator==(const MvpSample&, const MvpSample&) = default;
};

struct Prediction {
  std::vector<CandidateLabel> labels;
  std::optional<std::string> raw_text;
};

struct Violation {
  std::string invariant;
  std::string detail;
};

// Stable names reported by validate_sample().
namespace invariant {
inline constexpr std::string_view kCandidateCount = "candidate count";
inline constexpr std::string_view kAnswerLength = "answer length";
inline constexpr std::string_view kAnswerDistinct = "answer labels distinct";
inline constexpr std::string_view kAnswerInPool = "answer labels in candidates";
inline constexpr std::string_view kAnswerTemporalOrder = "answer temporal order";
inline constexpr std::string_view kContextDisjoint = "context/candidate disjoint";
inline constexpr std::string_view kLabelOrder = "candidate label order";
inline constexpr std::string_view kContextOrder = "context temporal order";
inline constexpr std::string_view kGapPosition = "gap position";
inline constexpr std::string_view kMaskCount = "mask count positive";
}  // namespace invariant

// Every violated invariant; empty iff the sample is well-formed.
std::vector<Violation> validate_sample(const MvpSample& sample);

bool has_violation(const std::vector<Violation>& report, std::string_view name);

std::string labels_to_string(const std::vector<CandidateLabel>& labels);

}  // namespace mvp
