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

#include "mvp/types.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "mvp/error.hpp"

namespace mvp {

CandidateLabel::CandidateLabel(char letter) : letter_(letter) {
  if (letter < 'a' || letter > 'z')
    throw DataError(std::string("invalid candidate label '") + letter + "'");
}

CandidateLabel CandidateLabel::from_index(std::size_t index) {
  if (index >= kAlphabetSize)
    throw DataError("candidate index " + std::to_string(index) +
                    " exceeds the label alphabet");
  return CandidateLabel(static_cast<char>('a' + index));
}

const FrameRef* MvpSample::frame_for(CandidateLabel label) const {
  for (const auto& c : candidates)
    if (c.label == label) return &c.frame;
  return nullptr;
}

namespace {

void add(std::vector<Violation>& out, std::string_view name, std::string detail) {
  out.push_back({std::string(name), std::move(detail)});
}

auto frame_key(const FrameRef& f) {
  return std::tie(f.video_id, f.frame_index);
}

}  // namespace

std::vector<Violation> validate_sample(const MvpSample& s) {
  std::vector<Violation> out;

  if (s.mask_count == 0) add(out, invariant::kMaskCount, "mask_count is 0");

  if (s.candidates.size() != s.mask_count + s.distractor_count)
    add(out, invariant::kCandidateCount,
        std::to_string(s.candidates.size()) + " candidates for mask_count " +
            std::to_string(s.mask_count) + " + distractor_count " +
            std::to_string(s.distractor_count));

  if (s.answer.size() != s.mask_count)
    add(out, invariant::kAnswerLength,
        "answer has " + std::to_string(s.answer.size()) + " labels, mask_count " +
            std::to_string(s.mask_count));

  for (std::size_t i = 0; i < s.candidates.size(); ++i) {
    if (s.candidates[i].label.index() != i) {
      add(out, invariant::kLabelOrder,
          "slot " + std::to_string(i) + " carries label '" +
              s.candidates[i].label.letter() + "'");
      break;
    }
  }

  std::set<CandidateLabel> seen;
  for (auto label : s.answer) {
    if (!seen.insert(label).second) {
      add(out, invariant::kAnswerDistinct,
          std::string("label '") + label.letter() + "' repeated");
      break;
    }
  }

  bool all_present = true;
  for (auto label : s.answer) {
    if (s.frame_for(label) == nullptr) {
      all_present = false;
      add(out, invariant::kAnswerInPool,
          std::string("label '") + label.letter() + "' not in candidates");
      break;
    }
  }

  if (all_present) {
    for (std::size_t i = 1; i < s.answer.size(); ++i) {
      const FrameRef* prev = s.frame_for(s.answer[i - 1]);
      const FrameRef* cur = s.frame_for(s.answer[i]);
      if (!(prev->frame_index < cur->frame_index)) {
        add(out, invariant::kAnswerTemporalOrder,
            "frame_index " + std::to_string(prev->frame_index) +
                " precedes " + std::to_string(cur->frame_index));
        break;
      }
    }
  }

  for (std::size_t i = 1; i < s.context.size(); ++i) {
    const auto& a = s.context[i - 1];
    const auto& b = s.context[i];
    if (a.video_id == b.video_id &&
        !(a.frame_index < b.frame_index && a.timestamp_s < b.timestamp_s)) {
      add(out, invariant::kContextOrder,
          "context frames " + std::to_string(i - 1) + " and " +
              std::to_string(i) + " are out of order");
      break;
    }
  }

  if (s.gap_position > s.context.size())
    add(out, invariant::kGapPosition,
        "gap_position " + std::to_string(s.gap_position) + " beyond context of " +
            std::to_string(s.context.size()));

  for (const auto& c : s.candidates) {
    bool clash = std::any_of(s.context.begin(), s.context.end(),
                             [&](const FrameRef& f) {
                               return frame_key(f) == frame_key(c.frame);
                             });
    if (clash) {
      add(out, invariant::kContextDisjoint,
          std::string("candidate '") + c.label.letter() + "' (frame " +
              std::to_string(c.frame.frame_index) + ") also in context");
      break;
    }
  }

  return out;
}

bool has_violation(const std::vector<Violation>& report, std::string_view name) {
  return std::any_of(report.begin(), report.end(),
                     [&](const Violation& v) { return v.invariant == name; });
}

std::string labels_to_string(const std::vector<CandidateLabel>& labels) {
  std::string out = "[";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i) out += ',';
    out += labels[i].letter();
  }
  out += ']';
  return out;
}

}  // namespace mvp
