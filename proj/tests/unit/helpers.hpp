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

#include <string_view>
#include <vector>

#include "mvp/types.hpp"

namespace mvp::test {

// "bac" -> [b, a, c]
inline std::vector<CandidateLabel> labels(std::string_view letters) {
  std::vector<CandidateLabel> out;
  for (char c : letters) out.emplace_back(c);
  return out;
}

// K=3, pool a..f. Frames 0..14 are the selected sequence with 5..7 masked;
// the answer [b,d,a] points at frames 5, 6, 7.
inline MvpSample small_sample() {
  MvpSample s;
  s.sample_id = "clip@0";
  for (std::uint32_t i = 0; i < 15; ++i)
    if (i < 5 || i > 7) s.context.push_back({"clip", double(i), i});
  s.gap_position = 5;
  const std::uint32_t pool[6] = {7, 5, 20, 6, 22, 24};
  for (std::size_t i = 0; i < 6; ++i)
    s.candidates.push_back({CandidateLabel::from_index(i), {"clip", double(pool[i]), pool[i]}});
  s.answer = labels("bda");
  s.mask_count = 3;
  s.distractor_count = 3;
  s.seed = 42;
  return s;
}

}  // namespace mvp::test
