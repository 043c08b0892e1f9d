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

#include <algorithm>

#include "helpers.hpp"
#include "mvp/error.hpp"
#include "mvp/prompt.hpp"

namespace mvp {
namespace {

TEST(RenderPrompt, ListsSixOptionsAndAnswerHint) {
  const auto text = render_prompt(test::small_sample(), PromptTemplate::training_default());
  for (char c = 'a'; c <= 'f'; ++c)
    EXPECT_NE(text.find(std::string("(") + c + ")"), std::string::npos) << c;
  EXPECT_EQ(text.find("(g)"), std::string::npos);
  EXPECT_NE(text.find("[x,y,z]"), std::string::npos);
  EXPECT_NE(text.find("<answer>"), std::string::npos);
}

TEST(RenderPrompt, Deterministic) {
  const auto tpl = PromptTemplate::training_default();
  EXPECT_EQ(render_prompt(test::small_sample(), tpl), render_prompt(test::small_sample(), tpl));
}

TEST(RenderPrompt, GapAtZeroPrecedesContext) {
  auto s = test::small_sample();
  s.gap_position = 0;
  const auto text = render_prompt(s, PromptTemplate::training_default());
  EXPECT_LT(text.find("[MASK]"), text.find("Frame "));
}

TEST(RenderPrompt, GapSitsBetweenContextFrames) {
  const auto text = render_prompt(test::small_sample(), PromptTemplate::training_default());
  const auto gap = text.find("[MASK] (3");
  EXPECT_LT(text.find("Frame 5:"), gap);
  EXPECT_GT(text.find("Frame 9:"), gap);
  EXPECT_EQ(text.find("Frame 6:"), std::string::npos);
}

TEST(RenderPrompt, CandidatesDoNotLeakTimestamps) {
  const auto text = render_prompt(test::small_sample(), PromptTemplate::training_default());
  EXPECT_EQ(text.find("20"), std::string::npos);
  EXPECT_EQ(text.find("clip"), std::string::npos);
}

TEST(CheckTemplate, NamesMissingPlaceholder) {
  auto tpl = PromptTemplate::training_default();
  tpl.body = "no candidates here {context} {mask_count} {answer_format}";
  try {
    check_template(tpl);
    FAIL();
  } catch (const TemplateError& e) {
    EXPECT_EQ(e.placeholder, "body:{candidates}");
  }
  tpl = PromptTemplate::training_default();
  tpl.candidate_item = "option";
  EXPECT_THROW(render_prompt(test::small_sample(), tpl), TemplateError);
}

TEST(AnswerFormatHint, MatchesK) {
  EXPECT_EQ(answer_format_hint(3), "[x,y,z]");
  EXPECT_EQ(answer_format_hint(2).front(), '[');
  const auto four = answer_format_hint(4);
  EXPECT_EQ(std::count(four.begin(), four.end(), ','), 3);
}

}  // namespace
}  // namespace mvp
