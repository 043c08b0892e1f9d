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

#include "mvp/prompt.hpp"

#include <array>
#include <string_view>
#include <utility>

#include "mvp/error.hpp"

namespace mvp {
namespace {

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  std::size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
}

std::string fill(std::string tpl,
                 std::initializer_list<std::pair<std::string_view, std::string>> values) {
  for (const auto& [key, value] : values) replace_all(tpl, key, value);
  return tpl;
}

}  // namespace

PromptTemplate PromptTemplate::training_default() {
  PromptTemplate t;
  t.body =
      "The video below is shown as a sequence of frames in temporal order. A "
      "continuous segment of {mask_count} frames has been removed and replaced "
      "by a [MASK] marker.\n\n"
      "{context}\n"
      "Candidate frames (some of them do not belong to the removed segment):\n"
      "{candidates}\n"
      "Choose the {mask_count} candidates that fill the masked segment and "
      "arrange them in their original temporal order. Reason step by step inside "
      "<think></think> tags, then give the final answer inside <answer></answer> "
      "tags as a bracketed list of letters, for example {answer_format}.";
  t.context_item = "Frame {ordinal}: <image>\n";
  t.gap_item = "[MASK] ({mask_count} frames)\n";
  t.candidate_item = "({label}) <image>\n";
  return t;
}

void check_template(const PromptTemplate& tpl) {
  struct Need {
    const std::string* text;
    std::string_view where;
    std::string_view token;
  };
  const std::array<Need, 7> needs{{
      {&tpl.body, "body", "{context}"},
      {&tpl.body, "body", "{candidates}"},
      {&tpl.body, "body", "{mask_count}"},
      {&tpl.body, "body", "{answer_format}"},
      {&tpl.context_item, "context_item", "{ordinal}"},
      {&tpl.gap_item, "gap_item", "{mask_count}"},
      {&tpl.candidate_item, "candidate_item", "{label}"},
  }};
  for (const auto& n : needs)
    if (n.text->find(n.token) == std::string::npos)
      throw TemplateError(std::string(n.where) + ":" + std::string(n.token));
}

std::string answer_format_hint(std::size_t k) {
  // letters counted back from 'z' so the hint never names a real pool slot in
  // typical pools
  std::string out = "[";
  for (std::size_t i = 0; i < k; ++i) {
    if (i) out += ',';
    out += static_cast<char>('z' - (k - 1 - i) % 26);
  }
  return out + "]";
}

std::string render_prompt(const MvpSample& sample, const PromptTemplate& tpl) {
  check_template(tpl);
  const std::string k = std::to_string(sample.mask_count);
  std::string context;
  std::size_t ordinal = 1;
  auto gap = [&] {
    context += fill(tpl.gap_item, {{"{mask_count}", k}});
    ordinal += sample.mask_count;
  };
  for (std::size_t i = 0; i < sample.context.size(); ++i) {
    if (i == sample.gap_position) gap();
    context += fill(tpl.context_item, {{"{ordinal}", std::to_string(ordinal++)}});
  }
  if (sample.gap_position >= sample.context.size()) gap();

  std::string candidates;
  for (const auto& c : sample.candidates)
    candidates += fill(tpl.candidate_item, {{"{label}", std::string(1, c.label.letter())}});

  return fill(tpl.body, {{"{context}", context},
                         {"{candidates}", candidates},
                         {"{mask_count}", k},
                         {"{answer_format}", answer_format_hint(sample.mask_count)}});
}

}  // namespace mvp
