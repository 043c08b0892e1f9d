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

#include <string>

#include "mvp/types.hpp"

namespace mvp {

// Text template for MVP prompts. Placeholders are literal `{name}` tokens.
//
//   body            needs {context} {candidates} {mask_count} {answer_format}
//   context_item    needs {ordinal}             (one visible frame)
//   gap_item        needs {mask_count}          (the masked segment)
//   candidate_item  needs {label}               (one pool entry)
//
// Candidate items never expose timestamps or frame indices.
struct PromptTemplate {
  std::string body;
  std::string context_item;
  std::string gap_item;
  std::string candidate_item;

  static PromptTemplate training_default();
};

// Throws mvp::TemplateError naming the first missing placeholder, e.g.
// "body:{candidates}".
void check_template(const PromptTemplate& tpl);

// Example answer list with K slots, e.g. "[x,y,z]" for K = 3.
std::string answer_format_hint(std::size_t k);

std::string render_prompt(const MvpSample& sample, const PromptTemplate& tpl);

}  // namespace mvp
