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

// JSONL dataset codec: one MvpSample object per LF-terminated line.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mvp/types.hpp"

namespace mvp {

using Json = nlohmann::ordered_json;

Json to_json(const FrameRef& f);
FrameRef frame_from_json(const Json& j);

Json to_json(const MvpSample& s);
// Throws mvp::DataError naming the offending field.
MvpSample sample_from_json(const Json& j);

std::string encode_sample(const MvpSample& s);  // single line, no newline
MvpSample decode_sample(const std::string& line);

void write_jsonl(std::ostream& out, const std::vector<MvpSample>& samples);
std::vector<MvpSample> read_jsonl(std::istream& in);

void write_corpus(const std::filesystem::path& path,
                  const std::vector<MvpSample>& samples);
std::vector<MvpSample> read_corpus(const std::filesystem::path& path);

}  // namespace mvp
