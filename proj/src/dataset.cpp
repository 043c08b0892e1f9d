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

#include "mvp/dataset.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "mvp/error.hpp"

namespace mvp {
namespace {

const Json& field(const Json& j, const char* name) {
  if (!j.is_object()) throw DataError("expected a JSON object");
  auto it = j.find(name);
  if (it == j.end()) throw DataError(std::string("missing field '") + name + "'");
  return *it;
}

template <typename T>
T get_as(const Json& j, const char* name) {
  try {
    return field(j, name).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("field '") + name + "': " + e.what());
  }
}

CandidateLabel label_from_json(const Json& j) {
  if (!j.is_string() || j.get_ref<const std::string&>().size() != 1)
    throw DataError("candidate label must be a one-letter string");
  return CandidateLabel(j.get_ref<const std::string&>()[0]);
}

}  // namespace

Json to_json(const FrameRef& f) {
  return Json{{"video_id", f.video_id},
              {"timestamp_s", f.timestamp_s},
              {"frame_index", f.frame_index}};
}

FrameRef frame_from_json(const Json& j) {
  FrameRef f;
  f.video_id = get_as<std::string>(j, "video_id");
  f.timestamp_s = get_as<double>(j, "timestamp_s");
  f.frame_index = get_as<std::uint32_t>(j, "frame_index");
  if (f.timestamp_s < 0.0) throw DataError("negative timestamp_s");
  return f;
}

Json to_json(const MvpSample& s) {
  Json context = Json::array();
  for (const auto& f : s.context) context.push_back(to_json(f));
  Json candidates = Json::array();
  for (const auto& c : s.candidates)
    candidates.push_back(
        Json{{"label", std::string(1, c.label.letter())}, {"frame", to_json(c.frame)}});
  Json answer = Json::array();
  for (auto l : s.answer) answer.push_back(std::string(1, l.letter()));
  return Json{{"sample_id", s.sample_id},
              {"context", std::move(context)},
              {"gap_position", s.gap_position},
              {"candidates", std::move(candidates)},
              {"answer", std::move(answer)},
              {"mask_count", s.mask_count},
              {"distractor_count", s.distractor_count},
              {"seed", s.seed}};
}

MvpSample sample_from_json(const Json& j) {
  MvpSample s;
  s.sample_id = get_as<std::string>(j, "sample_id");
  for (const auto& f : field(j, "context")) s.context.push_back(frame_from_json(f));
  s.gap_position = get_as<std::size_t>(j, "gap_position");
  for (const auto& c : field(j, "candidates"))
    s.candidates.push_back({label_from_json(field(c, "label")),
                            frame_from_json(field(c, "frame"))});
  for (const auto& l : field(j, "answer")) s.answer.push_back(label_from_json(l));
  s.mask_count = get_as<std::size_t>(j, "mask_count");
  s.distractor_count = get_as<std::size_t>(j, "distractor_count");
  s.seed = get_as<std::uint64_t>(j, "seed");
  return s;
}

std::string encode_sample(const MvpSample& s) { return to_json(s).dump(); }

MvpSample decode_sample(const std::string& line) {
  Json j;
  try {
    j = Json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(std::string("invalid JSON: ") + e.what());
  }
  return sample_from_json(j);
}

void write_jsonl(std::ostream& out, const std::vector<MvpSample>& samples) {
  for (const auto& s : samples) out << encode_sample(s) << '\n';
}

std::vector<MvpSample> read_jsonl(std::istream& in) {
  std::vector<MvpSample> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      out.push_back(decode_sample(line));
    } catch (const DataError& e) {
      throw DataError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

void write_corpus(const std::filesystem::path& path,
                  const std::vector<MvpSample>& samples) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  write_jsonl(out, samples);
}

std::vector<MvpSample> read_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open corpus " + path.string());
  try {
    return read_jsonl(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

}  // namespace mvp
