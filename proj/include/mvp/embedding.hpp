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

// Per-frame embedding streams and the MVPE binary container.
//
// MVPE layout (little-endian):
//   "MVPE" | u32 version = 1 | u32 dim | u32 frame_count |
//   frame_count x (u32 frame_index | f32 timestamp_s | dim x f32)

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "mvp/types.hpp"

namespace mvp {

struct FrameMeta {
  std::uint32_t frame_index = 0;
  double timestamp_s = 0.0;
};

// Frame vectors are stored contiguously (row-major, stride = dim) and are
// unit-normalized on construction.
class EmbeddingSequence {
 public:
  EmbeddingSequence() = default;
  // Throws mvp::DataError on zero/non-finite vectors, non-increasing
  // frame_index, or a data size that is not frames * dim.
  EmbeddingSequence(std::string video_id, std::size_t dim,
                    std::vector<FrameMeta> frames, std::vector<float> vectors);

  const std::string& video_id() const { return video_id_; }
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return frames_.size(); }
  bool empty() const { return frames_.empty(); }

  const FrameMeta& meta(std::size_t pos) const { return frames_[pos]; }
  std::span<const float> vector(std::size_t pos) const {
    return {vectors_.data() + pos * dim_, dim_};
  }
  std::span<const float> raw_data() const { return vectors_; }
  FrameRef frame_ref(std::size_t pos) const;

  // Position of a frame_index, or size() if absent.
  std::size_t position_of(std::uint32_t frame_index) const;

 private:
  std::string video_id_;
  std::size_t dim_ = 0;
  std::vector<FrameMeta> frames_;
  std::vector<float> vectors_;
};

inline constexpr std::uint32_t kMvpeVersion = 1;

std::vector<std::uint8_t> encode_mvpe(const EmbeddingSequence& seq);
// video_id is supplied by the caller (the file stem).
EmbeddingSequence decode_mvpe(std::span<const std::uint8_t> bytes,
                              std::string video_id);

void write_mvpe(const std::filesystem::path& path, const EmbeddingSequence& seq);
// video_id = file name with the ".mvpe" suffix removed.
EmbeddingSequence read_mvpe(const std::filesystem::path& path);

// Every <video_id>.mvpe in a directory, sorted by video_id. Throws
// mvp::DataError if the directory does not exist.
std::vector<EmbeddingSequence> load_embedding_dir(const std::filesystem::path& dir);

}  // namespace mvp
