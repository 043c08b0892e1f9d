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

#include "mvp/embedding.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "mvp/error.hpp"
#include "mvp/kernels.hpp"

namespace mvp {

EmbeddingSequence::EmbeddingSequence(std::string video_id, std::size_t dim,
                                     std::vector<FrameMeta> frames,
                                     std::vector<float> vectors)
    : video_id_(std::move(video_id)),
      dim_(dim),
      frames_(std::move(frames)),
      vectors_(std::move(vectors)) {
  if (dim_ == 0) throw DataError(video_id_ + ": embedding dim is 0");
  if (vectors_.size() != frames_.size() * dim_)
    throw DataError(video_id_ + ": vector data does not match frame count x dim");
  for (std::size_t i = 0; i < frames_.size(); ++i) {
    if (i > 0 && frames_[i].frame_index <= frames_[i - 1].frame_index)
      throw DataError(video_id_ + ": frame_index not strictly increasing at record " +
                      std::to_string(i));
    if (!(frames_[i].timestamp_s >= 0.0))
      throw DataError(video_id_ + ": invalid timestamp at record " + std::to_string(i));
    std::span<float> v(vectors_.data() + i * dim_, dim_);
    const double norm = std::sqrt(kernels::squared_norm(v));
    if (!std::isfinite(norm) || norm == 0.0)
      throw DataError(video_id_ + ": zero or non-finite embedding at record " +
                      std::to_string(i));
    // already-normalized input is kept bit-exact
    if (std::abs(norm - 1.0) > 1e-6) kernels::scale(v, static_cast<float>(1.0 / norm));
  }
}

FrameRef EmbeddingSequence::frame_ref(std::size_t pos) const {
  return FrameRef{video_id_, frames_[pos].timestamp_s, frames_[pos].frame_index};
}

std::size_t EmbeddingSequence::position_of(std::uint32_t frame_index) const {
  auto it = std::lower_bound(
      frames_.begin(), frames_.end(), frame_index,
      [](const FrameMeta& m, std::uint32_t v) { return m.frame_index < v; });
  if (it == frames_.end() || it->frame_index != frame_index) return frames_.size();
  return static_cast<std::size_t>(it - frames_.begin());
}

namespace {

constexpr char kMagic[4] = {'M', 'V', 'P', 'E'};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_f32(std::vector<std::uint8_t>& out, float f) {
  put_u32(out, std::bit_cast<std::uint32_t>(f));
}

class Reader {
 public:
  Reader(std::span<const std::uint8_t> bytes, const std::string& name)
      : bytes_(bytes), name_(name) {}

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(bytes_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }
  float f32() { return std::bit_cast<float>(u32()); }
  void magic() {
    need(4);
    if (std::memcmp(bytes_.data(), kMagic, 4) != 0)
      throw DataError(name_ + ": bad MVPE magic");
    pos_ += 4;
  }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n) {
    if (pos_ + n > bytes_.size())
      throw DataError(name_ + ": truncated MVPE file at byte " + std::to_string(pos_));
  }
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
  const std::string& name_;
};

}  // namespace

std::vector<std::uint8_t> encode_mvpe(const EmbeddingSequence& seq) {
  std::vector<std::uint8_t> out;
  out.reserve(16 + seq.size() * (8 + 4 * seq.dim()));
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  put_u32(out, kMvpeVersion);
  put_u32(out, static_cast<std::uint32_t>(seq.dim()));
  put_u32(out, static_cast<std::uint32_t>(seq.size()));
  for (std::size_t i = 0; i < seq.size(); ++i) {
    put_u32(out, seq.meta(i).frame_index);
    put_f32(out, static_cast<float>(seq.meta(i).timestamp_s));
    for (float x : seq.vector(i)) put_f32(out, x);
  }
  return out;
}

EmbeddingSequence decode_mvpe(std::span<const std::uint8_t> bytes,
                              std::string video_id) {
  Reader r(bytes, video_id);
  r.magic();
  const std::uint32_t version = r.u32();
  if (version != kMvpeVersion)
    throw DataError(video_id + ": unsupported MVPE version " + std::to_string(version));
  const std::uint32_t dim = r.u32();
  const std::uint32_t count = r.u32();
  if (dim == 0) throw DataError(video_id + ": MVPE dim is 0");
  const std::uint64_t record = 8 + 4ULL * dim;
  if (record * count != r.remaining())
    throw DataError(video_id + ": MVPE payload size does not match header (" +
                    std::to_string(count) + " frames x dim " + std::to_string(dim) +
                    ")");
  std::vector<FrameMeta> frames(count);
  std::vector<float> vectors(std::size_t(count) * dim);
  for (std::uint32_t i = 0; i < count; ++i) {
    frames[i].frame_index = r.u32();
    frames[i].timestamp_s = r.f32();
    for (std::uint32_t d = 0; d < dim; ++d) vectors[std::size_t(i) * dim + d] = r.f32();
  }
  return EmbeddingSequence(std::move(video_id), dim, std::move(frames),
                           std::move(vectors));
}

void write_mvpe(const std::filesystem::path& path, const EmbeddingSequence& seq) {
  auto bytes = encode_mvpe(seq);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

EmbeddingSequence read_mvpe(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_mvpe(bytes, path.stem().string());
}

std::vector<EmbeddingSequence> load_embedding_dir(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec))
    throw DataError("embeddings directory not found: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".mvpe")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::vector<EmbeddingSequence> out;
  out.reserve(files.size());
  for (const auto& f : files) out.push_back(read_mvpe(f));
  return out;
}

}  // namespace mvp
