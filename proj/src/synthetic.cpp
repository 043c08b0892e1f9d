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

#include "mvp/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "mvp/error.hpp"

namespace mvp::synthetic {
namespace {

double normal(Rng& rng) {
  // Box-Muller on our own uniforms; std::normal_distribution is not portable.
  const double u1 = 1.0 - uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

void normalize(std::vector<double>& v) {
  double n = 0.0;
  for (double x : v) n += x * x;
  n = std::sqrt(n);
  for (double& x : v) x /= n;
}

std::vector<float> to_float(const std::vector<double>& v) {
  return {v.begin(), v.end()};
}

}  // namespace

std::vector<float> random_unit_vector(std::size_t dim, Rng& rng) {
  std::vector<double> v(dim);
  for (double& x : v) x = normal(rng);
  normalize(v);
  return to_float(v);
}

std::vector<float> vector_at_similarity(const std::vector<float>& v, double similarity,
                                        Rng& rng) {
  // Gram-Schmidt a random direction against v, then mix.
  std::vector<double> w(v.size());
  for (double& x : w) x = normal(rng);
  double proj = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) proj += w[i] * v[i];
  for (std::size_t i = 0; i < v.size(); ++i) w[i] -= proj * v[i];
  normalize(w);
  const double ortho = std::sqrt(std::max(0.0, 1.0 - similarity * similarity));
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = similarity * v[i] + ortho * w[i];
  normalize(out);
  return to_float(out);
}

PlantedSequence planted_duplicates(const std::string& video_id, std::size_t distinct,
                                   std::size_t copies, std::size_t dim,
                                   double duplicate_similarity, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<FrameMeta> meta;
  std::vector<float> data;
  PlantedSequence out;
  std::uint32_t index = 0;
  for (std::size_t d = 0; d < distinct; ++d) {
    auto base = random_unit_vector(dim, rng);
    out.distinct_frames.push_back(index);
    meta.push_back({index, static_cast<double>(index)});
    data.insert(data.end(), base.begin(), base.end());
    ++index;
    for (std::size_t c = 0; c < copies; ++c) {
      auto dup = vector_at_similarity(base, duplicate_similarity, rng);
      meta.push_back({index, static_cast<double>(index)});
      data.insert(data.end(), dup.begin(), dup.end());
      ++index;
    }
  }
  out.sequence = EmbeddingSequence(video_id, dim, std::move(meta), std::move(data));
  return out;
}

EmbeddingSequence video(const std::string& video_id, std::uint64_t seed,
                        const VideoOptions& options) {
  Rng rng(derive_seed(seed, video_id));
  std::vector<FrameMeta> meta;
  std::vector<float> data;
  data.reserve(options.frames * options.dim);
  std::vector<float> prev;
  for (std::size_t i = 0; i < options.frames; ++i) {
    std::vector<float> v;
    if (!prev.empty() && bernoulli(rng, options.duplicate_prob))
      v = vector_at_similarity(prev, options.duplicate_similarity, rng);
    else
      v = random_unit_vector(options.dim, rng);
    meta.push_back({static_cast<std::uint32_t>(i), static_cast<double>(i)});
    data.insert(data.end(), v.begin(), v.end());
    prev = std::move(v);
  }
  return EmbeddingSequence(video_id, options.dim, std::move(meta), std::move(data));
}

std::vector<EmbeddingSequence> video_corpus(std::size_t count, std::uint64_t seed,
                                            const VideoOptions& options) {
  std::vector<EmbeddingSequence> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "video%03zu", i);
    out.push_back(video(name, seed, options));
  }
  return out;
}

std::vector<MvpSample> samples(std::size_t count, std::size_t pool_size, std::size_t k,
                               std::uint64_t seed, std::size_t context_len) {
  if (k == 0 || k > pool_size || pool_size > CandidateLabel::kAlphabetSize)
    throw ConfigError("synthetic samples need 1 <= K <= pool <= 26");
  Rng rng(seed);
  std::vector<MvpSample> out;
  out.reserve(count);
  for (std::size_t n = 0; n < count; ++n) {
    const std::string vid = "synthetic" + std::to_string(n);
    auto frame = [&](std::uint32_t i) { return FrameRef{vid, static_cast<double>(i), i}; };
    // selected sequence: frames 0..context_len+k-1; distractors after it
    const std::size_t total = context_len + k;
    const std::size_t gap = uniform_index(rng, context_len + 1);
    MvpSample s;
    s.sample_id = vid;
    s.mask_count = k;
    s.distractor_count = pool_size - k;
    s.gap_position = gap;
    s.seed = rng();
    std::vector<FrameRef> pool;
    for (std::size_t i = 0; i < total; ++i) {
      if (i >= gap && i < gap + k)
        pool.push_back(frame(static_cast<std::uint32_t>(i)));
      else
        s.context.push_back(frame(static_cast<std::uint32_t>(i)));
    }
    for (std::size_t d = 0; d < pool_size - k; ++d)
      pool.push_back(frame(static_cast<std::uint32_t>(total + 1 + 2 * d)));
    shuffle(pool, rng);
    for (std::size_t i = 0; i < pool.size(); ++i)
      s.candidates.push_back({CandidateLabel::from_index(i), pool[i]});
    for (std::size_t i = gap; i < gap + k; ++i)
      for (const auto& c : s.candidates)
        if (c.frame.frame_index == i) s.answer.push_back(c.label);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace mvp::synthetic
