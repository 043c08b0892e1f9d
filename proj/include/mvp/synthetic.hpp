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

// In-process fixtures: embedding streams with known redundancy structure and
// ready-made MVP samples, so nothing here depends on decoded video.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "mvp/embedding.hpp"
#include "mvp/random.hpp"
#include "mvp/types.hpp"

namespace mvp::synthetic {

// Uniform direction on the unit sphere.
std::vector<float> random_unit_vector(std::size_t dim, Rng& rng);

// Unit vector w with w . v == similarity (v must be unit-norm).
std::vector<float> vector_at_similarity(const std::vector<float>& v, double similarity,
                                        Rng& rng);

struct PlantedSequence {
  EmbeddingSequence sequence;
  std::vector<std::uint32_t> distinct_frames;  // frame_index of each planted distinct frame
};

// `distinct` random directions, each followed by `copies` near-duplicates at
// `duplicate_similarity`. Frame i sits at timestamp i seconds.
PlantedSequence planted_duplicates(const std::string& video_id, std::size_t distinct,
                                   std::size_t copies, std::size_t dim,
                                   double duplicate_similarity, std::uint64_t seed);

struct VideoOptions {
  std::size_t frames = 240;
  std::size_t dim = 64;
  double duplicate_prob = 0.3;         // chance a frame repeats its predecessor
  double duplicate_similarity = 0.985;
};

// A 1 FPS stream where runs of near-identical frames alternate with scene
// changes.
EmbeddingSequence video(const std::string& video_id, std::uint64_t seed,
                        const VideoOptions& options = {});

std::vector<EmbeddingSequence> video_corpus(std::size_t count, std::uint64_t seed,
                                            const VideoOptions& options = {});

// Valid samples with the given pool size and mask count, built directly from
// frame references.
std::vector<MvpSample> samples(std::size_t count, std::size_t pool_size, std::size_t k,
                               std::uint64_t seed, std::size_t context_len = 15);

}  // namespace mvp::synthetic
