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

// Turns frame-embedding streams into MVP samples: redundancy-filtered frame
// selection, contiguous masking, vicinity distractors, shuffling, optional
// rollout-based quality filtering, and corpus assembly to per-mask-count
// targets.

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mvp/embedding.hpp"
#include "mvp/random.hpp"
#include "mvp/types.hpp"

namespace mvp {

struct SynthesisConfig {
  double kappa = 0.95;
  std::size_t sequence_len_n = 15;
  std::size_t pool_size = 6;
  // Sampling weight per mask count m. Default mirrors the 10k:25k:15k
  // training mix.
  std::map<std::size_t, double> mask_count_weights{{2, 10.0}, {3, 25.0}, {4, 15.0}};
  double vicinity_window_s = 120.0;
  std::uint64_t rng_seed = 0;
  // When false, the m masked frames are an arbitrary (sorted) subset of the
  // selected sequence instead of one contiguous run.
  bool contiguous_mask = true;

  // Throws mvp::ConfigError on out-of-range values.
  void validate() const;
};

nlohmann::ordered_json to_json(const SynthesisConfig& cfg);
// Missing keys keep their defaults; unknown keys are a ConfigError.
SynthesisConfig synthesis_config_from_json(const nlohmann::ordered_json& j,
                                           SynthesisConfig base = {});

// Dot product of two unit vectors. Throws mvp::DimensionMismatch.
double cosine_similarity(std::span<const float> u, std::span<const float> v);

// Greedy forward scan from `start_pos`: a frame is kept iff its similarity to
// the most recently kept frame is <= kappa. Returns positions in `seq`.
// Throws mvp::InsufficientFrames when fewer than n frames are found.
std::vector<std::size_t> select_deduplicated_positions(const EmbeddingSequence& seq,
                                                       std::size_t start_pos,
                                                       std::size_t n, double kappa);

// Same scan keyed by frame_index. Throws mvp::DataError if `start` is absent.
std::vector<FrameRef> select_deduplicated(const EmbeddingSequence& seq,
                                          std::uint32_t start, std::size_t n,
                                          double kappa);

// Draws m proportionally to the weights. Throws mvp::ConfigError if all
// weights are zero.
std::size_t draw_mask_count(const std::map<std::size_t, double>& weights, Rng& rng);

// Builds one sample from a selected sequence. m is drawn from
// cfg.mask_count_weights. sample_id defaults to "<video_id>@<first frame>";
// seed is left 0 for the caller to fill.
MvpSample build_sample(std::span<const FrameRef> selected, const SynthesisConfig& cfg,
                       Rng& rng, const EmbeddingSequence& all_frames);

// As above with a fixed mask count. Throws mvp::ConfigError if m >= N or
// m >= pool_size, mvp::DistractorShortage if the vicinity is too sparse.
MvpSample build_sample_with_mask(std::span<const FrameRef> selected, std::size_t m,
                                 const SynthesisConfig& cfg, Rng& rng,
                                 const EmbeddingSequence& all_frames);

// Source of per-rollout correctness scores for one sample.
class RolloutScorer {
 public:
  virtual ~RolloutScorer() = default;
  virtual double score(const MvpSample& sample, std::size_t rollout_index) = 0;
};

struct FilterVerdict {
  std::string sample_id;
  std::vector<double> rollout_scores;
  bool kept = false;
};

inline constexpr std::size_t kDefaultFilterRollouts = 10;

// Kept iff any rollout scores > 0. Throws mvp::FilterAborted with the
// scores gathered so far if the scorer throws.
FilterVerdict quality_filter(const MvpSample& sample, RolloutScorer& scorer,
                             std::size_t rollouts = kDefaultFilterRollouts);

struct SynthesisReport {
  std::map<std::size_t, std::size_t> targets;
  std::map<std::size_t, std::size_t> achieved;
  std::size_t videos_total = 0;
  std::vector<std::string> videos_skipped;
  std::size_t starts_considered = 0;
  std::size_t distractor_shortages = 0;
  std::size_t filtered_out = 0;
  bool targets_met = false;
  SynthesisConfig config;
};

nlohmann::ordered_json to_json(const SynthesisReport& report);

struct Corpus {
  std::vector<MvpSample> samples;
  SynthesisReport report;
};

struct SynthesisOptions {
  RolloutScorer* scorer = nullptr;  // quality filter disabled when null
  std::size_t filter_rollouts = kDefaultFilterRollouts;
  std::size_t jobs = 1;
};

// Emits samples until every target count is met or the inputs run out.
// Output is ordered by (video_id, start frame) and depends only on the
// inputs and cfg, never on `jobs`. Throws mvp::EmptyCorpus when nothing
// could be produced.
Corpus synthesize_corpus(std::span<const EmbeddingSequence> inputs,
                         const SynthesisConfig& cfg,
                         const std::map<std::size_t, std::size_t>& target_counts,
                         const SynthesisOptions& options = {});

}  // namespace mvp
