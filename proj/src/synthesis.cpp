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

#include "mvp/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "mvp/error.hpp"
#include "mvp/kernels.hpp"
#include "mvp/parallel.hpp"

namespace mvp {

void SynthesisConfig::validate() const {
  if (!(kappa >= 0.0 && kappa <= 1.0))
    throw ConfigError("kappa must be in [0, 1], got " + std::to_string(kappa));
  if (sequence_len_n == 0) throw ConfigError("sequence_len_n must be positive");
  if (pool_size == 0 || pool_size > CandidateLabel::kAlphabetSize)
    throw ConfigError("pool_size must be in [1, 26]");
  if (!(vicinity_window_s >= 0.0)) throw ConfigError("vicinity_window_s must be >= 0");
  bool any = false;
  for (auto [m, w] : mask_count_weights) {
    if (!(w >= 0.0) || !std::isfinite(w))
      throw ConfigError("mask count weight for m=" + std::to_string(m) + " is invalid");
    if (w == 0.0) continue;
    any = true;
    if (m == 0) throw ConfigError("mask count 0 has nonzero weight");
    if (m >= sequence_len_n)
      throw ConfigError("mask count " + std::to_string(m) +
                        " must be below sequence_len_n " + std::to_string(sequence_len_n));
    if (m >= pool_size)
      throw ConfigError("mask count " + std::to_string(m) + " must be below pool_size " +
                        std::to_string(pool_size));
  }
  if (!any) throw ConfigError("mask_count_weights has no positive weight");
}

nlohmann::ordered_json to_json(const SynthesisConfig& cfg) {
  nlohmann::ordered_json weights = nlohmann::ordered_json::object();
  for (auto [m, w] : cfg.mask_count_weights) weights[std::to_string(m)] = w;
  return {{"kappa", cfg.kappa},
          {"sequence_len_n", cfg.sequence_len_n},
          {"pool_size", cfg.pool_size},
          {"mask_count_weights", std::move(weights)},
          {"vicinity_window_s", cfg.vicinity_window_s},
          {"rng_seed", cfg.rng_seed},
          {"contiguous_mask", cfg.contiguous_mask}};
}

SynthesisConfig synthesis_config_from_json(const nlohmann::ordered_json& j,
                                           SynthesisConfig cfg) {
  if (!j.is_object()) throw ConfigError("synthesis config must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "kappa") {
        cfg.kappa = value.get<double>();
      } else if (key == "sequence_len_n") {
        cfg.sequence_len_n = value.get<std::size_t>();
      } else if (key == "pool_size") {
        cfg.pool_size = value.get<std::size_t>();
      } else if (key == "mask_count_weights") {
        cfg.mask_count_weights.clear();
        for (const auto& [m, w] : value.items())
          cfg.mask_count_weights[std::stoul(m)] = w.get<double>();
      } else if (key == "vicinity_window_s") {
        cfg.vicinity_window_s = value.get<double>();
      } else if (key == "rng_seed") {
        cfg.rng_seed = value.get<std::uint64_t>();
      } else if (key == "contiguous_mask") {
        cfg.contiguous_mask = value.get<bool>();
      } else {
        throw ConfigError("unknown synthesis config key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("synthesis config: ") + e.what());
  } catch (const std::invalid_argument&) {
    throw ConfigError("synthesis config: mask_count_weights keys must be integers");
  }
  return cfg;
}

double cosine_similarity(std::span<const float> u, std::span<const float> v) {
  if (u.size() != v.size()) throw DimensionMismatch(u.size(), v.size());
  return kernels::dot(u, v);
}

std::vector<std::size_t> select_deduplicated_positions(const EmbeddingSequence& seq,
                                                       std::size_t start_pos,
                                                       std::size_t n, double kappa) {
  if (start_pos >= seq.size())
    throw DataError("start position " + std::to_string(start_pos) + " out of range");
  if (n == 0) throw ConfigError("selection length must be >= 1");
  if (!(kappa >= 0.0 && kappa <= 1.0))
    throw ConfigError("kappa must be in [0, 1], got " + std::to_string(kappa));
  std::vector<std::size_t> picked;
  picked.reserve(n);
  picked.push_back(start_pos);
  const auto& k = kernels::active();
  std::size_t current = start_pos;
  for (std::size_t next = start_pos + 1; next < seq.size() && picked.size() < n;
       ++next) {
    const double s = k.dot_f32(seq.vector(current).data(), seq.vector(next).data(),
                               seq.dim());
    if (s > kappa) continue;
    picked.push_back(next);
    current = next;
  }
  if (picked.size() < n) throw InsufficientFrames(picked.size(), n);
  return picked;
}

std::vector<FrameRef> select_deduplicated(const EmbeddingSequence& seq,
                                          std::uint32_t start, std::size_t n,
                                          double kappa) {
  const std::size_t pos = seq.position_of(start);
  if (pos == seq.size())
    throw DataError(seq.video_id() + ": start frame " + std::to_string(start) +
                    " not present");
  std::vector<FrameRef> out;
  for (std::size_t p : select_deduplicated_positions(seq, pos, n, kappa))
    out.push_back(seq.frame_ref(p));
  return out;
}

std::size_t draw_mask_count(const std::map<std::size_t, double>& weights, Rng& rng) {
  std::vector<std::size_t> keys;
  std::vector<double> w;
  for (auto [m, weight] : weights) {
    keys.push_back(m);
    w.push_back(weight);
  }
  const std::size_t i = weighted_index(w, rng);
  if (i == w.size()) throw ConfigError("mask_count_weights has no positive weight");
  return keys[i];
}

MvpSample build_sample(std::span<const FrameRef> selected, const SynthesisConfig& cfg,
                       Rng& rng, const EmbeddingSequence& all_frames) {
  const std::size_t m = draw_mask_count(cfg.mask_count_weights, rng);
  return build_sample_with_mask(selected, m, cfg, rng, all_frames);
}

MvpSample build_sample_with_mask(std::span<const FrameRef> selected, std::size_t m,
                                 const SynthesisConfig& cfg, Rng& rng,
                                 const EmbeddingSequence& all_frames) {
  const std::size_t n = selected.size();
  if (n == 0) throw ConfigError("empty selected sequence");
  if (m == 0 || m >= n)
    throw ConfigError("mask count " + std::to_string(m) +
                      " must be in [1, N) with N = " + std::to_string(n));
  if (m >= cfg.pool_size)
    throw ConfigError("mask count " + std::to_string(m) + " exceeds pool_size " +
                      std::to_string(cfg.pool_size));
  const std::size_t distractors_needed = cfg.pool_size - m;

  // Masked positions within `selected`.
  std::vector<std::size_t> masked;
  if (cfg.contiguous_mask) {
    const std::size_t run_start = uniform_index(rng, n - m + 1);
    for (std::size_t i = 0; i < m; ++i) masked.push_back(run_start + i);
  } else {
    masked = sample_without_replacement(n, m, rng);
    std::sort(masked.begin(), masked.end());
  }

  // Vicinity: strictly outside [first, last] and within the window.
  const FrameRef& first = selected.front();
  const FrameRef& last = selected.back();
  std::vector<std::size_t> vicinity;
  for (std::size_t p = 0; p < all_frames.size(); ++p) {
    const auto& meta = all_frames.meta(p);
    const bool before = meta.frame_index < first.frame_index &&
                        first.timestamp_s - meta.timestamp_s <= cfg.vicinity_window_s;
    const bool after = meta.frame_index > last.frame_index &&
                       meta.timestamp_s - last.timestamp_s <= cfg.vicinity_window_s;
    if (!before && !after) continue;
    const bool in_selected =
        std::any_of(selected.begin(), selected.end(),
                    [&](const FrameRef& f) { return f.frame_index == meta.frame_index; });
    if (!in_selected) vicinity.push_back(p);
  }
  if (vicinity.size() < distractors_needed)
    throw DistractorShortage(vicinity.size(), distractors_needed);

  struct PoolEntry {
    FrameRef frame;
    bool target;
  };
  std::vector<PoolEntry> pool;
  for (std::size_t p : masked) pool.push_back({selected[p], true});
  for (std::size_t i : sample_without_replacement(vicinity.size(), distractors_needed, rng))
    pool.push_back({all_frames.frame_ref(vicinity[i]), false});
  shuffle(pool, rng);

  MvpSample s;
  s.sample_id = first.video_id + "@" + std::to_string(first.frame_index);
  s.mask_count = m;
  s.distractor_count = distractors_needed;
  s.gap_position = masked.front();
  for (std::size_t i = 0, j = 0; i < n; ++i) {
    if (j < masked.size() && masked[j] == i) {
      ++j;
      continue;
    }
    s.context.push_back(selected[i]);
  }
  for (std::size_t i = 0; i < pool.size(); ++i)
    s.candidates.push_back({CandidateLabel::from_index(i), pool[i].frame});
  // masked is ascending, so this walks the targets in temporal order
  for (std::size_t p : masked) {
    for (const auto& c : s.candidates) {
      if (c.frame == selected[p]) {
        s.answer.push_back(c.label);
        break;
      }
    }
  }
  return s;
}

FilterVerdict quality_filter(const MvpSample& sample, RolloutScorer& scorer,
                             std::size_t rollouts) {
  FilterVerdict v;
  v.sample_id = sample.sample_id;
  v.rollout_scores.reserve(rollouts);
  for (std::size_t r = 0; r < rollouts; ++r) {
    try {
      v.rollout_scores.push_back(scorer.score(sample, r));
    } catch (const std::exception& e) {
      throw FilterAborted(e.what(), v.rollout_scores);
    }
  }
  v.kept = std::any_of(v.rollout_scores.begin(), v.rollout_scores.end(),
                       [](double s) { return s > 0.0; });
  return v;
}

nlohmann::ordered_json to_json(const SynthesisReport& r) {
  auto counts = [](const std::map<std::size_t, std::size_t>& m) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (auto [k, v] : m) j[std::to_string(k)] = v;
    return j;
  };
  std::size_t total = 0;
  for (auto [m, c] : r.achieved) total += c;
  return {{"samples_total", total},
          {"targets", counts(r.targets)},
          {"achieved", counts(r.achieved)},
          {"targets_met", r.targets_met},
          {"videos_total", r.videos_total},
          {"videos_skipped", r.videos_skipped},
          {"starts_considered", r.starts_considered},
          {"distractor_shortages", r.distractor_shortages},
          {"filtered_out", r.filtered_out},
          {"config", to_json(r.config)}};
}

namespace {

struct VideoPlan {
  // Start positions whose de-duplicated selection succeeded, in draw order.
  std::vector<std::size_t> starts;
  std::vector<std::vector<std::size_t>> selections;
  std::size_t cursor = 0;
};

}  // namespace

Corpus synthesize_corpus(std::span<const EmbeddingSequence> inputs,
                         const SynthesisConfig& cfg,
                         const std::map<std::size_t, std::size_t>& target_counts,
                         const SynthesisOptions& options) {
  cfg.validate();
  if (inputs.empty()) throw EmptyCorpus("no input embedding sequences");
  std::size_t wanted = 0;
  for (auto [m, count] : target_counts) {
    if (count == 0) continue;
    if (m == 0 || m >= cfg.sequence_len_n || m >= cfg.pool_size)
      throw ConfigError("target mask count " + std::to_string(m) +
                        " is incompatible with N and pool_size");
    wanted += count;
  }
  if (wanted == 0) throw ConfigError("target counts are all zero");

  // Order videos by id so the result is independent of input order.
  std::vector<std::size_t> order(inputs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return inputs[a].video_id() < inputs[b].video_id();
  });

  std::vector<VideoPlan> plans(inputs.size());
  parallel_for(order.size(), options.jobs, [&](std::size_t k) {
    const auto& seq = inputs[order[k]];
    auto& plan = plans[k];
    for (std::size_t p = 0; p < seq.size(); ++p) {
      try {
        plan.selections.push_back(
            select_deduplicated_positions(seq, p, cfg.sequence_len_n, cfg.kappa));
        plan.starts.push_back(p);
      } catch (const InsufficientFrames&) {
        // too few distinct frames after this start
      }
    }
    Rng rng(derive_seed(cfg.rng_seed, seq.video_id()));
    std::vector<std::size_t> perm(plan.starts.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    shuffle(perm, rng);
    std::vector<std::size_t> starts;
    std::vector<std::vector<std::size_t>> selections;
    for (std::size_t i : perm) {
      starts.push_back(plan.starts[i]);
      selections.push_back(std::move(plan.selections[i]));
    }
    plan.starts = std::move(starts);
    plan.selections = std::move(selections);
  });

  Corpus corpus;
  auto& report = corpus.report;
  report.config = cfg;
  report.videos_total = inputs.size();
  for (auto [m, count] : target_counts)
    if (count > 0) {
      report.targets[m] = count;
      report.achieved[m] = 0;
    }
  for (std::size_t k = 0; k < order.size(); ++k)
    if (plans[k].starts.empty()) report.videos_skipped.push_back(inputs[order[k]].video_id());

  struct Emitted {
    std::size_t video_rank;
    std::uint32_t start_frame;
    MvpSample sample;
  };
  std::vector<Emitted> emitted;
  Rng mask_rng(derive_seed(cfg.rng_seed, "mask-count"));
  std::size_t remaining_total = wanted;

  for (bool progressed = true; remaining_total > 0 && progressed;) {
    progressed = false;
    for (std::size_t k = 0; k < order.size() && remaining_total > 0; ++k) {
      auto& plan = plans[k];
      if (plan.cursor >= plan.starts.size()) continue;
      progressed = true;
      const std::size_t idx = plan.cursor++;
      const auto& seq = inputs[order[k]];
      ++report.starts_considered;

      std::vector<std::size_t> keys;
      std::vector<double> weights;
      bool any_weight = false;
      for (auto [m, target] : report.targets) {
        if (report.achieved[m] >= target) continue;
        keys.push_back(m);
        auto it = cfg.mask_count_weights.find(m);
        weights.push_back(it == cfg.mask_count_weights.end() ? 0.0 : it->second);
        any_weight = any_weight || weights.back() > 0.0;
      }
      if (!any_weight) std::fill(weights.begin(), weights.end(), 1.0);
      const std::size_t m = keys[weighted_index(weights, mask_rng)];

      std::vector<FrameRef> selected;
      for (std::size_t p : plan.selections[idx]) selected.push_back(seq.frame_ref(p));
      const std::uint32_t start_frame = seq.meta(plan.starts[idx]).frame_index;
      const std::uint64_t sample_seed = derive_seed(cfg.rng_seed, seq.video_id(), start_frame);
      Rng rng(sample_seed);
      MvpSample sample;
      try {
        sample = build_sample_with_mask(selected, m, cfg, rng, seq);
      } catch (const DistractorShortage&) {
        ++report.distractor_shortages;
        continue;
      }
      sample.seed = sample_seed;
      sample.sample_id = seq.video_id() + "@" + std::to_string(start_frame);
      if (options.scorer != nullptr &&
          !quality_filter(sample, *options.scorer, options.filter_rollouts).kept) {
        ++report.filtered_out;
        continue;
      }
      ++report.achieved[m];
      --remaining_total;
      emitted.push_back({k, start_frame, std::move(sample)});
    }
  }

  report.targets_met = remaining_total == 0;
  if (emitted.empty())
    throw EmptyCorpus("no samples could be produced from " + std::to_string(inputs.size()) +
                      " video(s)");
  std::sort(emitted.begin(), emitted.end(), [](const Emitted& a, const Emitted& b) {
    return std::tie(a.video_rank, a.start_frame) < std::tie(b.video_rank, b.start_frame);
  });
  corpus.samples.reserve(emitted.size());
  for (auto& e : emitted) corpus.samples.push_back(std::move(e.sample));
  return corpus;
}

}  // namespace mvp
