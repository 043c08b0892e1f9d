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

// Simulated GRPO training (rollout -> reward -> advantages -> step) and the
// accuracy / format-rate evaluator.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mvp/grpo.hpp"
#include "mvp/policy.hpp"
#include "mvp/reward.hpp"
#include "mvp/types.hpp"

namespace mvp {

struct TrainLogEntry {
  std::size_t step = 0;
  double mean_reward = 0.0;     // mean r_total over every rollout of the step
  double mean_r_correct = 0.0;  // mean r_correct over the same rollouts
  double mean_kl = 0.0;
  double grad_norm = 0.0;
  double objective = 0.0;
  double wall_ms = 0.0;
};

struct TrainOptions {
  std::size_t steps = 300;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  Parameterization parameterization = Parameterization::kFactored;
  // wall_ms is written as 0 when false, making logs byte-reproducible.
  bool record_wall_time = false;
};

struct TrainResult {
  SoftmaxSequencePolicy policy;
  std::vector<TrainLogEntry> log;
  // First step whose mean_r_correct reached the threshold, if any.
  std::optional<std::size_t> first_step_reaching(double threshold) const;
};

// The reference policy is a frozen copy of the initial (uniform) policy.
// Throws mvp::EmptyCorpus, and mvp::DivergedStep with the step index set.
TrainResult train_sim(std::span<const MvpSample> corpus, const GrpoConfig& grpo,
                      const RewardConfig& reward, const TrainOptions& options);

nlohmann::ordered_json train_log_header(const GrpoConfig& grpo, const RewardConfig& reward,
                                        const TrainOptions& options, std::size_t corpus_size);
nlohmann::ordered_json to_json(const TrainLogEntry& e);
void write_train_log(std::ostream& out, const nlohmann::ordered_json& header,
                     std::span<const TrainLogEntry> log);
// Skips header lines. Throws mvp::DataError on malformed entries.
std::vector<TrainLogEntry> read_train_log(std::istream& in);
void write_train_log_csv(std::ostream& out, std::span<const TrainLogEntry> log);

struct SampleEvaluation {
  std::string sample_id;
  std::string response;
  double accuracy = 0.0;  // exact positions / K
  bool sequence_exact = false;
  bool format_ok = false;
  RewardBreakdown breakdown;
};

struct EvalReport {
  double avg_accuracy = 0.0;           // headline: per-position exact-match fraction
  double avg_sequence_accuracy = 0.0;  // whole sequence equal to the answer
  double avg_format_rate = 0.0;
  double avg_r_correct = 0.0;
  double avg_r_total = 0.0;
  std::vector<SampleEvaluation> samples;
};

// One response per sample. Scripted policies draw from a stream derived from
// (seed, sample_id); a softmax policy at temperature 0 is fully deterministic.
// Throws mvp::EmptyCorpus.
EvalReport evaluate(const SequencePolicy& policy, std::span<const MvpSample> corpus,
                    const RewardConfig& reward, std::uint64_t seed, std::size_t jobs = 1);

nlohmann::ordered_json to_json(const EvalReport& report, bool include_samples = true);

}  // namespace mvp
