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

// Desk-scale stand-ins for a video LLM: a tabular softmax policy over every
// ordered K-sequence of distinct pool labels, and scripted policies with a
// known skill profile. Both emit "<think>...</think><answer>[...]</answer>"
// text so the full parse-and-score path is exercised.

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "mvp/grpo.hpp"
#include "mvp/random.hpp"
#include "mvp/reward.hpp"
#include "mvp/synthesis.hpp"
#include "mvp/types.hpp"

namespace mvp {

// Ordered K-sequences of distinct labels from a pool of size P, in
// lexicographic order. P!/(P-K)! entries.
class ActionSpace {
 public:
  ActionSpace(std::size_t pool_size, std::size_t k);

  std::size_t pool_size() const { return pool_; }
  std::size_t k() const { return k_; }
  std::size_t size() const { return count_; }
  std::span<const std::uint8_t> action(std::size_t index) const {
    return {flat_.data() + index * k_, k_};
  }
  // Throws mvp::ActionSpaceMismatch for sequences outside the space.
  std::size_t index_of(std::span<const std::uint8_t> action) const;

 private:
  std::size_t pool_;
  std::size_t k_;
  std::size_t count_;
  std::vector<std::uint8_t> flat_;
};

struct Emission {
  std::vector<CandidateLabel> labels;
  std::string text;
  bool well_formed = true;
  std::optional<double> logprob;  // set by differentiable policies
};

// Renders labels as a response; well_formed = false drops the tags.
std::string render_response(const std::vector<CandidateLabel>& labels, bool well_formed);

class SequencePolicy {
 public:
  virtual ~SequencePolicy() = default;
  virtual std::string name() const = 0;
  // Throws mvp::ActionSpaceMismatch if the sample is outside the policy's
  // action space.
  virtual Emission act(const MvpSample& sample, Rng& rng) const = 0;
};

class ScriptedPolicy final : public SequencePolicy {
 public:
  enum class Kind { kOracle, kRandom, kContentOnly, kNoisy };

  ScriptedPolicy(Kind kind, double format_rate = 1.0, double noise_p = 0.0);
  // "oracle", "random", "content_only", "noisy:<p>". Throws mvp::ConfigError.
  static ScriptedPolicy parse(std::string_view spec, double format_rate = 1.0);

  Kind kind() const { return kind_; }
  double format_rate() const { return format_rate_; }
  double noise_p() const { return noise_p_; }

  std::string name() const override;
  Emission act(const MvpSample& sample, Rng& rng) const override;

 private:
  Kind kind_;
  double format_rate_;
  double noise_p_;
};

// How a query's sequence logits are built from the parameter vector.
//   kTabular   one free logit per sequence
//   kFactored  logit(y) = sum_i u[i][y_i] + sum_i w[y_i][y_{i+1}], so
//              position and adjacent-pair scores are shared by every
//              sequence containing them
enum class Parameterization { kTabular, kFactored };

std::string_view to_string(Parameterization p);
// "tabular" | "factored". Throws mvp::ConfigError.
Parameterization parse_parameterization(std::string_view name);

struct QuerySpec {
  std::string query_id;
  std::size_t pool_size = 0;
  std::size_t k = 0;
};

// Softmax over every duplicate-free K-sequence of a query's pool:
// pi(y | q) = softmax(logits_q / temperature). Each query owns an independent
// parameter block; the policy's parameters are the concatenated blocks,
// initialised to zero (uniform). A temperature of 0 makes act() greedy;
// log-probabilities then use temperature 1.
class SoftmaxSequencePolicy final : public SequencePolicy, public DifferentiablePolicy {
 public:
  SoftmaxSequencePolicy(std::vector<QuerySpec> queries, double temperature = 1.0,
                        Parameterization parameterization = Parameterization::kFactored);
  // One query per sample, keyed by sample_id.
  static SoftmaxSequencePolicy for_corpus(
      std::span<const MvpSample> corpus, double temperature = 1.0,
      Parameterization parameterization = Parameterization::kFactored);

  Parameterization parameterization() const { return parameterization_; }
  double temperature() const { return temperature_; }
  void set_temperature(double t);
  const std::vector<QuerySpec>& queries() const { return queries_; }
  const ActionSpace& action_space(const std::string& query_id) const;

  // Unscaled sequence logits, indexed like action_space(query_id).
  std::vector<double> logits(const std::string& query_id) const;
  std::vector<double> probabilities(const std::string& query_id) const;
  std::size_t argmax_action(const std::string& query_id) const;
  // KL(this || other) for one query, computed exactly over the action space.
  double exact_kl(const std::string& query_id, const SoftmaxSequencePolicy& other) const;

  std::string name() const override { return "softmax_sequence"; }
  Emission act(const MvpSample& sample, Rng& rng) const override;

  std::size_t num_params() const override { return params_.size(); }
  std::span<const double> params() const override { return params_; }
  void set_params(std::span<const double> params) override;
  double logprob(const std::string& query_id,
                 std::span<const std::uint8_t> action) const override;
  void accumulate_logprob_grad(const std::string& query_id,
                               std::span<const std::uint8_t> action, double scale,
                               std::span<double> grad) const override;

  nlohmann::ordered_json to_json() const;
  static SoftmaxSequencePolicy from_json(const nlohmann::ordered_json& j);

 private:
  struct Block;
  struct Slot {
    std::size_t offset;
    const Block* block;
  };
  const Slot& slot(const std::string& query_id) const;
  double effective_temperature() const { return temperature_ > 0.0 ? temperature_ : 1.0; }
  void logits(const Slot& s, std::vector<double>& out) const;
  // log-softmax of one query's logits at the effective temperature
  void log_probabilities(const Slot& s, std::vector<double>& out) const;

  std::vector<QuerySpec> queries_;
  double temperature_;
  Parameterization parameterization_;
  std::vector<double> params_;
  std::map<std::string, Slot> slots_;
  std::map<std::pair<std::size_t, std::size_t>, std::shared_ptr<const Block>> blocks_;
};

std::vector<std::uint8_t> to_action(std::span<const CandidateLabel> labels);

// G responses from `policy` for one sample. logprob_old comes from the
// emission when present; rewards and advantages are left for the caller.
RolloutGroup rollout(const SequencePolicy& policy, const MvpSample& sample, std::size_t g,
                     Rng& rng);

// Correctness score of a policy's answer, for quality filtering. Each
// (sample, rollout) pair draws from its own derived stream.
class PolicyRolloutScorer final : public RolloutScorer {
 public:
  PolicyRolloutScorer(const SequencePolicy& policy, RewardConfig reward,
                      std::uint64_t seed)
      : policy_(policy), reward_(reward), seed_(seed) {}
  double score(const MvpSample& sample, std::size_t rollout_index) override;

 private:
  const SequencePolicy& policy_;
  RewardConfig reward_;
  std::uint64_t seed_;
};

}  // namespace mvp
