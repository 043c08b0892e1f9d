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

// Group Relative Policy Optimization over sequence-level log-probabilities.
//
//   A_i = (r_i - mean(r)) / (std(r) + adv_eps)          population std
//   rho_i = exp(logp_new_i - logp_old_i)
//   L_i = min(rho_i A_i, clip(rho_i, 1 - clip_eps, 1 + clip_eps) A_i)
//   k3_i = exp(logp_ref_i - logp_new_i) - (logp_ref_i - logp_new_i) - 1
//   J = (1/G) sum_i (L_i - kl_coeff * k3_i)
//
// A batch objective is the mean of the per-group J.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace mvp {

struct GrpoConfig {
  std::size_t group_size_g = 5;
  double clip_eps = 0.2;
  double kl_coeff = 0.01;
  double adv_eps = 1e-6;
  double learning_rate = 0.5;
  double temperature = 1.0;

  void validate() const;
};

nlohmann::ordered_json to_json(const GrpoConfig& cfg);

// One sampled output. `action` is the label-index sequence.
struct RolloutOutput {
  std::vector<std::uint8_t> action;
  std::string response;
  double logprob_old = 0.0;
  double logprob_ref = 0.0;
  double reward = 0.0;
  double advantage = 0.0;
};

struct RolloutGroup {
  std::string query_id;
  std::vector<RolloutOutput> outputs;

  std::vector<double> rewards() const;
  // Recomputes every output's advantage from its reward.
  void assign_advantages(double adv_eps);
};

// Throws mvp::GroupSizeError when fewer than two rewards are given.
std::vector<double> compute_advantages(std::span<const double> rewards, double adv_eps);

// Throws mvp::NumericInputError on non-finite input.
double clipped_surrogate(double logprob_new, double logprob_old, double advantage,
                         double clip_eps);
// d clipped_surrogate / d logprob_new (zero where the clipped branch is active).
double clipped_surrogate_grad(double logprob_new, double logprob_old, double advantage,
                              double clip_eps);

// k3 estimator of KL(pi_new || pi_ref) for one sample drawn from pi_new.
double kl_penalty(double logprob_new, double logprob_ref);
double kl_penalty_grad(double logprob_new, double logprob_ref);

// Throws mvp::LengthMismatch if sizes differ.
double group_objective(const RolloutGroup& group, std::span<const double> logprobs_new,
                       const GrpoConfig& cfg);
// dJ/d logprob_new_i for each output.
std::vector<double> group_objective_grad(const RolloutGroup& group,
                                         std::span<const double> logprobs_new,
                                         const GrpoConfig& cfg);

// Any policy that can score an action and differentiate that score.
class DifferentiablePolicy {
 public:
  virtual ~DifferentiablePolicy() = default;
  virtual std::size_t num_params() const = 0;
  virtual std::span<const double> params() const = 0;
  virtual void set_params(std::span<const double> params) = 0;
  virtual double logprob(const std::string& query_id,
                         std::span<const std::uint8_t> action) const = 0;
  // grad += scale * d logprob / d params
  virtual void accumulate_logprob_grad(const std::string& query_id,
                                       std::span<const std::uint8_t> action, double scale,
                                       std::span<double> grad) const = 0;
};

// Mean over groups of group_objective at the policy's current parameters.
double batch_objective(const DifferentiablePolicy& policy,
                       std::span<const RolloutGroup> batch, const GrpoConfig& cfg);
std::vector<double> batch_objective_grad(const DifferentiablePolicy& policy,
                                         std::span<const RolloutGroup> batch,
                                         const GrpoConfig& cfg);

struct StepReport {
  double objective = 0.0;
  double mean_reward = 0.0;
  double mean_kl = 0.0;
  double grad_norm = 0.0;
};

// One gradient-ascent step on the batch objective. Throws mvp::DivergedStep
// naming the first group whose gradient is non-finite; parameters are left
// untouched in that case.
StepReport grpo_step(DifferentiablePolicy& policy, std::span<const RolloutGroup> batch,
                     const GrpoConfig& cfg);

}  // namespace mvp
