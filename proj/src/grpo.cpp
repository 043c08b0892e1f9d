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

#include "mvp/grpo.hpp"

#include <algorithm>
#include <cmath>

#include "mvp/error.hpp"
#include "mvp/kernels.hpp"

namespace mvp {

void GrpoConfig::validate() const {
  if (group_size_g < 2) throw GroupSizeError(group_size_g);
  if (!(clip_eps > 0.0)) throw ConfigError("clip_eps must be > 0");
  if (!(kl_coeff >= 0.0)) throw ConfigError("kl_coeff must be >= 0");
  if (!(adv_eps > 0.0)) throw ConfigError("adv_eps must be > 0");
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate))
    throw ConfigError("learning_rate must be a finite value >= 0");
  if (!(temperature >= 0.0)) throw ConfigError("temperature must be >= 0");
}

nlohmann::ordered_json to_json(const GrpoConfig& cfg) {
  return {{"group_size_g", cfg.group_size_g}, {"clip_eps", cfg.clip_eps},
          {"kl_coeff", cfg.kl_coeff},         {"adv_eps", cfg.adv_eps},
          {"learning_rate", cfg.learning_rate}, {"temperature", cfg.temperature}};
}

std::vector<double> RolloutGroup::rewards() const {
  std::vector<double> r;
  r.reserve(outputs.size());
  for (const auto& o : outputs) r.push_back(o.reward);
  return r;
}

void RolloutGroup::assign_advantages(double adv_eps) {
  const auto adv = compute_advantages(rewards(), adv_eps);
  for (std::size_t i = 0; i < outputs.size(); ++i) outputs[i].advantage = adv[i];
}

std::vector<double> compute_advantages(std::span<const double> rewards, double adv_eps) {
  if (rewards.size() < 2) throw GroupSizeError(rewards.size());
  // a constant group carries no signal; skip the mean so rounding cannot
  // leak through the eps-sized denominator
  if (std::all_of(rewards.begin(), rewards.end(), [&](double r) { return r == rewards[0]; }))
    return std::vector<double>(rewards.size(), 0.0);
  const double g = static_cast<double>(rewards.size());
  double mean = 0.0;
  for (double r : rewards) mean += r;
  mean /= g;
  double var = 0.0;
  for (double r : rewards) var += (r - mean) * (r - mean);
  const double denom = std::sqrt(var / g) + adv_eps;
  std::vector<double> out;
  out.reserve(rewards.size());
  for (double r : rewards) out.push_back((r - mean) / denom);
  return out;
}

namespace {

void require_finite(std::initializer_list<double> values, const char* what) {
  for (double v : values)
    if (!std::isfinite(v)) throw NumericInputError(std::string(what) + ": non-finite input");
}

}  // namespace

double clipped_surrogate(double logprob_new, double logprob_old, double advantage,
                         double clip_eps) {
  require_finite({logprob_new, logprob_old, advantage}, "clipped_surrogate");
  const double rho = std::exp(logprob_new - logprob_old);
  const double clipped = std::clamp(rho, 1.0 - clip_eps, 1.0 + clip_eps);
  return std::min(rho * advantage, clipped * advantage);
}

double clipped_surrogate_grad(double logprob_new, double logprob_old, double advantage,
                              double clip_eps) {
  require_finite({logprob_new, logprob_old, advantage}, "clipped_surrogate");
  const double rho = std::exp(logprob_new - logprob_old);
  const double clipped = std::clamp(rho, 1.0 - clip_eps, 1.0 + clip_eps);
  // the unclipped branch is selected on ties
  return rho * advantage <= clipped * advantage ? rho * advantage : 0.0;
}

double kl_penalty(double logprob_new, double logprob_ref) {
  require_finite({logprob_new, logprob_ref}, "kl_penalty");
  const double d = logprob_ref - logprob_new;
  // expm1 keeps the estimator exactly >= 0 near d = 0
  return std::max(0.0, std::expm1(d) - d);
}

double kl_penalty_grad(double logprob_new, double logprob_ref) {
  require_finite({logprob_new, logprob_ref}, "kl_penalty");
  return -std::expm1(logprob_ref - logprob_new);
}

double group_objective(const RolloutGroup& group, std::span<const double> logprobs_new,
                       const GrpoConfig& cfg) {
  if (logprobs_new.size() != group.outputs.size())
    throw LengthMismatch("group '" + group.query_id + "' has " +
                         std::to_string(group.outputs.size()) + " outputs but " +
                         std::to_string(logprobs_new.size()) + " log-probabilities");
  if (group.outputs.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < group.outputs.size(); ++i) {
    const auto& o = group.outputs[i];
    sum += clipped_surrogate(logprobs_new[i], o.logprob_old, o.advantage, cfg.clip_eps) -
           cfg.kl_coeff * kl_penalty(logprobs_new[i], o.logprob_ref);
  }
  return sum / static_cast<double>(group.outputs.size());
}

std::vector<double> group_objective_grad(const RolloutGroup& group,
                                         std::span<const double> logprobs_new,
                                         const GrpoConfig& cfg) {
  if (logprobs_new.size() != group.outputs.size())
    throw LengthMismatch("group '" + group.query_id + "': log-probability count mismatch");
  std::vector<double> out(group.outputs.size());
  const double inv_g = 1.0 / static_cast<double>(std::max<std::size_t>(1, out.size()));
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& o = group.outputs[i];
    out[i] = inv_g * (clipped_surrogate_grad(logprobs_new[i], o.logprob_old, o.advantage,
                                             cfg.clip_eps) -
                      cfg.kl_coeff * kl_penalty_grad(logprobs_new[i], o.logprob_ref));
  }
  return out;
}

namespace {

std::vector<double> current_logprobs(const DifferentiablePolicy& policy,
                                     const RolloutGroup& group) {
  std::vector<double> lp;
  lp.reserve(group.outputs.size());
  for (const auto& o : group.outputs) lp.push_back(policy.logprob(group.query_id, o.action));
  return lp;
}

}  // namespace

double batch_objective(const DifferentiablePolicy& policy,
                       std::span<const RolloutGroup> batch, const GrpoConfig& cfg) {
  if (batch.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& group : batch)
    sum += group_objective(group, current_logprobs(policy, group), cfg);
  return sum / static_cast<double>(batch.size());
}

namespace {

// Gradient of the batch objective plus the id of the first group whose
// contribution is non-finite (empty when all are finite).
std::vector<double> gradient_checked(const DifferentiablePolicy& policy,
                                     std::span<const RolloutGroup> batch,
                                     const GrpoConfig& cfg, std::string* bad_group) {
  std::vector<double> grad(policy.num_params(), 0.0);
  std::vector<double> group_grad(policy.num_params());
  const double inv_b = batch.empty() ? 0.0 : 1.0 / static_cast<double>(batch.size());
  // summation order is fixed by group index
  for (const auto& group : batch) {
    std::fill(group_grad.begin(), group_grad.end(), 0.0);
    const auto lp = current_logprobs(policy, group);
    const auto dj = group_objective_grad(group, lp, cfg);
    for (std::size_t i = 0; i < dj.size(); ++i)
      if (dj[i] != 0.0)
        policy.accumulate_logprob_grad(group.query_id, group.outputs[i].action, dj[i] * inv_b,
                                       group_grad);
    const bool finite = std::all_of(group_grad.begin(), group_grad.end(),
                                    [](double v) { return std::isfinite(v); });
    if (!finite && bad_group != nullptr && bad_group->empty()) *bad_group = group.query_id;
    kernels::axpy(1.0, group_grad, grad);
  }
  return grad;
}

}  // namespace

std::vector<double> batch_objective_grad(const DifferentiablePolicy& policy,
                                         std::span<const RolloutGroup> batch,
                                         const GrpoConfig& cfg) {
  return gradient_checked(policy, batch, cfg, nullptr);
}

StepReport grpo_step(DifferentiablePolicy& policy, std::span<const RolloutGroup> batch,
                     const GrpoConfig& cfg) {
  StepReport report;
  std::size_t outputs = 0;
  for (const auto& group : batch) {
    const auto lp = current_logprobs(policy, group);
    report.objective += group_objective(group, lp, cfg);
    for (std::size_t i = 0; i < group.outputs.size(); ++i) {
      report.mean_reward += group.outputs[i].reward;
      report.mean_kl += kl_penalty(lp[i], group.outputs[i].logprob_ref);
      ++outputs;
    }
  }
  if (!batch.empty()) report.objective /= static_cast<double>(batch.size());
  if (outputs > 0) {
    report.mean_reward /= static_cast<double>(outputs);
    report.mean_kl /= static_cast<double>(outputs);
  }

  std::string bad_group;
  const auto grad = gradient_checked(policy, batch, cfg, &bad_group);
  if (!bad_group.empty()) throw DivergedStep(bad_group);
  report.grad_norm = std::sqrt(kernels::dot(std::span<const double>(grad), grad));

  std::vector<double> params(policy.params().begin(), policy.params().end());
  kernels::axpy(cfg.learning_rate, grad, params);
  policy.set_params(params);
  return report;
}

}  // namespace mvp
