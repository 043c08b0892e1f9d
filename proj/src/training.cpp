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

#include "mvp/training.hpp"

#include <chrono>
#include <istream>
#include <ostream>

#include "mvp/error.hpp"
#include "mvp/parallel.hpp"

namespace mvp {

std::optional<std::size_t> TrainResult::first_step_reaching(double threshold) const {
  for (const auto& e : log)
    if (e.mean_r_correct >= threshold) return e.step;
  return std::nullopt;
}

namespace {

void require_valid(std::span<const MvpSample> corpus) {
  if (corpus.empty()) throw EmptyCorpus("corpus has no samples");
  for (const auto& s : corpus) {
    auto report = validate_sample(s);
    if (!report.empty())
      throw DataError("sample '" + s.sample_id + "' violates " + report.front().invariant +
                      ": " + report.front().detail);
  }
}

}  // namespace

TrainResult train_sim(std::span<const MvpSample> corpus, const GrpoConfig& grpo,
                      const RewardConfig& reward, const TrainOptions& options) {
  grpo.validate();
  reward.validate();
  require_valid(corpus);

  TrainResult result{SoftmaxSequencePolicy::for_corpus(corpus, grpo.temperature, options.parameterization), {}};
  auto& policy = result.policy;
  const SoftmaxSequencePolicy reference = policy;
  result.log.reserve(options.steps);

  std::vector<RolloutGroup> groups(corpus.size());
  std::vector<double> correct_sums(corpus.size());
  for (std::size_t step = 1; step <= options.steps; ++step) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::uint64_t step_seed = derive_seed(options.seed, step);
    parallel_for(corpus.size(), options.jobs, [&](std::size_t i) {
      Rng rng(derive_seed(step_seed, i));
      auto& group = groups[i];
      group = rollout(policy, corpus[i], grpo.group_size_g, rng);
      correct_sums[i] = 0.0;
      for (auto& out : group.outputs) {
        out.logprob_ref = reference.logprob(group.query_id, out.action);
        const auto b = total_reward(out.response, corpus[i].answer, reward);
        out.reward = b.r_total;
        correct_sums[i] += b.r_correct;
      }
      group.assign_advantages(grpo.adv_eps);
    });

    StepReport report;
    try {
      report = grpo_step(policy, groups, grpo);
    } catch (const DivergedStep& e) {
      throw DivergedStep(e.group_id, step);
    }

    TrainLogEntry entry;
    entry.step = step;
    entry.mean_reward = report.mean_reward;
    double correct = 0.0;
    for (double c : correct_sums) correct += c;
    entry.mean_r_correct =
        correct / static_cast<double>(corpus.size() * grpo.group_size_g);
    entry.mean_kl = report.mean_kl;
    entry.grad_norm = report.grad_norm;
    entry.objective = report.objective;
    if (options.record_wall_time)
      entry.wall_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
    result.log.push_back(entry);
  }
  return result;
}

nlohmann::ordered_json train_log_header(const GrpoConfig& grpo, const RewardConfig& reward,
                                        const TrainOptions& options,
                                        std::size_t corpus_size) {
  return {{"header",
           {{"reference_policy", "frozen_at_init"},
            {"policy", "softmax_sequence"},
            {"parameterization", to_string(options.parameterization)},
            {"corpus_size", corpus_size},
            {"steps", options.steps},
            {"seed", options.seed},
            {"grpo", to_json(grpo)},
            {"reward", to_json(reward)}}}};
}

nlohmann::ordered_json to_json(const TrainLogEntry& e) {
  return {{"step", e.step},
          {"mean_reward", e.mean_reward},
          {"mean_r_correct", e.mean_r_correct},
          {"mean_kl", e.mean_kl},
          {"grad_norm", e.grad_norm},
          {"objective", e.objective},
          {"wall_ms", e.wall_ms}};
}

void write_train_log(std::ostream& out, const nlohmann::ordered_json& header,
                     std::span<const TrainLogEntry> log) {
  out << header.dump() << '\n';
  for (const auto& e : log) out << to_json(e).dump() << '\n';
}

std::vector<TrainLogEntry> read_train_log(std::istream& in) {
  std::vector<TrainLogEntry> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      if (j.contains("header")) continue;
      TrainLogEntry e;
      e.step = j.at("step").get<std::size_t>();
      e.mean_reward = j.at("mean_reward").get<double>();
      e.mean_kl = j.at("mean_kl").get<double>();
      e.grad_norm = j.at("grad_norm").get<double>();
      e.wall_ms = j.at("wall_ms").get<double>();
      e.mean_r_correct = j.value("mean_r_correct", 0.0);
      e.objective = j.value("objective", 0.0);
      out.push_back(e);
    } catch (const nlohmann::json::exception& e) {
      throw DataError("training log line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

void write_train_log_csv(std::ostream& out, std::span<const TrainLogEntry> log) {
  out << "step,mean_reward,mean_r_correct,mean_kl,grad_norm,objective,wall_ms\n";
  for (const auto& e : log) {
    // reuse JSON number formatting for shortest round-trip output
    auto num = [](double v) { return nlohmann::json(v).dump(); };
    out << e.step << ',' << num(e.mean_reward) << ',' << num(e.mean_r_correct) << ','
        << num(e.mean_kl) << ',' << num(e.grad_norm) << ',' << num(e.objective) << ','
        << num(e.wall_ms) << '\n';
  }
}

EvalReport evaluate(const SequencePolicy& policy, std::span<const MvpSample> corpus,
                    const RewardConfig& reward, std::uint64_t seed, std::size_t jobs) {
  if (corpus.empty()) throw EmptyCorpus("evaluation corpus has no samples");
  reward.validate();
  EvalReport report;
  report.samples.resize(corpus.size());
  parallel_for(corpus.size(), jobs, [&](std::size_t i) {
    const auto& sample = corpus[i];
    Rng rng(derive_seed(seed, sample.sample_id));
    Emission e = policy.act(sample, rng);
    auto& out = report.samples[i];
    out.sample_id = sample.sample_id;
    out.breakdown = total_reward(e.text, sample.answer, reward);
    out.response = std::move(e.text);
    std::size_t exact = 0;
    for (const auto& p : out.breakdown.per_position)
      if (p.verdict == Verdict::kExact) ++exact;
    const double k = static_cast<double>(sample.answer.size());
    out.accuracy = k > 0 ? static_cast<double>(exact) / k : 0.0;
    out.sequence_exact = exact == sample.answer.size() &&
                         out.breakdown.pred_length == sample.answer.size();
    out.format_ok = out.breakdown.r_format == 1;
  });
  for (const auto& s : report.samples) {
    report.avg_accuracy += s.accuracy;
    report.avg_sequence_accuracy += s.sequence_exact ? 1.0 : 0.0;
    report.avg_format_rate += s.format_ok ? 1.0 : 0.0;
    report.avg_r_correct += s.breakdown.r_correct;
    report.avg_r_total += s.breakdown.r_total;
  }
  const double n = static_cast<double>(report.samples.size());
  report.avg_accuracy /= n;
  report.avg_sequence_accuracy /= n;
  report.avg_format_rate /= n;
  report.avg_r_correct /= n;
  report.avg_r_total /= n;
  return report;
}

nlohmann::ordered_json to_json(const EvalReport& r, bool include_samples) {
  nlohmann::ordered_json j{
      {"accuracy_definition",
       "avg_accuracy = mean over samples of (exact-position matches / K); "
       "avg_sequence_accuracy = fraction of samples answered exactly"},
      {"samples_evaluated", r.samples.size()},
      {"avg_accuracy", r.avg_accuracy},
      {"avg_sequence_accuracy", r.avg_sequence_accuracy},
      {"avg_format_rate", r.avg_format_rate},
      {"avg_r_correct", r.avg_r_correct},
      {"avg_r_total", r.avg_r_total}};
  if (include_samples) {
    nlohmann::ordered_json samples = nlohmann::ordered_json::array();
    for (const auto& s : r.samples)
      samples.push_back({{"sample_id", s.sample_id},
                         {"response", s.response},
                         {"accuracy", s.accuracy},
                         {"sequence_exact", s.sequence_exact},
                         {"format_ok", s.format_ok},
                         {"breakdown", to_json(s.breakdown)}});
    j["samples"] = std::move(samples);
  }
  return j;
}

}  // namespace mvp
