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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mvp/error.hpp"
#include "mvp/oracle.hpp"
#include "mvp/synthetic.hpp"
#include "mvp/training.hpp"

namespace mvp {
namespace {

std::vector<MvpSample> train_corpus(std::uint64_t seed) {
  return synthetic::samples(5, 6, 3, derive_seed(seed, "train-corpus"));
}

TrainOptions options(std::size_t steps, std::uint64_t seed, std::size_t jobs = 1) {
  TrainOptions opt;
  opt.steps = steps;
  opt.seed = seed;
  opt.jobs = jobs;
  return opt;
}

std::string log_bytes(const TrainResult& r, const GrpoConfig& g, const RewardConfig& rc,
                      const TrainOptions& opt, std::size_t n) {
  std::ostringstream out;
  write_train_log(out, train_log_header(g, rc, opt, n), r.log);
  return out.str();
}

// Expected r_total of a well-formed response under the policy's exact
// action distribution, averaged over the corpus.
double expected_reward(const SoftmaxSequencePolicy& policy, std::span<const MvpSample> corpus,
                       const RewardConfig& cfg) {
  double total = 0.0;
  for (const auto& s : corpus) {
    const auto probs = policy.probabilities(s.sample_id);
    const auto& space = policy.action_space(s.sample_id);
    for (std::size_t i = 0; i < space.size(); ++i) {
      std::vector<CandidateLabel> pred;
      for (auto a : space.action(i)) pred.push_back(CandidateLabel::from_index(a));
      total += probs[i] * score_prediction(pred, true, s.answer, cfg).r_total;
    }
  }
  return total / double(corpus.size());
}

TEST(TrainSim, SeededRunsAreByteIdentical) {
  const auto corpus = train_corpus(3);
  const GrpoConfig g;
  const RewardConfig rc;
  const auto a = train_sim(corpus, g, rc, options(40, 3));
  const auto b = train_sim(corpus, g, rc, options(40, 3));
  const auto c = train_sim(corpus, g, rc, options(40, 3, 4));
  EXPECT_EQ(log_bytes(a, g, rc, options(40, 3), 5), log_bytes(b, g, rc, options(40, 3), 5));
  EXPECT_EQ(log_bytes(a, g, rc, options(40, 3), 5), log_bytes(c, g, rc, options(40, 3), 5));
  EXPECT_TRUE(std::ranges::equal(a.policy.params(), c.policy.params()));
  const auto d = train_sim(corpus, g, rc, options(40, 4));
  EXPECT_NE(log_bytes(a, g, rc, options(40, 3), 5), log_bytes(d, g, rc, options(40, 3), 5));
}

TEST(TrainSim, ReachesNinetyPercentOfAlpha) {
  for (std::uint64_t seed : {0, 1, 2}) {
    const auto r = train_sim(train_corpus(seed), GrpoConfig{}, RewardConfig{}, options(300, seed));
    EXPECT_TRUE(r.first_step_reaching(2.7).has_value()) << "seed " << seed;
  }
}

TEST(TrainSim, ExpectedRewardRisesOverFiftySteps) {
  // exact expected reward at step 50 >= step 0 and a non-negative trend of
  // the logged per-step means, in >= 19 of 20 seeds
  const RewardConfig rc;
  int ok = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto corpus = train_corpus(seed);
    const auto r = train_sim(corpus, GrpoConfig{}, rc, options(50, seed));
    const double before = expected_reward(SoftmaxSequencePolicy::for_corpus(corpus), corpus, rc);
    const double after = expected_reward(r.policy, corpus, rc);
    double sx = 0, sy = 0, sxy = 0, sxx = 0;
    for (const auto& e : r.log) {
      sx += e.step;
      sy += e.mean_reward;
      sxy += e.step * e.mean_reward;
      sxx += double(e.step) * e.step;
    }
    const double n = double(r.log.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    ok += after >= before && slope >= 0.0;
  }
  EXPECT_GE(ok, 19);
}

TEST(TrainSim, SequenceBonusConvergesNoSlowerThanExactOnly) {
  RewardConfig exact_only, full;
  exact_only.mode = RewardMode::kExactOnly;
  int wins = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto corpus = train_corpus(seed);
    const auto e = train_sim(corpus, GrpoConfig{}, exact_only, options(300, seed))
                       .first_step_reaching(2.7);
    const auto f = train_sim(corpus, GrpoConfig{}, full, options(300, seed)).first_step_reaching(2.7);
    wins += f.has_value() && (!e.has_value() || *f <= *e);
  }
  EXPECT_GE(wins, 14) << wins << "/20";
}

TEST(TrainSim, ZeroLearningRateIsStationary) {
  GrpoConfig g;
  g.learning_rate = 0.0;
  int stationary = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto corpus = train_corpus(seed);
    const auto r = train_sim(corpus, g, RewardConfig{}, options(200, seed));
    EXPECT_TRUE(std::ranges::all_of(r.policy.params(), [](double p) { return p == 0.0; }));
    std::vector<double> rewards;
    for (const auto& e : r.log) rewards.push_back(e.mean_reward);
    stationary += oracle::mann_kendall(rewards).p_value > 0.05;
  }
  // at the 5% level about one seed in twenty is expected to reject
  EXPECT_GE(stationary, 17);
}

TEST(TrainSim, LogEntriesAreOrderedAndFinite) {
  const auto r = train_sim(train_corpus(1), GrpoConfig{}, RewardConfig{}, options(30, 1, 3));
  ASSERT_EQ(r.log.size(), 30u);
  for (std::size_t i = 0; i < r.log.size(); ++i) {
    EXPECT_EQ(r.log[i].step, i + 1);
    EXPECT_TRUE(std::isfinite(r.log[i].mean_reward));
    EXPECT_GE(r.log[i].mean_kl, -1e-12);
    EXPECT_EQ(r.log[i].wall_ms, 0.0);
  }
}

TEST(TrainSim, EmptyOrInvalidCorpusIsRejected) {
  EXPECT_THROW(train_sim({}, GrpoConfig{}, RewardConfig{}, options(1, 0)), EmptyCorpus);
  auto corpus = train_corpus(0);
  corpus[0].answer.clear();
  EXPECT_THROW(train_sim(corpus, GrpoConfig{}, RewardConfig{}, options(1, 0)), DataError);
}

TEST(TrainLog, JsonlAndCsvRoundTrip) {
  const GrpoConfig g;
  const RewardConfig rc;
  const auto opt = options(5, 2);
  const auto r = train_sim(train_corpus(2), g, rc, opt);
  std::stringstream ss;
  write_train_log(ss, train_log_header(g, rc, opt, 5), r.log);
  const std::string text = ss.str();
  EXPECT_NE(text.find("\"reference_policy\":\"frozen_at_init\""), std::string::npos);
  const auto back = read_train_log(ss);
  ASSERT_EQ(back.size(), r.log.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].step, r.log[i].step);
    EXPECT_EQ(back[i].mean_reward, r.log[i].mean_reward);
    EXPECT_EQ(back[i].grad_norm, r.log[i].grad_norm);
  }
  std::ostringstream csv;
  write_train_log_csv(csv, back);
  const std::string table = csv.str();
  EXPECT_EQ(table.rfind("step,mean_reward", 0), 0u);
  EXPECT_EQ(std::count(table.begin(), table.end(), '\n'), 6);
  std::stringstream broken("{\"step\": \"x\"}\n");
  EXPECT_THROW(read_train_log(broken), DataError);
}

TEST(Evaluate, OracleIsPerfect) {
  const auto corpus = synthetic::samples(500, 6, 3, 1);
  const auto r = evaluate(ScriptedPolicy(ScriptedPolicy::Kind::kOracle), corpus, RewardConfig{}, 0);
  EXPECT_EQ(r.avg_accuracy, 1.0);
  EXPECT_EQ(r.avg_sequence_accuracy, 1.0);
  EXPECT_EQ(r.avg_format_rate, 1.0);
  EXPECT_EQ(r.samples.size(), 500u);
}

TEST(Evaluate, ContentOnlyAccuracyIsOneThird) {
  const auto corpus = synthetic::samples(10000, 6, 3, 2);
  const auto r = evaluate(ScriptedPolicy(ScriptedPolicy::Kind::kContentOnly), corpus, RewardConfig{}, 5);
  EXPECT_NEAR(r.avg_accuracy, 1.0 / 3.0, 0.02);
  EXPECT_NEAR(r.avg_sequence_accuracy, 1.0 / 6.0, 0.02);
}

TEST(Evaluate, FormatRateTracksScriptedRate) {
  const auto corpus = synthetic::samples(10000, 6, 3, 3);
  const auto r = evaluate(ScriptedPolicy(ScriptedPolicy::Kind::kRandom, 0.74), corpus, RewardConfig{}, 9);
  EXPECT_NEAR(r.avg_format_rate, 0.74, 0.02);
}

TEST(Evaluate, DeterministicAndJobIndependent) {
  const auto corpus = synthetic::samples(200, 6, 3, 4);
  const ScriptedPolicy noisy(ScriptedPolicy::Kind::kNoisy, 0.8, 0.3);
  const auto a = to_json(evaluate(noisy, corpus, RewardConfig{}, 11, 1));
  const auto b = to_json(evaluate(noisy, corpus, RewardConfig{}, 11, 4));
  EXPECT_EQ(a.dump(), b.dump());

  auto trained = train_sim(train_corpus(0), GrpoConfig{}, RewardConfig{}, options(30, 0)).policy;
  trained.set_temperature(0.0);
  const auto c1 = evaluate(trained, train_corpus(0), RewardConfig{}, 1);
  const auto c2 = evaluate(trained, train_corpus(0), RewardConfig{}, 2);
  EXPECT_EQ(to_json(c1).dump(), to_json(c2).dump());
}

TEST(Evaluate, EmptyCorpusIsError) {
  EXPECT_THROW(evaluate(ScriptedPolicy(ScriptedPolicy::Kind::kOracle), {}, RewardConfig{}, 0),
               EmptyCorpus);
}

TEST(Evaluate, OutputNamesAccuracyDefinition) {
  const auto corpus = synthetic::samples(3, 6, 3, 4);
  const auto j = to_json(evaluate(ScriptedPolicy(ScriptedPolicy::Kind::kOracle), corpus, RewardConfig{}, 0));
  EXPECT_TRUE(j.contains("accuracy_definition"));
  EXPECT_EQ(j["samples"].size(), 3u);
  EXPECT_FALSE(to_json(evaluate(ScriptedPolicy(ScriptedPolicy::Kind::kOracle), corpus, RewardConfig{}, 0),
                       false)
                   .contains("samples"));
}

}  // namespace
}  // namespace mvp
