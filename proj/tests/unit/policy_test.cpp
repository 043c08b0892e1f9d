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

#include <cmath>
#include <set>

#include "helpers.hpp"
#include "mvp/error.hpp"
#include "mvp/oracle.hpp"
#include "mvp/policy.hpp"
#include "mvp/reward.hpp"
#include "mvp/synthetic.hpp"

namespace mvp {
namespace {

SoftmaxSequencePolicy randomized(std::span<const MvpSample> corpus, Parameterization p,
                                 std::uint64_t seed, double spread = 2.0) {
  auto policy = SoftmaxSequencePolicy::for_corpus(corpus, 1.0, p);
  Rng rng(seed);
  std::vector<double> params(policy.num_params());
  for (auto& x : params) x = (uniform01(rng) - 0.5) * spread;
  policy.set_params(params);
  return policy;
}

TEST(ActionSpace, SizeOrderAndIndex) {
  const ActionSpace space(7, 4);
  EXPECT_EQ(space.size(), 840u);
  const std::vector<std::uint8_t> first{0, 1, 2, 3}, last{6, 5, 4, 3};
  EXPECT_TRUE(std::ranges::equal(space.action(0), first));
  EXPECT_TRUE(std::ranges::equal(space.action(839), last));
  for (std::size_t i = 0; i < space.size(); ++i) EXPECT_EQ(space.index_of(space.action(i)), i);
  for (std::size_t i = 1; i < space.size(); ++i)
    EXPECT_TRUE(std::ranges::lexicographical_compare(space.action(i - 1), space.action(i)));
  const std::vector<std::uint8_t> dup{0, 0, 1, 2}, out_of_pool{0, 1, 2, 7}, short_one{0, 1};
  EXPECT_THROW(space.index_of(dup), ActionSpaceMismatch);
  EXPECT_THROW(space.index_of(out_of_pool), ActionSpaceMismatch);
  EXPECT_THROW(space.index_of(short_one), ActionSpaceMismatch);
}

TEST(RenderResponse, Shapes) {
  EXPECT_EQ(render_response(test::labels("bac"), true).find("<answer>[b,a,c]</answer>") !=
                std::string::npos,
            true);
  const auto bare = render_response(test::labels("bac"), false);
  EXPECT_FALSE(parse_response(bare).format_ok);
  EXPECT_EQ(parse_response(bare).labels, test::labels("bac"));
  EXPECT_TRUE(parse_response(render_response(test::labels("bac"), true)).format_ok);
}

TEST(SoftmaxPolicy, ProbabilitiesSumToOne) {
  for (std::size_t k = 1; k <= 4; ++k) {
    const auto corpus = synthetic::samples(3, 7, k, k);
    for (auto p : {Parameterization::kTabular, Parameterization::kFactored}) {
      const auto policy = randomized(corpus, p, 9 + k, 6.0);
      for (const auto& s : corpus) {
        const auto probs = policy.probabilities(s.sample_id);
        double sum = 0.0;
        for (double x : probs) sum += x;
        EXPECT_NEAR(sum, 1.0, 1e-9);
      }
    }
  }
}

TEST(SoftmaxPolicy, ParameterCounts) {
  const auto corpus = synthetic::samples(2, 6, 3, 1);
  EXPECT_EQ(SoftmaxSequencePolicy::for_corpus(corpus, 1.0, Parameterization::kTabular).num_params(),
            2u * 120u);
  EXPECT_EQ(SoftmaxSequencePolicy::for_corpus(corpus, 1.0, Parameterization::kFactored).num_params(),
            2u * (3u * 6u + 36u));
}

TEST(SoftmaxPolicy, StartsUniform) {
  const auto corpus = synthetic::samples(1, 6, 3, 4);
  const auto policy = SoftmaxSequencePolicy::for_corpus(corpus);
  for (double p : policy.probabilities(corpus[0].sample_id)) EXPECT_NEAR(p, 1.0 / 120.0, 1e-15);
}

TEST(SoftmaxPolicy, LogprobMatchesProbabilities) {
  const auto corpus = synthetic::samples(1, 6, 3, 4);
  const auto policy = randomized(corpus, Parameterization::kFactored, 2);
  const auto& id = corpus[0].sample_id;
  const auto probs = policy.probabilities(id);
  const auto& space = policy.action_space(id);
  for (std::size_t i = 0; i < space.size(); i += 7)
    EXPECT_NEAR(policy.logprob(id, space.action(i)), std::log(probs[i]), 1e-12);
}

TEST(SoftmaxPolicy, JsonRoundTrip) {
  const auto corpus = synthetic::samples(3, 6, 2, 4);
  for (auto p : {Parameterization::kTabular, Parameterization::kFactored}) {
    const auto policy = randomized(corpus, p, 5);
    const auto back = SoftmaxSequencePolicy::from_json(policy.to_json());
    EXPECT_EQ(back.parameterization(), p);
    EXPECT_TRUE(std::ranges::equal(back.params(), policy.params()));
    EXPECT_EQ(back.probabilities(corpus[1].sample_id), policy.probabilities(corpus[1].sample_id));
  }
}

TEST(SoftmaxPolicy, UnknownQueryIsMismatch) {
  const auto corpus = synthetic::samples(1, 6, 3, 4);
  const auto policy = SoftmaxSequencePolicy::for_corpus(corpus);
  auto other = synthetic::samples(1, 6, 3, 5)[0];
  other.sample_id = "elsewhere";
  Rng rng(1);
  EXPECT_THROW(policy.act(other, rng), ActionSpaceMismatch);
  EXPECT_THROW(parse_parameterization("lookup"), ConfigError);
}

TEST(Rollout, OracleGivesIdenticalCorrectResponses) {
  const ScriptedPolicy oracle(ScriptedPolicy::Kind::kOracle);
  for (const auto& s : synthetic::samples(20, 6, 3, 6)) {
    Rng rng(1);
    const auto g = rollout(oracle, s, 5, rng);
    ASSERT_EQ(g.outputs.size(), 5u);
    for (const auto& o : g.outputs) {
      EXPECT_EQ(o.response, g.outputs[0].response);
      EXPECT_DOUBLE_EQ(total_reward(o.response, s.answer, RewardConfig{}).r_correct, 3.0);
    }
  }
}

TEST(Rollout, RandomPolicyExactRateIsOneIn840) {
  const auto sample = synthetic::samples(1, 7, 4, 12)[0];
  const ScriptedPolicy random(ScriptedPolicy::Kind::kRandom);
  Rng rng(derive_seed(0, "binomial"));
  const int draws = 100000;
  int exact = 0;
  for (int i = 0; i < draws; ++i) exact += random.act(sample, rng).labels == sample.answer;
  const double p = 1.0 / 840.0;
  const double sigma = std::sqrt(draws * p * (1.0 - p));
  EXPECT_NEAR(exact, draws * p, 3.0 * sigma);
}

TEST(Rollout, ZeroTemperatureIsGreedyAndIdentical) {
  const auto corpus = synthetic::samples(10, 6, 3, 7);
  auto policy = randomized(corpus, Parameterization::kFactored, 8);
  policy.set_temperature(0.0);
  for (const auto& s : corpus) {
    Rng rng(3);
    const auto g = rollout(policy, s, 5, rng);
    const auto best = policy.action_space(s.sample_id).action(policy.argmax_action(s.sample_id));
    for (const auto& o : g.outputs) EXPECT_TRUE(std::ranges::equal(o.action, best));
  }
}

TEST(Rollout, RecordsLogprobOld) {
  const auto corpus = synthetic::samples(1, 6, 3, 7);
  const auto policy = randomized(corpus, Parameterization::kTabular, 8);
  Rng rng(3);
  for (const auto& o : rollout(policy, corpus[0], 5, rng).outputs)
    EXPECT_NEAR(o.logprob_old, policy.logprob(corpus[0].sample_id, o.action), 1e-12);
}

TEST(KlEstimator, SampleMeanConvergesToExactKl) {
  const auto corpus = synthetic::samples(1, 6, 3, 21);
  const auto& id = corpus[0].sample_id;
  const auto reference = SoftmaxSequencePolicy::for_corpus(corpus);
  const auto policy = randomized(corpus, Parameterization::kFactored, 4, 3.0);
  const double exact = policy.exact_kl(id, reference);
  ASSERT_GT(exact, 0.01);

  Rng rng(17);
  const int n = 200000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto e = policy.act(corpus[0], rng);
    const auto action = to_action(e.labels);
    const double k3 = kl_penalty(policy.logprob(id, action), reference.logprob(id, action));
    sum += k3;
    sum_sq += k3 * k3;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sum_sq / n - mean * mean) / n);
  EXPECT_NEAR(mean, exact, 4.0 * se + 1e-12);
  EXPECT_EQ(policy.exact_kl(id, policy), 0.0);
}

TEST(ScriptedPolicy, SpecsAndFormatRate) {
  EXPECT_EQ(ScriptedPolicy::parse("noisy:0.25").noise_p(), 0.25);
  EXPECT_EQ(ScriptedPolicy::parse("content_only").kind(), ScriptedPolicy::Kind::kContentOnly);
  EXPECT_THROW(ScriptedPolicy::parse("noisy:2"), ConfigError);
  EXPECT_THROW(ScriptedPolicy::parse("genius"), ConfigError);
  const auto policy = ScriptedPolicy::parse("oracle", 0.0);
  Rng rng(1);
  EXPECT_FALSE(policy.act(synthetic::samples(1, 6, 3, 1)[0], rng).well_formed);
}

TEST(ScriptedPolicy, OracleScoresAlphaEverywhere) {
  const ScriptedPolicy oracle(ScriptedPolicy::Kind::kOracle);
  Rng rng(2);
  for (std::size_t k = 2; k <= 4; ++k)
    for (const auto& s : synthetic::samples(50, 6, k, k)) {
      const auto e = oracle.act(s, rng);
      EXPECT_DOUBLE_EQ(total_reward(e.text, s.answer, RewardConfig{}).r_correct, 3.0);
    }
}

TEST(RewardCeiling, NoRolloutExceedsEnumeratedMaximum) {
  const RewardConfig cfg;
  const auto corpus = synthetic::samples(30, 6, 3, 31);
  const auto trained = randomized(corpus, Parameterization::kFactored, 5, 4.0);
  const ScriptedPolicy noisy(ScriptedPolicy::Kind::kNoisy, 1.0, 0.5);
  const ScriptedPolicy random(ScriptedPolicy::Kind::kRandom);
  Rng rng(6);
  for (const auto& s : corpus) {
    const double ceiling = oracle::max_r_correct(s.answer, s.pool_size(), cfg);
    for (const SequencePolicy* p : {static_cast<const SequencePolicy*>(&trained),
                                    static_cast<const SequencePolicy*>(&noisy),
                                    static_cast<const SequencePolicy*>(&random)})
      for (const auto& o : rollout(*p, s, 20, rng).outputs)
        EXPECT_LE(total_reward(o.response, s.answer, cfg).r_correct, ceiling + 1e-12);
  }
}

}  // namespace
}  // namespace mvp
