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
#include <numeric>

#include "mvp/error.hpp"
#include "mvp/grpo.hpp"
#include "mvp/oracle.hpp"
#include "mvp/policy.hpp"
#include "mvp/random.hpp"

namespace mvp {
namespace {

double mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
}

double pop_std(const std::vector<double>& v) {
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / double(v.size()));
}

TEST(ComputeAdvantages, ConstantGroupIsAllZero) {
  const std::vector<double> r(5, 1.0);
  for (double a : compute_advantages(r, 1e-6)) EXPECT_EQ(a, 0.0);
}

TEST(ComputeAdvantages, SymmetricTwoPoint) {
  const std::vector<double> r{0.0, 2.0};
  const auto a = compute_advantages(r, 1e-15);
  EXPECT_NEAR(a[0], -1.0, 1e-12);
  EXPECT_NEAR(a[1], 1.0, 1e-12);
}

TEST(ComputeAdvantages, MatchesReferenceArithmetic) {
  const std::vector<double> r{0.1, 0.9, 2.8, 0.1, 1.5};
  const auto a = compute_advantages(r, 1e-6);
  const auto ref = oracle::reference_advantages(r, 1e-6);
  for (std::size_t i = 0; i < r.size(); ++i) EXPECT_NEAR(a[i], ref[i], 1e-12);
}

TEST(ComputeAdvantages, GroupOfOneIsError) {
  const std::vector<double> one{1.0};
  EXPECT_THROW(compute_advantages(one, 1e-6), GroupSizeError);
  EXPECT_THROW(compute_advantages({}, 1e-6), GroupSizeError);
}

TEST(ComputeAdvantages, NormalizationAndShiftInvariance) {
  Rng rng(77);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<double> r(2 + uniform_index(rng, 7));
    for (auto& x : r) x = uniform01(rng) * 3.0;
    const double eps = 1e-6;
    const auto a = compute_advantages(r, eps);
    const double s = pop_std(r);
    EXPECT_NEAR(mean(a), 0.0, 1e-9);
    EXPECT_NEAR(pop_std(a), s / (s + eps), 1e-9);
    const double c = uniform01(rng) * 100.0 - 50.0;
    auto shifted = r;
    for (auto& x : shifted) x += c;
    const auto b = compute_advantages(shifted, eps);
    for (std::size_t i = 0; i < r.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-9);
  }
}

TEST(ClippedSurrogate, Examples) {
  EXPECT_DOUBLE_EQ(clipped_surrogate(-1.3, -1.3, 1.7, 0.2), 1.7);
  EXPECT_NEAR(clipped_surrogate(std::log(2.0), 0.0, 1.0, 0.2), 1.2, 1e-12);
  EXPECT_NEAR(clipped_surrogate(std::log(0.5), 0.0, -1.0, 0.2), -0.8, 1e-12);
}

TEST(ClippedSurrogate, QuadrantTruthTable) {
  // (rho, A) -> expected; rho outside the band on each side, both signs of A
  struct Row {
    double rho, adv, want;
  };
  for (const Row& row : {Row{2.0, 1.0, 1.2}, Row{2.0, -1.0, -2.0}, Row{0.5, 1.0, 0.5},
                         Row{0.5, -1.0, -0.8}}) {
    EXPECT_NEAR(clipped_surrogate(std::log(row.rho), 0.0, row.adv, 0.2), row.want, 1e-12)
        << row.rho << " " << row.adv;
  }
}

TEST(ClippedSurrogate, InsideBandIsRhoTimesA) {
  Rng rng(4);
  for (int i = 0; i < 1000; ++i) {
    const double rho = 0.8 + 0.4 * uniform01(rng);
    const double adv = uniform01(rng) * 4.0 - 2.0;
    const double lp = std::log(rho);
    EXPECT_EQ(clipped_surrogate(lp, 0.0, adv, 0.2), std::exp(lp) * adv);
  }
}

TEST(ClippedSurrogate, GradientZeroWhereClipped) {
  EXPECT_EQ(clipped_surrogate_grad(std::log(2.0), 0.0, 1.0, 0.2), 0.0);
  EXPECT_NEAR(clipped_surrogate_grad(std::log(2.0), 0.0, -1.0, 0.2), -2.0, 1e-12);
  EXPECT_NEAR(clipped_surrogate_grad(0.0, 0.0, 1.5, 0.2), 1.5, 1e-12);
}

TEST(ClippedSurrogate, NonFiniteInputIsError) {
  EXPECT_THROW(clipped_surrogate(NAN, 0.0, 1.0, 0.2), NumericInputError);
  EXPECT_THROW(clipped_surrogate(0.0, INFINITY, 1.0, 0.2), NumericInputError);
  EXPECT_THROW(kl_penalty(0.0, NAN), NumericInputError);
}

TEST(KlPenalty, Examples) {
  EXPECT_EQ(kl_penalty(-2.0, -2.0), 0.0);
  EXPECT_NEAR(kl_penalty(0.0, 1.0), std::exp(1.0) - 2.0, 1e-15);
  EXPECT_NEAR(kl_penalty(0.0, -1.0), std::exp(-1.0), 1e-15);
}

TEST(KlPenalty, NonNegativeAndZeroOnlyWhenEqual) {
  Rng rng(8);
  for (int i = 0; i < 10000; ++i) {
    const double a = -20.0 * uniform01(rng), b = -20.0 * uniform01(rng);
    const double k = kl_penalty(a, b);
    EXPECT_GE(k, 0.0);
    if (a != b && std::abs(a - b) > 1e-7) {
      EXPECT_GT(k, 0.0);
    }
  }
}

RolloutGroup toy_group() {
  RolloutGroup g;
  g.query_id = "q";
  const double old_lp[] = {-1.0, -2.0, -0.5, -1.5};
  const double ref_lp[] = {-1.2, -1.8, -0.7, -1.5};
  const double rewards[] = {0.1, 2.8, 1.5, 0.1};
  for (int i = 0; i < 4; ++i) g.outputs.push_back({{}, "", old_lp[i], ref_lp[i], rewards[i], 0.0});
  g.assign_advantages(1e-6);
  return g;
}

TEST(GroupObjective, OnPolicyWithoutKlIsZero) {
  auto g = toy_group();
  GrpoConfig cfg;
  cfg.kl_coeff = 0.0;
  std::vector<double> lp;
  for (const auto& o : g.outputs) lp.push_back(o.logprob_old);
  EXPECT_NEAR(group_objective(g, lp, cfg), 0.0, 1e-12);
}

TEST(GroupObjective, HandComputedToyInstance) {
  const auto g = toy_group();
  GrpoConfig cfg;
  cfg.kl_coeff = 0.04;
  const std::vector<double> lp{-0.9, -2.5, -0.2, -1.5};
  long double sum = 0.0L;
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& o = g.outputs[i];
    const long double rho = std::exp((long double)lp[i] - o.logprob_old);
    const long double clipped = std::clamp(rho, 0.8L, 1.2L);
    const long double surrogate = std::min(rho * o.advantage, clipped * o.advantage);
    const long double d = (long double)o.logprob_ref - lp[i];
    sum += surrogate - 0.04L * (std::exp(d) - d - 1.0L);
  }
  EXPECT_NEAR(group_objective(g, lp, cfg), double(sum / 4.0L), 1e-12);
}

TEST(GroupObjective, MoreKlNeverRaisesObjective) {
  const auto g = toy_group();
  const std::vector<double> lp{-0.9, -2.5, -0.2, -1.5};
  GrpoConfig cfg;
  double prev = INFINITY;
  for (double kl : {0.0, 0.01, 0.04, 0.1, 1.0}) {
    cfg.kl_coeff = kl;
    const double j = group_objective(g, lp, cfg);
    EXPECT_LT(j, prev);
    prev = j;
  }
}

TEST(GroupObjective, LengthMismatchIsError) {
  const std::vector<double> lp{-1.0};
  EXPECT_THROW(group_objective(toy_group(), lp, GrpoConfig{}), LengthMismatch);
}

// A 12-parameter policy: one query, pool 4, K = 2, a free logit per sequence.
struct SmallProblem {
  SoftmaxSequencePolicy policy{{QuerySpec{"q", 4, 2}}, 1.0, Parameterization::kTabular};
  std::vector<RolloutGroup> batch;

  explicit SmallProblem(std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> params(policy.num_params());
    for (auto& p : params) p = uniform01(rng) * 2.0 - 1.0;
    policy.set_params(params);
    RolloutGroup g;
    g.query_id = "q";
    const auto& space = policy.action_space("q");
    for (int i = 0; i < 5; ++i) {
      RolloutOutput o;
      const auto a = space.action(uniform_index(rng, space.size()));
      o.action.assign(a.begin(), a.end());
      o.logprob_old = policy.logprob("q", o.action) + 0.3 * (uniform01(rng) - 0.5);
      o.logprob_ref = policy.logprob("q", o.action) + 0.5 * (uniform01(rng) - 0.5);
      o.reward = uniform01(rng) * 3.0;
      g.outputs.push_back(o);
    }
    g.assign_advantages(1e-6);
    batch.push_back(g);
  }
};

TEST(GrpoStep, GradientMatchesCentralDifferences) {
  ASSERT_EQ(SmallProblem(0).policy.num_params(), 12u);
  GrpoConfig cfg;
  cfg.kl_coeff = 0.1;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SmallProblem prob(seed);
    const auto analytic = batch_objective_grad(prob.policy, prob.batch, cfg);
    const std::vector<double> x(prob.policy.params().begin(), prob.policy.params().end());
    auto f = [&](std::span<const double> p) {
      prob.policy.set_params(p);
      return batch_objective(prob.policy, prob.batch, cfg);
    };
    const auto numeric = oracle::central_differences(f, x, 1e-5);
    double err = 0.0, scale = 1e-8;
    for (std::size_t i = 0; i < x.size(); ++i) {
      err = std::max(err, std::abs(analytic[i] - numeric[i]));
      scale = std::max({scale, std::abs(analytic[i]), std::abs(numeric[i])});
    }
    EXPECT_LT(err / scale, 1e-4) << "seed " << seed;
  }
}

TEST(GrpoStep, NoSignalLeavesParametersUnchanged) {
  SmallProblem prob(3);
  for (auto& o : prob.batch[0].outputs) o.reward = 1.0;
  prob.batch[0].assign_advantages(1e-6);
  GrpoConfig cfg;
  cfg.kl_coeff = 0.0;
  const std::vector<double> before(prob.policy.params().begin(), prob.policy.params().end());
  const auto report = grpo_step(prob.policy, prob.batch, cfg);
  EXPECT_EQ(report.grad_norm, 0.0);
  EXPECT_EQ(std::vector<double>(prob.policy.params().begin(), prob.policy.params().end()), before);
}

TEST(GrpoStep, StepAscendsObjective) {
  GrpoConfig cfg;
  cfg.learning_rate = 1e-3;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SmallProblem prob(seed);
    const double before = batch_objective(prob.policy, prob.batch, cfg);
    const auto report = grpo_step(prob.policy, prob.batch, cfg);
    EXPECT_NEAR(report.objective, before, 1e-12);
    if (report.grad_norm > 1e-6) {
      EXPECT_GT(batch_objective(prob.policy, prob.batch, cfg), before);
    }
  }
}

class NanPolicy : public DifferentiablePolicy {
 public:
  std::size_t num_params() const override { return 2; }
  std::span<const double> params() const override { return params_; }
  void set_params(std::span<const double> p) override { params_.assign(p.begin(), p.end()); }
  double logprob(const std::string&, std::span<const std::uint8_t>) const override { return -1.0; }
  void accumulate_logprob_grad(const std::string& q, std::span<const std::uint8_t>, double scale,
                               std::span<double> grad) const override {
    grad[0] += scale;
    grad[1] += q == "bad" ? NAN : scale;
  }

 private:
  std::vector<double> params_{0.5, 0.5};
};

TEST(GrpoStep, NonFiniteGradientNamesGroupAndKeepsParams) {
  NanPolicy policy;
  std::vector<RolloutGroup> batch(2);
  batch[0].query_id = "good";
  batch[1].query_id = "bad";
  for (auto& g : batch) {
    for (double r : {0.0, 1.0, 2.0}) g.outputs.push_back({{0}, "", -1.0, -1.0, r, 0.0});
    g.assign_advantages(1e-6);
  }
  try {
    grpo_step(policy, batch, GrpoConfig{});
    FAIL();
  } catch (const DivergedStep& e) {
    EXPECT_EQ(e.group_id, "bad");
  }
  EXPECT_EQ(policy.params()[0], 0.5);
  EXPECT_EQ(policy.params()[1], 0.5);
}

TEST(GrpoConfig, Validation) {
  GrpoConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.group_size_g = 1;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.clip_eps = 0.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.kl_coeff = -1.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

}  // namespace
}  // namespace mvp
