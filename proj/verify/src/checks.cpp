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

#include "mvp/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "mvp/dataset.hpp"
#include "mvp/error.hpp"
#include "mvp/grpo.hpp"
#include "mvp/oracle.hpp"
#include "mvp/policy.hpp"
#include "mvp/random.hpp"
#include "mvp/reward.hpp"
#include "mvp/synthesis.hpp"
#include "mvp/synthetic.hpp"
#include "mvp/training.hpp"

namespace mvp::verify {

void CheckResult::fail(std::string what) {
  ++failures;
  if (failures <= 5) notes.push_back(std::move(what));
}

namespace {

using oracle::Labels;
using Clock = std::chrono::steady_clock;

constexpr RewardMode kModes[] = {RewardMode::kExactOnly, RewardMode::kContentAware,
                                 RewardMode::kContentPlusSequence};

// Runs body(result) and stamps the elapsed time.
template <typename F>
CheckResult timed(std::string name, F&& body) {
  CheckResult r;
  r.name = std::move(name);
  const auto t0 = Clock::now();
  body(r);
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return r;
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

std::string show(const Labels& l) { return labels_to_string(l); }

Labels labels(std::string_view letters) {
  Labels out;
  for (char c : letters) out.emplace_back(c);
  return out;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// reward

CheckResult reward_oracle_equivalence(std::size_t max_pool, std::size_t max_k, double tol) {
  return timed("reward oracle equivalence", [&](CheckResult& r) {
    for (std::size_t pool = 1; pool <= max_pool; ++pool)
      for (std::size_t k = 1; k <= std::min(pool, max_k); ++k) {
        const auto seqs = oracle::distinct_sequences(pool, k);
        for (const auto& truth : seqs)
          for (const auto& pred : seqs)
            for (RewardMode mode : kModes) {
              RewardConfig cfg;
              cfg.mode = mode;
              const auto fast = correctness_reward(pred, truth, cfg);
              const double tok = oracle::brute_token_score(pred, truth, cfg);
              const double bonus = oracle::brute_continuity(pred, truth, cfg);
              ++r.instances;
              if (!close(fast.token_score, tok, tol) || !close(fast.continuity_bonus, bonus, tol) ||
                  !close(fast.r_correct, tok + bonus, tol))
                r.fail(std::string(to_string(mode)) + " pred " + show(pred) + " truth " +
                       show(truth) + ": engine " + fmt(fast.r_correct) + " oracle " +
                       fmt(tok + bonus));
            }
      }
  });
}

CheckResult reward_hand_fixtures() {
  return timed("reward hand-anchored fixtures", [](CheckResult& r) {
    const RewardConfig cfg;
    auto expect = [&](const std::string& what, double got, double want) {
      ++r.instances;
      if (!close(got, want, 1e-12)) r.fail(what + ": got " + fmt(got) + ", want " + fmt(want));
    };
    const auto truth = labels("abc");
    {
      const auto b = correctness_reward(labels("bca"), truth, cfg);
      expect("[b,c,a] token score", b.token_score, 0.9);
      expect("[b,c,a] continuity bonus", b.continuity_bonus, 0.6);
      expect("[b,c,a] r_correct", b.r_correct, 1.5);
      expect("[b,c,a] oracle r_correct", oracle::brute_r_correct(labels("bca"), truth, cfg), 1.5);
    }
    {
      const auto b = correctness_reward(truth, truth, cfg);
      expect("pred = truth r_correct", b.r_correct, 3.0);
      expect("pred = truth bonus", b.continuity_bonus, 0.0);
    }
    expect("[d,e,f] token score", correctness_reward(labels("def"), truth, cfg).token_score, 0.0);
    expect("[d,a,b] bonus", correctness_reward(labels("dab"), truth, cfg).continuity_bonus, 0.6);
    {
      RewardConfig exact = cfg;
      exact.mode = RewardMode::kExactOnly;
      expect("[b,c,a] exact_only r_correct",
             correctness_reward(labels("bca"), truth, exact).r_correct, 0.0);
    }
    const std::string tags_ok = "<think>t</think><answer>[a,b,c]</answer>";
    expect("formatted perfect r_total", total_reward(tags_ok, truth, cfg).r_total, 2.8);
    expect("formatted all-miss r_total",
           total_reward("<think>t</think><answer>[d,e,f]</answer>", truth, cfg).r_total, 0.1);
    expect("unformatted perfect r_total", total_reward("[a,b,c]", truth, cfg).r_total, 2.7);
  });
}

CheckResult reward_mode_ordering(std::size_t pairs, std::uint64_t seed) {
  return timed("reward mode ordering", [&](CheckResult& r) {
    Rng rng(derive_seed(seed, "mode-ordering"));
    std::size_t strict_lo = 0, strict_hi = 0;
    for (std::size_t n = 0; n < pairs; ++n) {
      const std::size_t pool = 2 + uniform_index(rng, 6);  // 2..7
      const std::size_t k = 1 + uniform_index(rng, std::min<std::size_t>(pool, 4));
      Labels truth;
      for (std::size_t i : sample_without_replacement(pool, k, rng))
        truth.push_back(CandidateLabel::from_index(i));
      // predictions may repeat labels and have the wrong length
      Labels pred;
      const std::size_t len = uniform_index(rng, k + 2);
      for (std::size_t i = 0; i < len; ++i)
        pred.push_back(CandidateLabel::from_index(uniform_index(rng, pool)));
      double score[3];
      for (std::size_t m = 0; m < 3; ++m) {
        RewardConfig cfg;
        cfg.mode = kModes[m];
        score[m] = correctness_reward(pred, truth, cfg).r_correct;
      }
      ++r.instances;
      if (!(score[0] <= score[1] && score[1] <= score[2]))
        r.fail("pred " + show(pred) + " truth " + show(truth) + " breaks the ordering");
      if (score[0] < score[1]) ++strict_lo;
      if (score[1] < score[2]) ++strict_hi;
    }
    if (strict_lo == 0) r.fail("exact_only never strictly below content_aware");
    if (strict_hi == 0) r.fail("content_aware never strictly below content_plus_sequence");
    r.notes.push_back("strict exact_only < content_aware on " + std::to_string(strict_lo) +
                      " pairs, content_aware < content_plus_sequence on " +
                      std::to_string(strict_hi));
  });
}

CheckResult reward_properties(std::size_t max_pool, std::size_t max_k) {
  return timed("reward dominance / monotonicity / scale equivariance", [&](CheckResult& r) {
    const double scales[] = {0.25, 2.0, 3.7};
    for (std::size_t pool = 1; pool <= max_pool; ++pool)
      for (std::size_t k = 1; k <= std::min(pool, max_k); ++k) {
        const auto seqs = oracle::distinct_sequences(pool, k);
        for (RewardMode mode : kModes) {
          RewardConfig cfg;
          cfg.mode = mode;
          for (const auto& truth : seqs) {
            const double top = correctness_reward(truth, truth, cfg).r_correct;
            std::size_t argmax = 0;
            double best = -1.0;
            for (std::size_t p = 0; p < seqs.size(); ++p) {
              const auto& pred = seqs[p];
              const auto b = correctness_reward(pred, truth, cfg);
              ++r.instances;
              if (pred != truth && !(b.r_correct < top))
                r.fail("dominance: " + show(pred) + " ties or beats " + show(truth));
              if (b.r_correct > best) {
                best = b.r_correct;
                argmax = p;
              }
              for (std::size_t i = 0; i < k; ++i) {
                if (b.per_position[i].verdict != Verdict::kMiss) continue;
                Labels fixed = pred;
                fixed[i] = truth[i];
                if (correctness_reward(fixed, truth, cfg).r_correct < b.r_correct)
                  r.fail("monotonicity: fixing position " + std::to_string(i) + " of " +
                         show(pred) + " lowers the score");
              }
              for (double c : scales) {
                RewardConfig scaled = cfg;
                scaled.alpha *= c;
                scaled.gamma *= c;
                const double got = correctness_reward(pred, truth, scaled).r_correct;
                if (!close(got, c * b.r_correct, 1e-12 * std::max(1.0, c * b.r_correct)))
                  r.fail("scale equivariance at c=" + fmt(c) + " for " + show(pred));
              }
            }
            if (seqs[argmax] != truth) r.fail("argmax for " + show(truth) + " is not the truth");
          }
        }
      }
  });
}

// ---------------------------------------------------------------------------
// grpo

namespace {

struct RandomProblem {
  SoftmaxSequencePolicy policy;
  std::vector<RolloutGroup> batch;
  GrpoConfig cfg;
};

// A randomized policy of at most 64 parameters with one random group per
// query. Old/ref log-probabilities are perturbed so clipping and the KL term
// are both exercised.
RandomProblem random_problem(std::uint64_t seed) {
  Rng rng(derive_seed(seed, "grpo-problem"));
  const auto param = (seed % 2 == 0) ? Parameterization::kFactored : Parameterization::kTabular;
  // (pool, K) shapes whose block fits in 64 parameters under both layouts
  const std::pair<std::size_t, std::size_t> shapes[] = {{3, 2}, {4, 2}, {3, 3}, {5, 2}, {4, 3}};
  std::vector<QuerySpec> queries;
  std::size_t used = 0;
  for (std::size_t q = 0; q < 4; ++q) {
    const auto [pool, k] = shapes[uniform_index(rng, std::size(shapes))];
    const std::size_t cost = param == Parameterization::kTabular
                                 ? ActionSpace(pool, k).size()
                                 : k * pool + (k > 1 ? pool * pool : 0);
    if (used + cost > 64) continue;
    used += cost;
    queries.push_back({"q" + std::to_string(q), pool, k});
  }
  RandomProblem out{SoftmaxSequencePolicy(queries, 1.0, param), {}, {}};
  std::vector<double> theta(out.policy.num_params());
  for (double& t : theta) t = 3.0 * uniform01(rng) - 1.5;
  out.policy.set_params(theta);
  out.cfg.kl_coeff = 0.2 * uniform01(rng);
  for (const auto& q : queries) {
    const auto& space = out.policy.action_space(q.query_id);
    RolloutGroup group;
    group.query_id = q.query_id;
    for (std::size_t i = 0; i < out.cfg.group_size_g; ++i) {
      RolloutOutput o;
      const auto a = space.action(uniform_index(rng, space.size()));
      o.action.assign(a.begin(), a.end());
      const double lp = out.policy.logprob(q.query_id, o.action);
      o.logprob_old = lp + 0.8 * uniform01(rng) - 0.4;
      o.logprob_ref = lp + 2.0 * uniform01(rng) - 1.0;
      o.reward = 3.0 * uniform01(rng);
      group.outputs.push_back(std::move(o));
    }
    group.assign_advantages(out.cfg.adv_eps);
    out.batch.push_back(std::move(group));
  }
  return out;
}

}  // namespace

CheckResult grpo_gradient_check(std::size_t seeds, double h, double rel_tol) {
  return timed("GRPO gradient check", [&](CheckResult& r) {
    double worst = 0.0;
    std::size_t max_params = 0;
    for (std::size_t s = 0; s < seeds; ++s) {
      auto prob = random_problem(s);
      const auto analytic = batch_objective_grad(prob.policy, prob.batch, prob.cfg);
      SoftmaxSequencePolicy probe = prob.policy;
      auto objective = [&](std::span<const double> theta) {
        probe.set_params(theta);
        return batch_objective(probe, prob.batch, prob.cfg);
      };
      const auto numeric = oracle::central_differences(objective, prob.policy.params(), h);
      // error relative to the gradient's scale, so near-zero components
      // are not divided by ~0
      double diff = 0.0, scale = 1e-8;
      for (std::size_t i = 0; i < numeric.size(); ++i) {
        diff = std::max(diff, std::abs(analytic[i] - numeric[i]));
        scale = std::max({scale, std::abs(analytic[i]), std::abs(numeric[i])});
      }
      const double rel = diff / scale;
      worst = std::max(worst, rel);
      max_params = std::max(max_params, prob.policy.num_params());
      ++r.instances;
      if (!(rel <= rel_tol))
        r.fail("seed " + std::to_string(s) + ": relative error " + fmt(rel));
    }
    r.notes.push_back("worst relative error " + fmt(worst) + ", largest policy " +
                      std::to_string(max_params) + " parameters");
  });
}

CheckResult advantage_normalization(std::size_t groups, std::size_t g, std::uint64_t seed) {
  return timed("advantage normalization", [&](CheckResult& r) {
    Rng rng(derive_seed(seed, "advantages"));
    const double eps = 1e-6;
    for (std::size_t n = 0; n < groups; ++n) {
      std::vector<double> rewards(g);
      const bool discrete = n % 3 == 0;
      for (double& x : rewards) {
        if (discrete) {
          // values a K=3 rollout can actually score
          const double correct[] = {0.0, 0.3, 0.6, 0.9, 1.0, 1.5, 1.6, 3.0};
          x = 0.1 * static_cast<double>(uniform_index(rng, 2)) +
              0.9 * correct[uniform_index(rng, std::size(correct))];
        } else {
          x = 3.0 * uniform01(rng);
        }
      }
      const auto a = compute_advantages(rewards, eps);
      const auto ref = oracle::reference_advantages(rewards, eps);
      double mean = 0.0, sq = 0.0;
      for (double v : a) mean += v;
      mean /= static_cast<double>(g);
      for (double v : a) sq += (v - mean) * (v - mean);
      const double std_a = std::sqrt(sq / static_cast<double>(g));

      double rmean = 0.0, rsq = 0.0;
      for (double v : rewards) rmean += v;
      rmean /= static_cast<double>(g);
      for (double v : rewards) rsq += (v - rmean) * (v - rmean);
      const double s = std::sqrt(rsq / static_cast<double>(g));
      const bool constant =
          std::all_of(rewards.begin(), rewards.end(), [&](double v) { return v == rewards[0]; });

      const double c = 100.0 * uniform01(rng) - 50.0;
      std::vector<double> shifted = rewards;
      for (double& v : shifted) v += c;
      const auto a_shift = compute_advantages(shifted, eps);

      ++r.instances;
      if (!(std::abs(mean) < 1e-9)) r.fail("group " + std::to_string(n) + ": mean " + fmt(mean));
      if (!constant && !(std::abs(std_a - s / (s + eps)) < 1e-9))
        r.fail("group " + std::to_string(n) + ": std " + fmt(std_a));
      for (std::size_t i = 0; i < g; ++i) {
        if (!(std::abs(a[i] - ref[i]) <= 1e-12 * std::max(1.0, std::abs(ref[i]))))
          r.fail("group " + std::to_string(n) + ": differs from reference arithmetic");
        if (!(std::abs(a[i] - a_shift[i]) <= 1e-9))
          r.fail("group " + std::to_string(n) + ": not shift invariant under c=" + fmt(c));
      }
    }
  });
}

CheckResult grpo_hand_values() {
  return timed("GRPO hand values", [](CheckResult& r) {
    auto expect = [&](const std::string& what, double got, double want, double tol) {
      ++r.instances;
      if (!close(got, want, tol)) r.fail(what + ": got " + fmt(got) + ", want " + fmt(want));
    };
    for (double v : compute_advantages(std::vector<double>(5, 1.0), 1e-6))
      expect("constant group advantage", v, 0.0, 0.0);
    const auto two = compute_advantages(std::vector<double>{0.0, 2.0}, 1e-15);
    expect("[0,2] first", two[0], -1.0, 1e-12);
    expect("[0,2] second", two[1], 1.0, 1e-12);
    const std::vector<double> rw{0.1, 0.9, 2.8, 0.1, 1.5};
    const auto a = compute_advantages(rw, 1e-6);
    const auto ref = oracle::reference_advantages(rw, 1e-6);
    for (std::size_t i = 0; i < a.size(); ++i) expect("reference advantage", a[i], ref[i], 1e-12);

    expect("on-policy surrogate", clipped_surrogate(-1.3, -1.3, 1.7, 0.2), 1.7, 1e-15);
    expect("upper clip", clipped_surrogate(std::log(2.0), 0.0, 1.0, 0.2), 1.2, 1e-12);
    expect("sign flip", clipped_surrogate(std::log(0.5), 0.0, -1.0, 0.2), -0.8, 1e-12);
    // truth table over (rho region, sign of A) with eps = 0.2
    struct Row {
      double rho, adv, want;
    };
    const Row table[] = {{0.5, 1.0, 0.5},   {1.1, 1.0, 1.1},  {2.0, 1.0, 1.2},
                         {0.5, -1.0, -0.8}, {1.1, -1.0, -1.1}, {2.0, -1.0, -2.0}};
    for (const auto& row : table)
      expect("clip truth table rho=" + fmt(row.rho) + " A=" + fmt(row.adv),
             clipped_surrogate(std::log(row.rho), 0.0, row.adv, 0.2), row.want, 1e-12);

    expect("k3 identical", kl_penalty(-2.0, -2.0), 0.0, 0.0);
    expect("k3 d=1", kl_penalty(0.0, 1.0), std::numbers::e - 2.0, 1e-12);
    expect("k3 d=-1", kl_penalty(1.0, 0.0), 1.0 / std::numbers::e, 1e-12);

    RolloutGroup group;
    group.query_id = "toy";
    const double lps[] = {-1.0, -2.0, -0.5};
    const double rws[] = {0.0, 1.0, 3.0};
    for (int i = 0; i < 3; ++i) {
      RolloutOutput o;
      o.logprob_old = lps[i];
      o.logprob_ref = lps[i] - 0.25 * i;
      o.reward = rws[i];
      group.outputs.push_back(o);
    }
    group.assign_advantages(1e-6);
    GrpoConfig cfg;
    cfg.kl_coeff = 0.0;
    expect("on-policy J with kl 0", group_objective(group, lps, cfg), 0.0, 1e-12);
    cfg.kl_coeff = 0.1;
    const double lnew[] = {-0.9, -2.3, -0.5};
    long double want = 0.0L;
    for (int i = 0; i < 3; ++i) {
      const long double rho = std::exp(static_cast<long double>(lnew[i]) - lps[i]);
      const long double adv = group.outputs[i].advantage;
      const long double clipped = std::clamp(rho, 0.8L, 1.2L);
      const long double d = static_cast<long double>(group.outputs[i].logprob_ref) - lnew[i];
      want += std::min(rho * adv, clipped * adv) - 0.1L * (std::exp(d) - d - 1.0L);
    }
    expect("toy J", group_objective(group, lnew, cfg), static_cast<double>(want / 3.0L), 1e-12);
  });
}

// ---------------------------------------------------------------------------
// synthesis

CheckResult dedup_against_rescan(std::size_t seeds) {
  return timed("de-dup selection vs rescan oracle", [&](CheckResult& r) {
    for (std::size_t s = 0; s < seeds; ++s) {
      const auto planted = synthetic::planted_duplicates("planted", 15, 3, 32, 0.99, s);
      const auto got = select_deduplicated_positions(planted.sequence, 0, 15, 0.95);
      const auto want = oracle::rescan_select(planted.sequence, 0, 15, 0.95);
      ++r.instances;
      if (got != want) r.fail("planted seed " + std::to_string(s) + ": differs from rescan");
      for (std::size_t i = 0; i < got.size(); ++i)
        if (planted.sequence.meta(got[i]).frame_index != planted.distinct_frames[i])
          r.fail("planted seed " + std::to_string(s) + ": picked a near-duplicate");

      const auto video = synthetic::video("v", s);
      for (std::size_t start = 0; start < video.size(); start += 7) {
        const auto ref = oracle::rescan_select(video, start, 15, 0.95);
        ++r.instances;
        try {
          const auto pos = select_deduplicated_positions(video, start, 15, 0.95);
          if (pos != ref) r.fail("video seed " + std::to_string(s) + " start " +
                                 std::to_string(start) + ": differs from rescan");
        } catch (const InsufficientFrames&) {
          if (!ref.empty())
            r.fail("video seed " + std::to_string(s) + ": spurious insufficient-frames");
        }
      }
    }
  });
}

namespace {

std::string corpus_bytes(const std::vector<MvpSample>& samples) {
  std::ostringstream os;
  write_jsonl(os, samples);
  return os.str();
}

}  // namespace

CheckResult synthesis_determinism_and_constraints(std::uint64_t seed) {
  return timed("synthesis determinism and constraints", [&](CheckResult& r) {
    const auto videos = synthetic::video_corpus(8, seed);
    SynthesisConfig cfg;
    cfg.rng_seed = seed;
    const std::map<std::size_t, std::size_t> targets{{2, 20}, {3, 50}, {4, 30}};
    SynthesisOptions serial, parallel;
    parallel.jobs = 4;
    const auto a = synthesize_corpus(videos, cfg, targets, serial);
    const auto b = synthesize_corpus(videos, cfg, targets, serial);
    const auto c = synthesize_corpus(videos, cfg, targets, parallel);
    const std::string bytes = corpus_bytes(a.samples);
    ++r.instances;
    if (bytes != corpus_bytes(b.samples)) r.fail("two runs produced different JSONL");
    if (bytes != corpus_bytes(c.samples)) r.fail("jobs=4 produced different JSONL");

    std::map<std::size_t, std::size_t> counts;
    std::map<std::string, const EmbeddingSequence*> by_id;
    for (const auto& v : videos) by_id[v.video_id()] = &v;
    for (const auto& s : a.samples) {
      ++r.instances;
      ++counts[s.mask_count];
      const auto report = validate_sample(s);
      if (!report.empty()) r.fail(s.sample_id + ": " + report.front().invariant);
      if (s.candidates.size() != 6) r.fail(s.sample_id + ": pool size " + std::to_string(s.pool_size()));
      // the selected sequence is the context plus the masked frames
      std::vector<std::uint32_t> selected;
      for (const auto& f : s.context) selected.push_back(f.frame_index);
      std::uint32_t prev = 0;
      for (std::size_t i = 0; i < s.answer.size(); ++i) {
        const FrameRef* f = s.frame_for(s.answer[i]);
        if (f == nullptr) continue;
        if (i > 0 && !(f->frame_index > prev)) r.fail(s.sample_id + ": answer out of order");
        prev = f->frame_index;
        selected.push_back(f->frame_index);
      }
      std::sort(selected.begin(), selected.end());
      const auto& seq = *by_id.at(s.context.front().video_id);
      for (std::size_t i = 1; i < selected.size(); ++i) {
        const double sim = cosine_similarity(seq.vector(seq.position_of(selected[i - 1])),
                                             seq.vector(seq.position_of(selected[i])));
        if (sim > 0.95) r.fail(s.sample_id + ": consecutive selected similarity " + fmt(sim));
      }
    }
    if (counts != targets) r.fail("mask-count targets not met exactly");
    r.notes.push_back(std::to_string(a.samples.size()) + " samples, " +
                      std::to_string(bytes.size()) + " bytes");
  });
}

// ---------------------------------------------------------------------------
// policy-sim

CheckResult training_convergence(const ConvergenceParams& p) {
  return timed("simulated training convergence", [&](CheckResult& r) {
    std::size_t reached = 0;
    std::string steps_seen;
    for (std::size_t s = 0; s < p.seeds; ++s) {
      const auto corpus = synthetic::samples(5, 6, 3, derive_seed(s, "train-corpus"));
      TrainOptions opt;
      opt.steps = p.steps;
      opt.seed = s;
      const auto result = train_sim(corpus, GrpoConfig{}, RewardConfig{}, opt);
      const auto first = result.first_step_reaching(p.threshold);
      ++r.instances;
      if (first) ++reached;
      steps_seen += (steps_seen.empty() ? "" : ",") + (first ? std::to_string(*first) : "-");
      std::vector<double> step, reward;
      for (const auto& e : result.log) {
        step.push_back(static_cast<double>(e.step));
        reward.push_back(e.mean_reward);
      }
      const double rho = oracle::spearman(step, reward);
      if (!(rho > 0.0)) r.fail("seed " + std::to_string(s) + ": Spearman " + fmt(rho));
    }
    if (reached < p.required)
      r.fail("reached " + fmt(p.threshold) + " in " + std::to_string(reached) + "/" +
             std::to_string(p.seeds) + " seeds");
    r.notes.push_back(std::to_string(reached) + "/" + std::to_string(p.seeds) +
                      " seeds reached the threshold; first steps " + steps_seen);
  });
}

CheckResult evaluator_sanity(std::size_t samples) {
  return timed("evaluator sanity", [&](CheckResult& r) {
    const auto corpus = synthetic::samples(samples, 6, 3, derive_seed(0, "eval-corpus"));
    const RewardConfig reward;
    const auto oracle_report =
        evaluate(ScriptedPolicy(ScriptedPolicy::Kind::kOracle), corpus, reward, 1);
    const auto content_report =
        evaluate(ScriptedPolicy(ScriptedPolicy::Kind::kContentOnly), corpus, reward, 2);
    r.instances = 2 * corpus.size();
    if (oracle_report.avg_accuracy != 1.0 || oracle_report.avg_format_rate != 1.0)
      r.fail("oracle accuracy " + fmt(oracle_report.avg_accuracy) + " format " +
             fmt(oracle_report.avg_format_rate));
    if (!(std::abs(content_report.avg_accuracy - 1.0 / 3.0) <= 0.02))
      r.fail("content_only accuracy " + fmt(content_report.avg_accuracy));
    r.notes.push_back("content_only accuracy " + fmt(content_report.avg_accuracy));
  });
}

// ---------------------------------------------------------------------------

std::vector<std::string_view> suite_names() {
  return {"reward", "grpo", "synthesis", "policy", "all"};
}

std::vector<CheckResult> run_suite(std::string_view suite) {
  std::vector<CheckResult> out;
  const bool all = suite == "all";
  bool known = all;
  if (all || suite == "reward") {
    known = true;
    out.push_back(reward_oracle_equivalence());
    out.push_back(reward_hand_fixtures());
    out.push_back(reward_mode_ordering());
    out.push_back(reward_properties());
  }
  if (all || suite == "grpo") {
    known = true;
    out.push_back(grpo_hand_values());
    out.push_back(advantage_normalization());
    out.push_back(grpo_gradient_check());
  }
  if (all || suite == "synthesis") {
    known = true;
    out.push_back(dedup_against_rescan());
    out.push_back(synthesis_determinism_and_constraints());
  }
  if (all || suite == "policy") {
    known = true;
    out.push_back(evaluator_sanity());
    out.push_back(training_convergence());
  }
  if (!known) throw ConfigError("unknown suite '" + std::string(suite) + "'");
  return out;
}

}  // namespace mvp::verify
