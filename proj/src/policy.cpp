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

#include "mvp/policy.hpp"

#include <algorithm>
#include <cmath>

#include "mvp/error.hpp"
#include "mvp/kernels.hpp"

namespace mvp {
namespace {

// n! / (n - m)!
std::size_t falling_factorial(std::size_t n, std::size_t m) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < m; ++i) out *= (n - i);
  return out;
}

constexpr std::string_view kThinkTemplate =
    "Comparing the candidate frames against the frames around the gap.";

}  // namespace

// ---------------------------------------------------------------------------

ActionSpace::ActionSpace(std::size_t pool_size, std::size_t k) : pool_(pool_size), k_(k) {
  if (k == 0 || k > pool_size || pool_size > CandidateLabel::kAlphabetSize)
    throw ConfigError("action space needs 1 <= K <= pool <= 26 (pool " +
                      std::to_string(pool_size) + ", K " + std::to_string(k) + ")");
  count_ = falling_factorial(pool_size, k);
  if (count_ > 1'000'000)
    throw ConfigError("action space of " + std::to_string(count_) + " sequences is too large");
  flat_.reserve(count_ * k);
  std::vector<std::uint8_t> cur;
  std::vector<bool> used(pool_size, false);
  auto rec = [&](auto&& self) -> void {
    if (cur.size() == k_) {
      flat_.insert(flat_.end(), cur.begin(), cur.end());
      return;
    }
    for (std::size_t l = 0; l < pool_; ++l) {
      if (used[l]) continue;
      used[l] = true;
      cur.push_back(static_cast<std::uint8_t>(l));
      self(self);
      cur.pop_back();
      used[l] = false;
    }
  };
  rec(rec);
}

std::size_t ActionSpace::index_of(std::span<const std::uint8_t> action) const {
  if (action.size() != k_)
    throw ActionSpaceMismatch("action of length " + std::to_string(action.size()) +
                              " in a K=" + std::to_string(k_) + " space");
  std::uint32_t used = 0;
  std::size_t index = 0;
  for (std::size_t i = 0; i < k_; ++i) {
    const std::uint8_t a = action[i];
    if (a >= pool_ || (used & (1u << a)))
      throw ActionSpaceMismatch("action is not a duplicate-free sequence over the pool");
    std::size_t rank = 0;
    for (std::uint8_t l = 0; l < a; ++l)
      if (!(used & (1u << l))) ++rank;
    index += rank * falling_factorial(pool_ - i - 1, k_ - i - 1);
    used |= 1u << a;
  }
  return index;
}

// ---------------------------------------------------------------------------

std::string render_response(const std::vector<CandidateLabel>& labels, bool well_formed) {
  if (!well_formed) return "The answer is " + labels_to_string(labels);
  return "<think>" + std::string(kThinkTemplate) + "</think><answer>" +
         labels_to_string(labels) + "</answer>";
}

std::vector<std::uint8_t> to_action(std::span<const CandidateLabel> labels) {
  std::vector<std::uint8_t> out;
  out.reserve(labels.size());
  for (auto l : labels) out.push_back(static_cast<std::uint8_t>(l.index()));
  return out;
}

// ---------------------------------------------------------------------------

ScriptedPolicy::ScriptedPolicy(Kind kind, double format_rate, double noise_p)
    : kind_(kind), format_rate_(format_rate), noise_p_(noise_p) {
  if (!(format_rate >= 0.0 && format_rate <= 1.0))
    throw ConfigError("format_rate must be in [0, 1]");
  if (!(noise_p >= 0.0 && noise_p <= 1.0)) throw ConfigError("noise probability must be in [0, 1]");
}

ScriptedPolicy ScriptedPolicy::parse(std::string_view spec, double format_rate) {
  if (spec == "oracle") return ScriptedPolicy(Kind::kOracle, format_rate);
  if (spec == "random") return ScriptedPolicy(Kind::kRandom, format_rate);
  if (spec == "content_only") return ScriptedPolicy(Kind::kContentOnly, format_rate);
  if (spec.starts_with("noisy:")) {
    const std::string p_text(spec.substr(6));
    try {
      std::size_t used = 0;
      const double p = std::stod(p_text, &used);
      if (used == p_text.size()) return ScriptedPolicy(Kind::kNoisy, format_rate, p);
    } catch (const std::exception&) {
    }
  }
  throw ConfigError("unknown scripted policy '" + std::string(spec) +
                    "' (expected oracle, random, content_only or noisy:<p>)");
}

std::string ScriptedPolicy::name() const {
  switch (kind_) {
    case Kind::kOracle:
      return "oracle";
    case Kind::kRandom:
      return "random";
    case Kind::kContentOnly:
      return "content_only";
    case Kind::kNoisy:
      return "noisy:" + std::to_string(noise_p_);
  }
  return "scripted";
}

Emission ScriptedPolicy::act(const MvpSample& sample, Rng& rng) const {
  const std::size_t pool = sample.pool_size();
  const std::size_t k = sample.answer.size();
  if (pool == 0 || k == 0 || pool > CandidateLabel::kAlphabetSize)
    throw ActionSpaceMismatch("sample '" + sample.sample_id + "' has an empty pool or answer");
  Emission e;
  switch (kind_) {
    case Kind::kOracle:
      e.labels = sample.answer;
      break;
    case Kind::kRandom:
      for (std::size_t i : sample_without_replacement(pool, std::min(k, pool), rng))
        e.labels.push_back(CandidateLabel::from_index(i));
      break;
    case Kind::kContentOnly:
      e.labels = sample.answer;
      shuffle(e.labels, rng);
      break;
    case Kind::kNoisy:
      e.labels = sample.answer;
      for (auto& l : e.labels)
        if (bernoulli(rng, noise_p_)) l = CandidateLabel::from_index(uniform_index(rng, pool));
      break;
  }
  e.well_formed = format_rate_ >= 1.0 || bernoulli(rng, format_rate_);
  e.text = render_response(e.labels, e.well_formed);
  return e;
}

// ---------------------------------------------------------------------------

std::string_view to_string(Parameterization p) {
  return p == Parameterization::kTabular ? "tabular" : "factored";
}

Parameterization parse_parameterization(std::string_view name) {
  if (name == "tabular") return Parameterization::kTabular;
  if (name == "factored") return Parameterization::kFactored;
  throw ConfigError("unknown policy parameterization '" + std::string(name) +
                    "' (expected tabular or factored)");
}

// Action space plus, for every action, the parameter indices (relative to
// the query's block) whose sum is that action's logit.
struct SoftmaxSequencePolicy::Block {
  ActionSpace space;
  std::size_t num_params = 0;
  std::size_t per_action = 0;
  std::vector<std::uint32_t> features;

  Block(std::size_t pool, std::size_t k, Parameterization p) : space(pool, k) {
    if (p == Parameterization::kTabular) {
      num_params = space.size();
      per_action = 1;
      features.resize(space.size());
      for (std::size_t a = 0; a < space.size(); ++a) features[a] = static_cast<std::uint32_t>(a);
      return;
    }
    // u[i][label] at i * pool + label, then w[prev][next] after the K * pool
    // position block
    num_params = k * pool + (k > 1 ? pool * pool : 0);
    per_action = 2 * k - 1;
    features.reserve(space.size() * per_action);
    for (std::size_t a = 0; a < space.size(); ++a) {
      auto y = space.action(a);
      for (std::size_t i = 0; i < k; ++i)
        features.push_back(static_cast<std::uint32_t>(i * pool + y[i]));
      for (std::size_t i = 0; i + 1 < k; ++i)
        features.push_back(static_cast<std::uint32_t>(k * pool + y[i] * pool + y[i + 1]));
    }
  }

  std::span<const std::uint32_t> of(std::size_t action) const {
    return {features.data() + action * per_action, per_action};
  }
};

SoftmaxSequencePolicy::SoftmaxSequencePolicy(std::vector<QuerySpec> queries,
                                             double temperature,
                                             Parameterization parameterization)
    : queries_(std::move(queries)),
      temperature_(temperature),
      parameterization_(parameterization) {
  if (!(temperature >= 0.0)) throw ConfigError("temperature must be >= 0");
  std::size_t offset = 0;
  for (const auto& q : queries_) {
    auto key = std::make_pair(q.pool_size, q.k);
    auto it = blocks_.find(key);
    if (it == blocks_.end())
      it = blocks_.emplace(key, std::make_shared<const Block>(q.pool_size, q.k, parameterization))
               .first;
    if (!slots_.emplace(q.query_id, Slot{offset, it->second.get()}).second)
      throw DataError("duplicate query id '" + q.query_id + "'");
    offset += it->second->num_params;
  }
  params_.assign(offset, 0.0);
}

SoftmaxSequencePolicy SoftmaxSequencePolicy::for_corpus(std::span<const MvpSample> corpus,
                                                        double temperature,
                                                        Parameterization parameterization) {
  std::vector<QuerySpec> q;
  q.reserve(corpus.size());
  for (const auto& s : corpus) q.push_back({s.sample_id, s.pool_size(), s.answer.size()});
  return SoftmaxSequencePolicy(std::move(q), temperature, parameterization);
}

void SoftmaxSequencePolicy::set_temperature(double t) {
  if (!(t >= 0.0)) throw ConfigError("temperature must be >= 0");
  temperature_ = t;
}

const SoftmaxSequencePolicy::Slot& SoftmaxSequencePolicy::slot(
    const std::string& query_id) const {
  auto it = slots_.find(query_id);
  if (it == slots_.end()) throw ActionSpaceMismatch("unknown query '" + query_id + "'");
  return it->second;
}

const ActionSpace& SoftmaxSequencePolicy::action_space(const std::string& query_id) const {
  return slot(query_id).block->space;
}

void SoftmaxSequencePolicy::logits(const Slot& s, std::vector<double>& out) const {
  const Block& b = *s.block;
  const double* theta = params_.data() + s.offset;
  out.resize(b.space.size());
  for (std::size_t a = 0; a < out.size(); ++a) {
    double v = 0.0;
    for (std::uint32_t f : b.of(a)) v += theta[f];
    out[a] = v;
  }
}

std::vector<double> SoftmaxSequencePolicy::logits(const std::string& query_id) const {
  std::vector<double> out;
  logits(slot(query_id), out);
  return out;
}

void SoftmaxSequencePolicy::log_probabilities(const Slot& s, std::vector<double>& out) const {
  logits(s, out);
  kernels::scale(out, 1.0 / effective_temperature(), out);
  const double m = kernels::max(out);
  double z = 0.0;
  for (double v : out) z += std::exp(v - m);
  const double lse = m + std::log(z);
  for (double& v : out) v -= lse;
}

std::vector<double> SoftmaxSequencePolicy::probabilities(const std::string& query_id) const {
  std::vector<double> lp;
  log_probabilities(slot(query_id), lp);
  for (double& v : lp) v = std::exp(v);
  return lp;
}

std::size_t SoftmaxSequencePolicy::argmax_action(const std::string& query_id) const {
  const auto z = logits(query_id);
  return static_cast<std::size_t>(std::max_element(z.begin(), z.end()) - z.begin());
}

double SoftmaxSequencePolicy::exact_kl(const std::string& query_id,
                                       const SoftmaxSequencePolicy& other) const {
  std::vector<double> lp, lq;
  log_probabilities(slot(query_id), lp);
  other.log_probabilities(other.slot(query_id), lq);
  if (lp.size() != lq.size()) throw ActionSpaceMismatch("policies disagree on '" + query_id + "'");
  double kl = 0.0;
  for (std::size_t i = 0; i < lp.size(); ++i) kl += std::exp(lp[i]) * (lp[i] - lq[i]);
  return kl;
}

Emission SoftmaxSequencePolicy::act(const MvpSample& sample, Rng& rng) const {
  const auto& s = slot(sample.sample_id);
  const ActionSpace& space = s.block->space;
  if (space.pool_size() != sample.pool_size() || space.k() != sample.answer.size())
    throw ActionSpaceMismatch("sample '" + sample.sample_id +
                              "' does not match the policy's action space");
  std::size_t index;
  std::vector<double> lp;
  log_probabilities(s, lp);
  if (temperature_ == 0.0) {
    index = argmax_action(sample.sample_id);
  } else {
    double u = uniform01(rng);
    index = lp.size() - 1;
    for (std::size_t i = 0; i < lp.size(); ++i) {
      const double p = std::exp(lp[i]);
      if (u < p) {
        index = i;
        break;
      }
      u -= p;
    }
  }
  Emission e;
  for (std::uint8_t a : space.action(index)) e.labels.push_back(CandidateLabel::from_index(a));
  e.text = render_response(e.labels, true);
  e.logprob = lp[index];
  return e;
}

void SoftmaxSequencePolicy::set_params(std::span<const double> params) {
  if (params.size() != params_.size())
    throw LengthMismatch("expected " + std::to_string(params_.size()) + " parameters, got " +
                         std::to_string(params.size()));
  std::copy(params.begin(), params.end(), params_.begin());
}

double SoftmaxSequencePolicy::logprob(const std::string& query_id,
                                      std::span<const std::uint8_t> action) const {
  const auto& s = slot(query_id);
  const std::size_t a = s.block->space.index_of(action);
  std::vector<double> lp;
  log_probabilities(s, lp);
  return lp[a];
}

void SoftmaxSequencePolicy::accumulate_logprob_grad(const std::string& query_id,
                                                    std::span<const std::uint8_t> action,
                                                    double scale,
                                                    std::span<double> grad) const {
  const auto& s = slot(query_id);
  const Block& b = *s.block;
  const std::size_t a = b.space.index_of(action);
  std::vector<double> p;
  log_probabilities(s, p);
  // d log pi(a) / d theta_f = (phi_f(a) - E_pi[phi_f]) / T
  const double c = scale / effective_temperature();
  std::span<double> g = grad.subspan(s.offset, b.num_params);
  for (std::size_t j = 0; j < p.size(); ++j) {
    const double w = -c * std::exp(p[j]);
    for (std::uint32_t f : b.of(j)) g[f] += w;
  }
  for (std::uint32_t f : b.of(a)) g[f] += c;
}

nlohmann::ordered_json SoftmaxSequencePolicy::to_json() const {
  nlohmann::ordered_json q = nlohmann::ordered_json::array();
  for (const auto& spec : queries_)
    q.push_back({{"query_id", spec.query_id}, {"pool_size", spec.pool_size}, {"k", spec.k}});
  return {{"type", "softmax_sequence"},
          {"parameterization", mvp::to_string(parameterization_)},
          {"temperature", temperature_},
          {"queries", std::move(q)},
          {"params", params_}};
}

SoftmaxSequencePolicy SoftmaxSequencePolicy::from_json(const nlohmann::ordered_json& j) {
  try {
    if (j.at("type").get<std::string>() != "softmax_sequence")
      throw DataError("policy file is not a softmax_sequence policy");
    std::vector<QuerySpec> queries;
    for (const auto& q : j.at("queries"))
      queries.push_back({q.at("query_id").get<std::string>(), q.at("pool_size").get<std::size_t>(),
                         q.at("k").get<std::size_t>()});
    SoftmaxSequencePolicy policy(
        std::move(queries), j.at("temperature").get<double>(),
        parse_parameterization(j.value("parameterization", std::string("factored"))));
    policy.set_params(j.at("params").get<std::vector<double>>());
    return policy;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("policy file: ") + e.what());
  } catch (const LengthMismatch& e) {
    throw DataError(std::string("policy file: ") + e.what());
  }
}

// ---------------------------------------------------------------------------

RolloutGroup rollout(const SequencePolicy& policy, const MvpSample& sample, std::size_t g,
                     Rng& rng) {
  RolloutGroup group;
  group.query_id = sample.sample_id;
  group.outputs.reserve(g);
  for (std::size_t i = 0; i < g; ++i) {
    Emission e = policy.act(sample, rng);
    RolloutOutput out;
    out.action = to_action(e.labels);
    out.response = std::move(e.text);
    out.logprob_old = e.logprob.value_or(0.0);
    group.outputs.push_back(std::move(out));
  }
  return group;
}

double PolicyRolloutScorer::score(const MvpSample& sample, std::size_t rollout_index) {
  Rng rng(derive_seed(seed_, sample.sample_id, rollout_index));
  const Emission e = policy_.act(sample, rng);
  return correctness_reward(e.labels, sample.answer, reward_).r_correct;
}

}  // namespace mvp
