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

#include "commands.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include "mvp/checks.hpp"
#include "mvp/dataset.hpp"
#include "mvp/error.hpp"
#include "mvp/manifest.hpp"
#include "mvp/parallel.hpp"
#include "mvp/policy.hpp"
#include "mvp/prompt.hpp"
#include "mvp/random.hpp"
#include "mvp/reward.hpp"
#include "mvp/synthesis.hpp"
#include "mvp/training.hpp"

namespace mvp::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

std::size_t parse_count(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != s.size() || s.front() == '-')
    throw ConfigError(what + ": '" + s + "' is not a non-negative integer");
  return static_cast<std::size_t>(v);
}

// "2=20,3=50" -> {2: 20, 3: 50}
template <typename V, typename Parse>
std::map<std::size_t, V> parse_pairs(const std::string& text, const std::string& what,
                                     Parse parse_value) {
  std::map<std::size_t, V> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw ConfigError(what + ": expected m=value pairs, got '" + item + "'");
    const std::size_t m = parse_count(item.substr(0, eq), what);
    if (!out.emplace(m, parse_value(item.substr(eq + 1))).second)
      throw ConfigError(what + ": mask count " + std::to_string(m) + " given twice");
  }
  if (out.empty()) throw ConfigError(what + ": empty");
  return out;
}

std::map<std::size_t, std::size_t> parse_targets(const std::string& text) {
  return parse_pairs<std::size_t>(text, "--target",
                                  [](const std::string& v) { return parse_count(v, "--target"); });
}

std::map<std::size_t, double> parse_weights(const std::string& text) {
  return parse_pairs<double>(text, "--mask-weights", [](const std::string& v) {
    std::size_t pos = 0;
    double w = 0.0;
    try {
      w = std::stod(v, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != v.size())
      throw ConfigError("--mask-weights: '" + v + "' is not a number");
    return w;
  });
}

// Flag, then config file, then MVP_FORGE_SEED, then 0.
std::pair<std::uint64_t, ValueSource> resolve_seed(const CLI::Option* flag,
                                                   std::uint64_t flag_value,
                                                   std::optional<std::uint64_t> file_value) {
  if (flag != nullptr && flag->count() > 0) return {flag_value, ValueSource::kFlag};
  if (file_value) return {*file_value, ValueSource::kFile};
  if (const char* env = std::getenv(kSeedEnv); env != nullptr && *env != '\0')
    return {parse_count(env, kSeedEnv), ValueSource::kEnv};
  return {0, ValueSource::kDefault};
}

ValueSource source_of(const CLI::Option* opt) {
  return opt->count() > 0 ? ValueSource::kFlag : ValueSource::kDefault;
}

RunManifest start_manifest(const std::string& command, const Invocation& inv) {
  RunManifest m;
  m.command = command;
  m.argv = inv.argv;
  m.started_at = utc_timestamp();
  return m;
}

std::ofstream open_output(const fs::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

void finish(const fs::path& out_dir, RunManifest& m) {
  const auto path = write_manifest(out_dir, m);
  std::cerr << "manifest: " << path.string() << '\n';
}

CLI::Option* add_jobs(CLI::App& sub, std::size_t& jobs) {
  jobs = default_jobs();
  return sub.add_option("--jobs", jobs, "Worker threads (default: logical cores)")
      ->check(CLI::PositiveNumber);
}

// ---------------------------------------------------------------------------
// shared reward flags

struct RewardFlags {
  std::string mode = std::string(to_string(RewardConfig{}.mode));
  RewardConfig cfg;
  CLI::Option* o_mode = nullptr;
  CLI::Option* o_alpha = nullptr;
  CLI::Option* o_gamma = nullptr;
  CLI::Option* o_beta = nullptr;
  CLI::Option* o_min = nullptr;
  CLI::Option* o_dedup = nullptr;

  void add(CLI::App& sub) {
    o_mode = sub.add_option("--reward-mode", mode,
                            "exact_only | content_aware | content_plus_sequence")
                 ->capture_default_str();
    o_alpha = sub.add_option("--alpha", cfg.alpha, "Exact-match weight")->capture_default_str();
    o_gamma = sub.add_option("--gamma", cfg.gamma, "Content-match and continuity weight")
                  ->capture_default_str();
    o_beta = sub.add_option("--beta-fmt", cfg.beta_fmt, "Format share of the total reward")
                 ->capture_default_str();
    o_min = sub.add_option("--min-substring-len", cfg.min_substring_len,
                           "Shortest run that earns the continuity bonus")
                ->capture_default_str();
    o_dedup = sub.add_flag("--dedup-content-credit", cfg.dedup_content_credit,
                           "Give content credit to a repeated label only once");
  }

  RewardConfig resolve(RunManifest& m) {
    cfg.mode = parse_reward_mode(mode);
    cfg.validate();
    m.set("reward.mode", mode, source_of(o_mode));
    m.set("reward.alpha", cfg.alpha, source_of(o_alpha));
    m.set("reward.gamma", cfg.gamma, source_of(o_gamma));
    m.set("reward.beta_fmt", cfg.beta_fmt, source_of(o_beta));
    m.set("reward.min_substring_len", cfg.min_substring_len, source_of(o_min));
    m.set("reward.dedup_content_credit", cfg.dedup_content_credit, source_of(o_dedup));
    return cfg;
  }
};

}  // namespace

// ---------------------------------------------------------------------------
// synthesize

Runner add_synthesize(CLI::App& app) {
  struct Opts {
    std::string config_file, embeddings, out, targets, weights, filter_policy;
    SynthesisConfig cfg;
    std::uint64_t seed = 0;
    std::size_t filter_rollouts = kDefaultFilterRollouts;
    std::size_t jobs = 1;
    bool non_contiguous = false;
    bool prompts = false;
    CLI::Option *o_jobs, *o_kappa, *o_n, *o_pool, *o_weights, *o_window, *o_seed, *o_noncontig;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("synthesize", "Build an MVP corpus from .mvpe embedding files");
  sub->add_option("--config", o->config_file, "JSON file with SynthesisConfig fields")
      ->check(CLI::ExistingFile);
  sub->add_option("--embeddings", o->embeddings, "Directory of <video_id>.mvpe files")->required();
  sub->add_option("--out", o->out, "Output directory")->required();
  sub->add_option("--target", o->targets, "Samples per mask count, e.g. 2=20,3=50,4=30")
      ->required();
  o->o_kappa = sub->add_option("--kappa", o->cfg.kappa, "Redundancy threshold");
  o->o_n = sub->add_option("--sequence-len", o->cfg.sequence_len_n, "Frames per selected sequence");
  o->o_pool = sub->add_option("--pool-size", o->cfg.pool_size, "Candidates per sample");
  o->o_weights = sub->add_option("--mask-weights", o->weights, "Mask-count weights, e.g. 2=1,3=2,4=1");
  o->o_window = sub->add_option("--vicinity-window", o->cfg.vicinity_window_s,
                                "Distractor window in seconds");
  o->o_seed = sub->add_option("--seed", o->seed, "RNG seed (else config, then $MVP_FORGE_SEED)");
  o->o_noncontig = sub->add_flag("--non-contiguous-mask", o->non_contiguous,
                                 "Mask an arbitrary subset instead of a contiguous run");
  sub->add_option("--filter-policy", o->filter_policy,
                  "Quality-filter scorer: oracle | random | content_only | noisy:<p>");
  sub->add_option("--filter-rollouts", o->filter_rollouts, "Rollouts per sample for the filter")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  sub->add_flag("--prompts", o->prompts, "Also write rendered training prompts (prompts.jsonl)");
  o->o_jobs = add_jobs(*sub, o->jobs);

  return [o](const Invocation& inv) {
    RunManifest m = start_manifest("synthesize", inv);
    const fs::path out_dir = o->out;

    SynthesisConfig file_cfg;
    Json file_json = Json::object();
    if (!o->config_file.empty()) {
      std::ifstream in(o->config_file);
      try {
        file_json = Json::parse(in);
      } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config " + o->config_file + ": " + e.what());
      }
      file_cfg = synthesis_config_from_json(file_json);
      m.add_input(o->config_file);
    }
    auto pick = [&](const char* key, const CLI::Option* flag) {
      if (flag->count() > 0) return ValueSource::kFlag;
      if (file_json.contains(key)) return ValueSource::kFile;
      return ValueSource::kDefault;
    };
    SynthesisConfig cfg = file_cfg;
    if (o->o_kappa->count()) cfg.kappa = o->cfg.kappa;
    if (o->o_n->count()) cfg.sequence_len_n = o->cfg.sequence_len_n;
    if (o->o_pool->count()) cfg.pool_size = o->cfg.pool_size;
    if (o->o_weights->count()) cfg.mask_count_weights = parse_weights(o->weights);
    if (o->o_window->count()) cfg.vicinity_window_s = o->cfg.vicinity_window_s;
    if (o->o_noncontig->count()) cfg.contiguous_mask = false;
    std::optional<std::uint64_t> file_seed;
    if (file_json.contains("rng_seed")) file_seed = file_cfg.rng_seed;
    const auto [seed, seed_source] = resolve_seed(o->o_seed, o->seed, file_seed);
    cfg.rng_seed = seed;
    cfg.validate();
    const auto targets = parse_targets(o->targets);

    const Json snapshot = to_json(cfg);
    m.set("kappa", snapshot["kappa"], pick("kappa", o->o_kappa));
    m.set("sequence_len_n", snapshot["sequence_len_n"], pick("sequence_len_n", o->o_n));
    m.set("pool_size", snapshot["pool_size"], pick("pool_size", o->o_pool));
    m.set("mask_count_weights", snapshot["mask_count_weights"],
          pick("mask_count_weights", o->o_weights));
    m.set("vicinity_window_s", snapshot["vicinity_window_s"],
          pick("vicinity_window_s", o->o_window));
    m.set("contiguous_mask", snapshot["contiguous_mask"],
          pick("contiguous_mask", o->o_noncontig));
    m.set("rng_seed", seed, seed_source);
    Json target_json = Json::object();
    for (auto [k, v] : targets) target_json[std::to_string(k)] = v;
    m.set("targets", target_json, ValueSource::kFlag);
    m.set("jobs", o->jobs, source_of(o->o_jobs));
    m.seed = seed;

    const auto videos = load_embedding_dir(o->embeddings);
    m.add_input(o->embeddings);

    std::optional<ScriptedPolicy> filter_policy;
    std::optional<PolicyRolloutScorer> scorer;
    SynthesisOptions sopt;
    sopt.jobs = o->jobs;
    sopt.filter_rollouts = o->filter_rollouts;
    if (!o->filter_policy.empty()) {
      filter_policy.emplace(ScriptedPolicy::parse(o->filter_policy));
      scorer.emplace(*filter_policy, RewardConfig{}, derive_seed(seed, "quality-filter"));
      sopt.scorer = &*scorer;
      m.set("filter_policy", o->filter_policy, ValueSource::kFlag);
      m.set("filter_rollouts", o->filter_rollouts, ValueSource::kFlag);
    }

    const Corpus corpus = synthesize_corpus(videos, cfg, targets, sopt);
    fs::create_directories(out_dir);
    const fs::path corpus_path = out_dir / "corpus.jsonl";
    write_corpus(corpus_path, corpus.samples);
    const fs::path report_path = out_dir / "synthesis_report.json";
    open_output(report_path) << to_json(corpus.report).dump(2) << '\n';
    m.outputs = {corpus_path.string(), report_path.string()};
    if (o->prompts) {
      const fs::path prompt_path = out_dir / "prompts.jsonl";
      auto out = open_output(prompt_path);
      const auto tpl = PromptTemplate::training_default();
      for (const auto& s : corpus.samples)
        out << Json{{"sample_id", s.sample_id}, {"prompt", render_prompt(s, tpl)}}.dump() << '\n';
      m.outputs.push_back(prompt_path.string());
    }
    finish(out_dir, m);

    std::cout << "wrote " << corpus.samples.size() << " samples to " << corpus_path.string()
              << '\n';
    for (auto [k, want] : targets) {
      const auto it = corpus.report.achieved.find(k);
      std::cout << "  m=" << k << ": " << (it == corpus.report.achieved.end() ? 0 : it->second)
                << "/" << want << '\n';
    }
    if (!corpus.report.targets_met)
      std::cerr << "warning: inputs exhausted before every target was met\n";
    return kExitOk;
  };
}

// ---------------------------------------------------------------------------
// score

Runner add_score(CLI::App& app) {
  struct Opts {
    std::string corpus, responses, out = ".";
    RewardFlags reward;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("score", "Score responses against a corpus");
  sub->add_option("--corpus", o->corpus, "Corpus JSONL")->required();
  sub->add_option("--responses", o->responses,
                  "JSONL of {\"sample_id\", \"response_text\"} records")
      ->required();
  sub->add_option("--out", o->out, "Output directory (scores.jsonl)")->capture_default_str();
  o->reward.add(*sub);

  return [o](const Invocation& inv) {
    RunManifest m = start_manifest("score", inv);
    const RewardConfig cfg = o->reward.resolve(m);
    const auto samples = read_corpus(o->corpus);
    std::map<std::string, const MvpSample*> by_id;
    for (const auto& s : samples) by_id[s.sample_id] = &s;
    m.add_input(o->corpus);

    std::ifstream in(o->responses);
    if (!in) throw DataError("cannot read " + o->responses);
    m.add_input(o->responses);
    const fs::path out_dir = o->out;
    const fs::path out_path = out_dir / "scores.jsonl";
    auto out = open_output(out_path);
    std::string line;
    std::size_t line_no = 0, scored = 0;
    double total = 0.0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      std::string id, text;
      try {
        const auto j = Json::parse(line);
        id = j.at("sample_id").get<std::string>();
        text = j.at("response_text").get<std::string>();
      } catch (const nlohmann::json::exception& e) {
        throw DataError(o->responses + " line " + std::to_string(line_no) + ": " + e.what());
      }
      const auto it = by_id.find(id);
      if (it == by_id.end())
        throw DataError(o->responses + " line " + std::to_string(line_no) +
                        ": unknown sample_id '" + id + "'");
      const auto b = total_reward(text, it->second->answer, cfg);
      Json row{{"sample_id", id}};
      const Json fields = to_json(b);
      for (const auto& [k, v] : fields.items()) row[k] = v;
      out << row.dump() << '\n';
      total += b.r_total;
      ++scored;
    }
    out.close();
    m.outputs = {out_path.string()};
    finish(out_dir, m);
    std::cout << "scored " << scored << " responses";
    if (scored > 0) std::cout << ", mean r_total " << total / static_cast<double>(scored);
    std::cout << '\n';
    return kExitOk;
  };
}

// ---------------------------------------------------------------------------
// train-sim

Runner add_train_sim(CLI::App& app) {
  struct Opts {
    std::string corpus, out = ".", parameterization = "factored";
    GrpoConfig grpo;
    TrainOptions train;
    RewardFlags reward;
    bool csv = false;
    CLI::Option *o_jobs, *o_seed, *o_steps, *o_g, *o_clip, *o_kl, *o_lr, *o_temp, *o_param;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("train-sim", "Run simulated GRPO training on a corpus");
  sub->add_option("--corpus", o->corpus, "Corpus JSONL")->required();
  o->o_steps = sub->add_option("--steps", o->train.steps, "Training steps")->capture_default_str();
  o->o_seed = sub->add_option("--seed", o->train.seed, "RNG seed (else $MVP_FORGE_SEED)");
  o->o_g = sub->add_option("--group-size", o->grpo.group_size_g, "Rollouts per query (G)")
               ->capture_default_str();
  o->o_clip = sub->add_option("--clip-eps", o->grpo.clip_eps, "PPO clip width")
                  ->capture_default_str();
  o->o_kl = sub->add_option("--kl-coeff", o->grpo.kl_coeff, "KL penalty weight")
                ->capture_default_str();
  o->o_lr = sub->add_option("--learning-rate", o->grpo.learning_rate, "Gradient-ascent step size")
                ->capture_default_str();
  o->o_temp = sub->add_option("--temperature", o->grpo.temperature, "Rollout temperature")
                  ->capture_default_str();
  o->o_param = sub->add_option("--parameterization", o->parameterization,
                               "Policy logits: factored | tabular")
                   ->capture_default_str();
  o->reward.add(*sub);
  sub->add_option("--out", o->out, "Output directory (train_log.jsonl, policy.json)")
      ->capture_default_str();
  sub->add_flag("--csv", o->csv, "Also write train_log.csv");
  sub->add_flag("--record-wall-time", o->train.record_wall_time,
                "Record wall_ms per step (logs are then not byte-reproducible)");
  o->o_jobs = add_jobs(*sub, o->train.jobs);

  return [o](const Invocation& inv) {
    RunManifest m = start_manifest("train-sim", inv);
    const RewardConfig reward = o->reward.resolve(m);
    GrpoConfig grpo = o->grpo;
    grpo.validate();
    TrainOptions train = o->train;
    const auto [seed, seed_source] = resolve_seed(o->o_seed, train.seed, std::nullopt);
    train.seed = seed;
    train.parameterization = parse_parameterization(o->parameterization);
    m.seed = seed;
    m.set("steps", train.steps, source_of(o->o_steps));
    m.set("seed", seed, seed_source);
    m.set("grpo.group_size_g", grpo.group_size_g, source_of(o->o_g));
    m.set("grpo.clip_eps", grpo.clip_eps, source_of(o->o_clip));
    m.set("grpo.kl_coeff", grpo.kl_coeff, source_of(o->o_kl));
    m.set("grpo.adv_eps", grpo.adv_eps, ValueSource::kDefault);
    m.set("grpo.learning_rate", grpo.learning_rate, source_of(o->o_lr));
    m.set("grpo.temperature", grpo.temperature, source_of(o->o_temp));
    m.set("parameterization", o->parameterization, source_of(o->o_param));
    m.set("jobs", train.jobs, source_of(o->o_jobs));

    const auto corpus = read_corpus(o->corpus);
    m.add_input(o->corpus);
    const TrainResult result = train_sim(corpus, grpo, reward, train);

    const fs::path out_dir = o->out;
    const fs::path log_path = out_dir / "train_log.jsonl";
    {
      auto out = open_output(log_path);
      write_train_log(out, train_log_header(grpo, reward, train, corpus.size()), result.log);
    }
    const fs::path policy_path = out_dir / "policy.json";
    open_output(policy_path) << result.policy.to_json().dump() << '\n';
    m.outputs = {log_path.string(), policy_path.string()};
    if (o->csv) {
      const fs::path csv_path = out_dir / "train_log.csv";
      auto out = open_output(csv_path);
      write_train_log_csv(out, result.log);
      m.outputs.push_back(csv_path.string());
    }
    finish(out_dir, m);

    const auto& last = result.log.back();
    const double threshold = 0.9 * reward.alpha;
    std::cout << "steps " << result.log.size() << ", final mean_reward " << last.mean_reward
              << ", final mean r_correct " << last.mean_r_correct << '\n';
    if (const auto first = result.first_step_reaching(threshold))
      std::cout << "mean r_correct reached " << threshold << " at step " << *first << '\n';
    else
      std::cout << "mean r_correct never reached " << threshold << '\n';
    return kExitOk;
  };
}

// ---------------------------------------------------------------------------
// evaluate

Runner add_evaluate(CLI::App& app) {
  struct Opts {
    std::string corpus, policy, out = ".";
    double format_rate = 1.0;
    double temperature = 0.0;
    std::uint64_t seed = 0;
    std::size_t jobs = 1;
    bool per_sample = false;
    RewardFlags reward;
    CLI::Option *o_jobs, *o_seed, *o_fmt, *o_temp;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("evaluate", "Measure accuracy and format rate of a policy");
  sub->add_option("--corpus", o->corpus, "Corpus JSONL")->required();
  sub->add_option("--policy", o->policy,
                  "oracle | random | content_only | noisy:<p> | path to a train-sim policy.json")
      ->required();
  o->o_fmt = sub->add_option("--format-rate", o->format_rate,
                             "Well-formed output probability for scripted policies")
                 ->capture_default_str()
                 ->check(CLI::Range(0.0, 1.0));
  o->o_temp = sub->add_option("--temperature", o->temperature,
                              "Sampling temperature for a trained policy (0 = greedy)")
                  ->capture_default_str();
  o->o_seed = sub->add_option("--seed", o->seed, "RNG seed (else $MVP_FORGE_SEED)");
  sub->add_flag("--per-sample", o->per_sample, "Include per-sample breakdowns");
  sub->add_option("--out", o->out, "Output directory (evaluation.json)")->capture_default_str();
  o->reward.add(*sub);
  o->o_jobs = add_jobs(*sub, o->jobs);

  return [o](const Invocation& inv) {
    RunManifest m = start_manifest("evaluate", inv);
    const RewardConfig reward = o->reward.resolve(m);
    const auto [seed, seed_source] = resolve_seed(o->o_seed, o->seed, std::nullopt);
    m.seed = seed;
    m.set("seed", seed, seed_source);
    m.set("policy", o->policy, ValueSource::kFlag);
    m.set("jobs", o->jobs, source_of(o->o_jobs));

    const auto corpus = read_corpus(o->corpus);
    m.add_input(o->corpus);

    std::unique_ptr<SequencePolicy> policy;
    if (fs::is_regular_file(o->policy)) {
      std::ifstream in(o->policy);
      Json j;
      try {
        j = Json::parse(in);
      } catch (const nlohmann::json::exception& e) {
        throw DataError("policy " + o->policy + ": " + e.what());
      }
      auto trained = std::make_unique<SoftmaxSequencePolicy>(SoftmaxSequencePolicy::from_json(j));
      trained->set_temperature(o->temperature);
      m.set("temperature", o->temperature, source_of(o->o_temp));
      m.add_input(o->policy);
      policy = std::move(trained);
    } else {
      policy = std::make_unique<ScriptedPolicy>(ScriptedPolicy::parse(o->policy, o->format_rate));
      m.set("format_rate", o->format_rate, source_of(o->o_fmt));
    }

    const EvalReport report = evaluate(*policy, corpus, reward, seed, o->jobs);
    const fs::path out_dir = o->out;
    const fs::path out_path = out_dir / "evaluation.json";
    Json j{{"policy", policy->name()}};
    const Json fields = to_json(report, o->per_sample);
    for (const auto& [k, v] : fields.items()) j[k] = v;
    open_output(out_path) << j.dump(2) << '\n';
    m.outputs = {out_path.string()};
    finish(out_dir, m);

    std::cout << "samples " << report.samples.size() << ", avg_accuracy " << report.avg_accuracy
              << ", avg_sequence_accuracy " << report.avg_sequence_accuracy
              << ", avg_format_rate " << report.avg_format_rate << '\n';
    return kExitOk;
  };
}

// ---------------------------------------------------------------------------
// verify

Runner add_verify(CLI::App& app) {
  struct Opts {
    std::string suite = "all", out = ".";
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("verify", "Run the oracle verification suites");
  std::vector<std::string> names;
  for (auto n : verify::suite_names()) names.emplace_back(n);
  sub->add_option("--suite", o->suite, "Suite to run")
      ->check(CLI::IsMember(names))
      ->capture_default_str();
  sub->add_option("--out", o->out, "Directory for the run manifest")->capture_default_str();

  return [o](const Invocation& inv) {
    RunManifest m = start_manifest("verify", inv);
    m.set("suite", o->suite, ValueSource::kFlag);
    const auto results = verify::run_suite(o->suite);
    std::size_t failed = 0, instances = 0;
    for (const auto& r : results) {
      std::cout << (r.passed() ? "PASS" : "FAIL") << "  " << r.name << ": " << r.instances
                << " instances checked, " << r.failures << " failures (" << r.seconds
                << " s)\n";
      for (const auto& note : r.notes) std::cout << "      " << note << '\n';
      instances += r.instances;
      if (!r.passed()) ++failed;
    }
    std::cout << results.size() - failed << "/" << results.size() << " checks passed, "
              << instances << " instances\n";
    if (failed > 0) return kExitVerify;
    finish(o->out, m);
    return kExitOk;
  };
}

// ---------------------------------------------------------------------------
// stats

Runner add_stats(CLI::App& app) {
  struct Opts {
    std::string log, format = "csv", out;
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("stats", "Render a training log for plotting");
  sub->add_option("--log", o->log, "train_log.jsonl from train-sim")->required();
  sub->add_option("--format", o->format, "Output format")
      ->check(CLI::IsMember({"csv"}))
      ->capture_default_str();
  sub->add_option("--out", o->out,
                  "Directory for train_log.csv and the manifest (default: CSV to stdout, "
                  "manifest in the working directory)");

  return [o](const Invocation& inv) {
    RunManifest m = start_manifest("stats", inv);
    m.set("format", o->format, ValueSource::kFlag);
    std::ifstream in(o->log);
    if (!in) throw DataError("cannot read training log " + o->log);
    const auto log = read_train_log(in);
    m.add_input(o->log);
    const fs::path out_dir = o->out.empty() ? fs::path(".") : fs::path(o->out);
    if (o->out.empty()) {
      write_train_log_csv(std::cout, log);
    } else {
      const fs::path csv_path = out_dir / "train_log.csv";
      auto out = open_output(csv_path);
      write_train_log_csv(out, log);
      m.outputs = {csv_path.string()};
    }
    finish(out_dir, m);
    return kExitOk;
  };
}

}  // namespace mvp::cli
