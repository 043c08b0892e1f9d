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

// Runs the mvp-forge binary end to end on synthetic embeddings.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mvp/dataset.hpp"
#include "mvp/embedding.hpp"
#include "mvp/synthetic.hpp"

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    root_ = fs::temp_directory_path() / "mvp-forge-cli-test";
    fs::remove_all(root_);
    fs::create_directories(root_ / "emb");
    for (const auto& v : mvp::synthetic::video_corpus(6, 3, {.frames = 200, .dim = 32}))
      mvp::write_mvpe(root_ / "emb" / (v.video_id() + ".mvpe"), v);
  }
  static void TearDownTestSuite() { fs::remove_all(root_); }

  static Outcome run(const std::string& args, const std::string& env = "") {
    const fs::path out = root_ / "stdout.txt", err = root_ / "stderr.txt";
    const std::string cmd = "cd '" + root_.string() + "' && " + env + " '" MVP_FORGE_BIN "' " +
                            args + " >'" + out.string() + "' 2>'" + err.string() + "'";
    const int status = std::system(cmd.c_str());
    Outcome r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
  }

  static Json manifest(const std::string& dir) {
    return Json::parse(slurp(root_ / dir / "manifest.json"));
  }

  static std::string source_of(const Json& m, const std::string& name) {
    for (const auto& e : m["config"])
      if (e["name"] == name) return e["source"];
    return "";
  }

  static inline fs::path root_;
};

TEST_F(Cli, HelpExitsZeroAndDocumentsFlags) {
  const auto top = run("--help");
  EXPECT_EQ(top.code, 0);
  for (const char* sub : {"synthesize", "score", "train-sim", "evaluate", "verify", "stats"})
    EXPECT_NE(top.out.find(sub), std::string::npos) << sub;
  const std::pair<const char*, std::vector<const char*>> subs[] = {
      {"synthesize", {"--config", "--embeddings", "--out", "--target", "--kappa", "--seed", "--jobs"}},
      {"score", {"--corpus", "--responses", "--reward-mode", "--alpha", "--beta-fmt"}},
      {"train-sim", {"--corpus", "--steps", "--seed", "--learning-rate", "--parameterization"}},
      {"evaluate", {"--corpus", "--policy", "--format-rate", "--temperature"}},
      {"verify", {"--suite"}},
      {"stats", {"--log", "--format"}},
  };
  for (const auto& [sub, flags] : subs) {
    const auto r = run(std::string(sub) + " --help");
    EXPECT_EQ(r.code, 0) << sub;
    for (const char* flag : flags) EXPECT_NE(r.out.find(flag), std::string::npos) << sub << " " << flag;
  }
}

TEST_F(Cli, UsageErrorsExitOne) {
  const auto unknown = run("score --corpus x --responses y --frobnicate");
  EXPECT_EQ(unknown.code, 1);
  EXPECT_FALSE(unknown.err.empty());
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("synthesize --embeddings emb --out o --target 3=x").code, 1);
  EXPECT_EQ(run("train-sim --corpus c.jsonl --parameterization lookup").code, 1);
}

TEST_F(Cli, MissingEmbeddingsDirExitsTwoNamingPath) {
  const auto r = run("synthesize --embeddings no_such_dir --out o --target 3=2");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("no_such_dir"), std::string::npos);
}

TEST_F(Cli, VerifyRewardSuitePrintsCounts) {
  const auto r = run("verify --suite reward --out verify_out");
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_NE(r.out.find("instances checked"), std::string::npos);
  EXPECT_TRUE(fs::exists(root_ / "verify_out" / "manifest.json"));
}

TEST_F(Cli, PipelineEndToEnd) {
  // synthesize twice with the same seed: identical corpus bytes
  auto syn = run("synthesize --embeddings emb --out syn_a --target 2=4,3=10,4=6 --seed 5 --prompts");
  ASSERT_EQ(syn.code, 0) << syn.err;
  ASSERT_EQ(run("synthesize --embeddings emb --out syn_b --target 2=4,3=10,4=6 --jobs 3",
                "MVP_FORGE_SEED=5")
                .code,
            0);
  const std::string corpus_a = slurp(root_ / "syn_a" / "corpus.jsonl");
  EXPECT_EQ(corpus_a, slurp(root_ / "syn_b" / "corpus.jsonl"));
  for (const char* f : {"corpus.jsonl", "synthesis_report.json", "prompts.jsonl", "manifest.json"})
    EXPECT_TRUE(fs::exists(root_ / "syn_a" / f)) << f;
  EXPECT_EQ(source_of(manifest("syn_a"), "rng_seed"), "flag");
  EXPECT_EQ(source_of(manifest("syn_b"), "rng_seed"), "env");
  EXPECT_EQ(source_of(manifest("syn_a"), "kappa"), "default");
  EXPECT_EQ(manifest("syn_a")["inputs"].size(), 6u);

  // config file sits between flags and defaults
  std::ofstream(root_ / "cfg.json") << R"({"kappa": 0.9, "rng_seed": 11})";
  ASSERT_EQ(run("synthesize --config cfg.json --embeddings emb --out syn_c --target 3=5 --kappa 0.93").code, 0);
  const auto mc = manifest("syn_c");
  EXPECT_EQ(source_of(mc, "kappa"), "flag");
  EXPECT_EQ(source_of(mc, "rng_seed"), "file");
  EXPECT_EQ(mc["seed"], 11);
  std::ofstream(root_ / "bad_cfg.json") << R"({"kapa": 0.9})";
  EXPECT_EQ(run("synthesize --config bad_cfg.json --embeddings emb --out syn_d --target 3=5").code, 1);

  // responses whose labels are the right set in rotated order: content only
  const auto corpus = mvp::read_corpus(root_ / "syn_a" / "corpus.jsonl");
  {
    std::ofstream resp(root_ / "responses.jsonl");
    for (const auto& s : corpus) {
      auto rotated = s.answer;
      std::rotate(rotated.begin(), rotated.begin() + 1, rotated.end());
      resp << Json{{"sample_id", s.sample_id},
                   {"response_text", "<think>t</think><answer>" + mvp::labels_to_string(rotated) +
                                         "</answer>"}}
                  .dump()
           << '\n';
    }
  }
  ASSERT_EQ(run("score --corpus syn_a/corpus.jsonl --responses responses.jsonl "
                "--reward-mode exact_only --out scored")
                .code,
            0);
  std::ifstream scores(root_ / "scored" / "scores.jsonl");
  std::string line;
  std::size_t rows = 0;
  while (std::getline(scores, line)) {
    const auto j = Json::parse(line);
    EXPECT_EQ(j["r_correct"], 0.0) << line;
    EXPECT_EQ(j["r_format"], 1);
    ++rows;
  }
  EXPECT_EQ(rows, corpus.size());
  EXPECT_EQ(source_of(manifest("scored"), "reward.mode"), "flag");

  std::ofstream(root_ / "orphan.jsonl") << R"({"sample_id": "nobody", "response_text": "[a]"})" << '\n';
  EXPECT_EQ(run("score --corpus syn_a/corpus.jsonl --responses orphan.jsonl --out s2").code, 2);

  // train, evaluate the trained policy, render stats
  ASSERT_EQ(run("train-sim --corpus syn_a/corpus.jsonl --steps 20 --seed 2 --out trained --csv").code, 0);
  for (const char* f : {"train_log.jsonl", "policy.json", "train_log.csv", "manifest.json"})
    EXPECT_TRUE(fs::exists(root_ / "trained" / f)) << f;
  ASSERT_EQ(run("train-sim --corpus syn_a/corpus.jsonl --steps 20 --seed 2 --out trained2 --jobs 2").code, 0);
  EXPECT_EQ(slurp(root_ / "trained" / "train_log.jsonl"), slurp(root_ / "trained2" / "train_log.jsonl"));

  const auto ev = run("evaluate --corpus syn_a/corpus.jsonl --policy trained/policy.json --out eval");
  ASSERT_EQ(ev.code, 0) << ev.err;
  const auto report = Json::parse(slurp(root_ / "eval" / "evaluation.json"));
  EXPECT_TRUE(report.contains("avg_accuracy"));
  EXPECT_TRUE(report.contains("avg_format_rate"));

  ASSERT_EQ(run("evaluate --corpus syn_a/corpus.jsonl --policy oracle --out eval_oracle").code, 0);
  EXPECT_EQ(Json::parse(slurp(root_ / "eval_oracle" / "evaluation.json"))["avg_accuracy"], 1.0);

  const auto stats = run("stats --log trained/train_log.jsonl --format csv");
  EXPECT_EQ(stats.code, 0);
  EXPECT_EQ(stats.out.rfind("step,", 0), 0u);
  EXPECT_EQ(std::count(stats.out.begin(), stats.out.end(), '\n'), 21);
  EXPECT_EQ(run("stats --log missing.jsonl").code, 2);
}

TEST_F(Cli, InfeasibleTargetIsDataError) {
  fs::create_directories(root_ / "short_emb");
  mvp::write_mvpe(root_ / "short_emb" / "tiny.mvpe",
                  mvp::synthetic::video("tiny", 1, {.frames = 10, .dim = 8}));
  EXPECT_EQ(run("synthesize --embeddings short_emb --out short_out --target 3=1").code, 2);
}

}  // namespace
