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

// mvp-forge: synthesize, score, train-sim, evaluate, verify, stats.

#include <exception>
#include <iostream>
#include <map>
#include <string>

#include "commands.hpp"
#include "mvp/error.hpp"
#include "mvp/manifest.hpp"

int main(int argc, char** argv) {
  using namespace mvp::cli;

  CLI::App app{"Masked video prediction toolkit: data synthesis, reward scoring, "
               "simulated GRPO training and evaluation",
               "mvp-forge"};
  app.set_version_flag("--version", std::string(mvp::kToolVersion));
  app.require_subcommand(1);

  const std::map<std::string, Runner> runners{
      {"synthesize", add_synthesize(app)}, {"score", add_score(app)},
      {"train-sim", add_train_sim(app)},   {"evaluate", add_evaluate(app)},
      {"verify", add_verify(app)},         {"stats", add_stats(app)},
  };

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e, std::cerr, std::cerr);
    return kExitUsage;
  }

  Invocation inv;
  for (int i = 0; i < argc; ++i) inv.argv.emplace_back(argv[i]);
  const std::string name = app.get_subcommands().front()->get_name();
  try {
    return runners.at(name)(inv);
  } catch (const mvp::ConfigError& e) {
    std::cerr << "mvp-forge " << name << ": " << e.what() << '\n';
    return kExitUsage;
  } catch (const mvp::Error& e) {
    std::cerr << "mvp-forge " << name << ": " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "mvp-forge " << name << ": " << e.what() << '\n';
    return kExitData;
  }
}
