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

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "CLI11.hpp"

namespace mvp::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitVerify = 3;

inline constexpr const char* kSeedEnv = "MVP_FORGE_SEED";

struct Invocation {
  std::vector<std::string> argv;
};

// Registers a subcommand on `app`. The returned callback runs it after
// parsing and yields the exit code.
using Runner = std::function<int(const Invocation&)>;

Runner add_synthesize(CLI::App& app);
Runner add_score(CLI::App& app);
Runner add_train_sim(CLI::App& app);
Runner add_evaluate(CLI::App& app);
Runner add_verify(CLI::App& app);
Runner add_stats(CLI::App& app);

}  // namespace mvp::cli
