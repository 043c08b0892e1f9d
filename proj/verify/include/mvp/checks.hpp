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

// Self-contained verification checks. Each one builds its own instances,
// compares the production engines against the oracles in oracle.hpp, and
// reports how many instances it looked at.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mvp::verify {

struct CheckResult {
  std::string name;
  std::size_t instances = 0;
  std::size_t failures = 0;
  std::vector<std::string> notes;  // first few failures, then summary facts
  double seconds = 0.0;

  bool passed() const { return failures == 0 && instances > 0; }
  void fail(std::string what);
};

// reward
CheckResult reward_oracle_equivalence(std::size_t max_pool = 7, std::size_t max_k = 4,
                                      double tol = 1e-9);
CheckResult reward_hand_fixtures();
CheckResult reward_mode_ordering(std::size_t pairs = 1000, std::uint64_t seed = 0);
// Exact-match dominance, single-position monotonicity, scale equivariance.
CheckResult reward_properties(std::size_t max_pool = 7, std::size_t max_k = 4);

// grpo
CheckResult grpo_gradient_check(std::size_t seeds = 100, double h = 1e-5,
                                double rel_tol = 1e-4);
CheckResult advantage_normalization(std::size_t groups = 10'000, std::size_t g = 5,
                                    std::uint64_t seed = 0);
CheckResult grpo_hand_values();

// synthesis
CheckResult dedup_against_rescan(std::size_t seeds = 20);
CheckResult synthesis_determinism_and_constraints(std::uint64_t seed = 0);

// policy-sim
struct ConvergenceParams {
  std::size_t seeds = 20;
  std::size_t steps = 300;
  double threshold = 2.7;
  std::size_t required = 18;
};
CheckResult training_convergence(const ConvergenceParams& p = {});
CheckResult evaluator_sanity(std::size_t samples = 10'000);

// "reward", "grpo", "synthesis", "policy" or "all". Throws mvp::ConfigError
// for other names.
std::vector<CheckResult> run_suite(std::string_view suite);
std::vector<std::string_view> suite_names();

}  // namespace mvp::verify
