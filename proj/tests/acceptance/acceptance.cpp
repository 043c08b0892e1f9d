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

// Release gate: one line per acceptance criterion, exit status 1 if any fails.

#include <cstdio>
#include <string>
#include <vector>

#include "mvp/checks.hpp"

namespace {

struct Criterion {
  const char* label;
  mvp::verify::CheckResult result;
  double time_limit_s = 0.0;  // 0 = none
};

}  // namespace

int main() {
  using namespace mvp::verify;
  std::vector<Criterion> criteria;
  criteria.push_back({"reward oracle equivalence (pool <= 7, K <= 4, 1e-9, < 60 s)",
                      reward_oracle_equivalence(7, 4, 1e-9), 60.0});
  criteria.push_back({"hand-anchored reward fixtures", reward_hand_fixtures()});
  criteria.push_back({"mode ordering on 1000 random pairs", reward_mode_ordering(1000, 0)});
  criteria.push_back({"GRPO gradient vs central differences (100 seeds, h=1e-5, 1e-4, < 30 s)",
                      grpo_gradient_check(100, 1e-5, 1e-4), 30.0});
  criteria.push_back({"advantage normalization (10000 groups, G=5)",
                      advantage_normalization(10'000, 5, 0)});
  criteria.push_back({"simulated training convergence (>= 2.7 in 300 steps, >= 18/20 seeds)",
                      training_convergence({20, 300, 2.7, 18})});
  criteria.push_back({"synthesis determinism and constraints (targets 2:20 3:50 4:30)",
                      synthesis_determinism_and_constraints(0)});
  criteria.push_back({"evaluator sanity (oracle 1.0/1.0, content_only 1/3 +- 0.02 on 10k)",
                      evaluator_sanity(10'000)});

  int failed = 0;
  for (auto& c : criteria) {
    bool ok = c.result.passed();
    if (c.time_limit_s > 0.0 && c.result.seconds >= c.time_limit_s) {
      ok = false;
      c.result.notes.push_back("exceeded the time limit");
    }
    std::printf("%s  %s  [%zu instances, %.2f s]\n", ok ? "PASS" : "FAIL", c.label,
                c.result.instances, c.result.seconds);
    for (const auto& note : c.result.notes) std::printf("      %s\n", note.c_str());
    if (!ok) ++failed;
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
