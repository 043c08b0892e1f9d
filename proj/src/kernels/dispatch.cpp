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

#include <atomic>
#include <cstdlib>
#include <string>

#include "backends.hpp"
#include "mvp/error.hpp"

namespace mvp::kernels {
namespace {

bool cpu_supports(Backend b) {
  switch (b) {
    case Backend::kScalar:
      return true;
    case Backend::kAvx2:
#if defined(MVP_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      __builtin_cpu_init();
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Backend::kNeon:
#if defined(MVP_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable* pick_default() {
  if (const char* env = std::getenv("MVP_FORGE_KERNELS")) {
    std::string want(env);
    for (Backend b : {Backend::kScalar, Backend::kAvx2, Backend::kNeon})
      if (want == to_string(b) && cpu_supports(b)) return &table(b);
  }
  if (cpu_supports(Backend::kAvx2)) return &table(Backend::kAvx2);
  if (cpu_supports(Backend::kNeon)) return &table(Backend::kNeon);
  return &detail::kScalarTable;
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> ptr{pick_default()};
  return ptr;
}

}  // namespace

std::string_view to_string(Backend b) {
  switch (b) {
    case Backend::kScalar:
      return "scalar";
    case Backend::kAvx2:
      return "avx2";
    case Backend::kNeon:
      return "neon";
  }
  return "unknown";
}

bool available(Backend b) { return cpu_supports(b); }

const KernelTable& table(Backend b) {
  if (!cpu_supports(b))
    throw ConfigError("kernel backend '" + std::string(to_string(b)) +
                      "' is not available on this build/CPU");
  switch (b) {
#if defined(MVP_HAVE_AVX2)
    case Backend::kAvx2:
      return detail::kAvx2Table;
#endif
#if defined(MVP_HAVE_NEON)
    case Backend::kNeon:
      return detail::kNeonTable;
#endif
    default:
      return detail::kScalarTable;
  }
}

const KernelTable& active() { return *current().load(std::memory_order_acquire); }

void select(Backend b) { current().store(&table(b), std::memory_order_release); }

}  // namespace mvp::kernels
