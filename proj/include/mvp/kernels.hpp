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

// Data-parallel inner loops used by the synthesis pipeline (frame embedding
// similarity, normalization) and the softmax policies (log-sum-exp, gradient
// accumulation). Each kernel has a scalar reference implementation plus
// AVX2/FMA (x86-64) or NEON (aarch64) variants. The active backend is chosen
// once at first use from CPU features; MVP_FORGE_KERNELS=scalar|avx2|neon
// forces a specific one.

#include <cstddef>
#include <span>
#include <string_view>

namespace mvp::kernels {

enum class Backend { kScalar, kAvx2, kNeon };

std::string_view to_string(Backend b);

// Function table for one backend. All reductions accumulate in double.
struct KernelTable {
  Backend backend;
  double (*dot_f32)(const float* a, const float* b, std::size_t n);
  double (*squared_norm_f32)(const float* a, std::size_t n);
  void (*scale_f32)(float* a, float factor, std::size_t n);
  double (*dot_f64)(const double* a, const double* b, std::size_t n);
  // y += alpha * x
  void (*axpy_f64)(double alpha, const double* x, double* y, std::size_t n);
  // max over a non-empty range
  double (*max_f64)(const double* a, std::size_t n);
  // y = x * factor
  void (*scale_f64)(const double* x, double factor, double* y, std::size_t n);
};

// True when the backend is compiled in and supported by this CPU.
bool available(Backend b);

// Table for a specific backend; throws mvp::ConfigError if unavailable.
const KernelTable& table(Backend b);

// Currently selected table.
const KernelTable& active();

// Overrides the runtime selection; throws mvp::ConfigError if unavailable.
void select(Backend b);

// Convenience wrappers over active(). Length mismatch is the caller's bug and
// is checked only by the typed front-ends (cosine_similarity etc.).
inline double dot(std::span<const float> a, std::span<const float> b) {
  return active().dot_f32(a.data(), b.data(), a.size());
}
inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot_f64(a.data(), b.data(), a.size());
}
inline double squared_norm(std::span<const float> a) {
  return active().squared_norm_f32(a.data(), a.size());
}
inline void scale(std::span<float> a, float factor) {
  active().scale_f32(a.data(), factor, a.size());
}
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy_f64(alpha, x.data(), y.data(), x.size());
}
inline double max(std::span<const double> a) {
  return active().max_f64(a.data(), a.size());
}
inline void scale(std::span<const double> x, double factor,
                  std::span<double> y) {
  active().scale_f64(x.data(), factor, y.data(), x.size());
}

}  // namespace mvp::kernels
