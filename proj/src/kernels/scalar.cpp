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

#include "backends.hpp"

namespace mvp::kernels::detail {
namespace {

double dot_f32(const float* a, const float* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    s += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  return s;
}

double squared_norm_f32(const float* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    s += static_cast<double>(a[i]) * static_cast<double>(a[i]);
  return s;
}

void scale_f32(float* a, float factor, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) a[i] *= factor;
}

double dot_f64(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy_f64(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double max_f64(const double* a, std::size_t n) {
  double m = a[0];
  for (std::size_t i = 1; i < n; ++i)
    if (a[i] > m) m = a[i];
  return m;
}

void scale_f64(const double* x, double factor, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = x[i] * factor;
}

}  // namespace

const KernelTable kScalarTable{Backend::kScalar, dot_f32,  squared_norm_f32,
                               scale_f32,        dot_f64,  axpy_f64,
                               max_f64,          scale_f64};

}  // namespace mvp::kernels::detail
