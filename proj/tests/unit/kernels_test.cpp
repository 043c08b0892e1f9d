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

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "mvp/error.hpp"
#include "mvp/kernels.hpp"
#include "mvp/random.hpp"

namespace mvp::kernels {
namespace {

std::vector<Backend> simd_backends() {
  std::vector<Backend> out;
  for (auto b : {Backend::kAvx2, Backend::kNeon})
    if (available(b)) out.push_back(b);
  return out;
}

template <typename T>
std::vector<T> random_vec(std::size_t n, Rng& rng, double scale = 1.0) {
  std::vector<T> v(n);
  for (auto& x : v) x = static_cast<T>((uniform01(rng) * 2.0 - 1.0) * scale);
  return v;
}

// Lengths straddling every vector width and tail case.
const std::size_t kLengths[] = {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 33, 64, 100, 513, 1027};

TEST(Kernels, ScalarAlwaysAvailable) {
  EXPECT_TRUE(available(Backend::kScalar));
  EXPECT_EQ(table(Backend::kScalar).backend, Backend::kScalar);
}

TEST(Kernels, UnavailableBackendIsConfigError) {
  for (auto b : {Backend::kAvx2, Backend::kNeon})
    if (!available(b)) {
      EXPECT_THROW(table(b), ConfigError);
    }
}

TEST(Kernels, SimdMatchesScalar) {
  const auto& ref = table(Backend::kScalar);
  const auto backends = simd_backends();
  if (backends.empty()) GTEST_SKIP() << "no SIMD backend on this machine";
  Rng rng(2024);
  for (auto b : backends) {
    const auto& k = table(b);
    for (std::size_t n : kLengths) {
      SCOPED_TRACE(std::string(to_string(b)) + " n=" + std::to_string(n));
      const auto af = random_vec<float>(n, rng), bf = random_vec<float>(n, rng);
      const auto ad = random_vec<double>(n, rng, 50.0), bd = random_vec<double>(n, rng, 50.0);
      const double tol = 1e-12 * (1.0 + double(n));

      EXPECT_NEAR(k.dot_f32(af.data(), bf.data(), n), ref.dot_f32(af.data(), bf.data(), n),
                  1e-6 * (1.0 + double(n)));
      EXPECT_NEAR(k.squared_norm_f32(af.data(), n), ref.squared_norm_f32(af.data(), n),
                  1e-6 * (1.0 + double(n)));
      EXPECT_NEAR(k.dot_f64(ad.data(), bd.data(), n), ref.dot_f64(ad.data(), bd.data(), n),
                  tol * 2500.0);

      auto s1 = af, s2 = af;
      k.scale_f32(s1.data(), 0.37f, n);
      ref.scale_f32(s2.data(), 0.37f, n);
      EXPECT_EQ(s1, s2);

      auto y1 = bd, y2 = bd;
      k.axpy_f64(-1.25, ad.data(), y1.data(), n);
      ref.axpy_f64(-1.25, ad.data(), y2.data(), n);
      for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(y1[i], y2[i], 1e-12 * std::abs(y2[i]) + 1e-13);

      std::vector<double> z1(n), z2(n);
      k.scale_f64(ad.data(), 0.125, z1.data(), n);
      ref.scale_f64(ad.data(), 0.125, z2.data(), n);
      EXPECT_EQ(z1, z2);

      if (n > 0) {
        EXPECT_EQ(k.max_f64(ad.data(), n), ref.max_f64(ad.data(), n));
      }
    }
  }
}

TEST(Kernels, MaxHandlesInfinityAndNegatives) {
  std::vector<double> v(37, -5.0);
  v[36] = -1.0;
  for (auto b : {Backend::kScalar, Backend::kAvx2, Backend::kNeon}) {
    if (!available(b)) continue;
    EXPECT_EQ(table(b).max_f64(v.data(), v.size()), -1.0);
    auto w = v;
    w[17] = INFINITY;
    EXPECT_EQ(table(b).max_f64(w.data(), w.size()), INFINITY);
  }
}

TEST(Kernels, SelectSwitchesActiveTable) {
  const Backend before = active().backend;
  select(Backend::kScalar);
  EXPECT_EQ(active().backend, Backend::kScalar);
  const std::vector<float> a{1, 2, 3}, b{4, 5, 6};
  EXPECT_DOUBLE_EQ(dot(a, b), 32.0);
  select(before);
  EXPECT_EQ(active().backend, before);
}

}  // namespace
}  // namespace mvp::kernels
