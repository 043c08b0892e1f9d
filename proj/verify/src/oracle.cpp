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

#include "mvp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace mvp::oracle {

std::vector<Labels> distinct_sequences(std::size_t pool_size, std::size_t len) {
  std::vector<Labels> out;
  Labels cur;
  std::vector<bool> used(pool_size, false);
  std::function<void()> rec = [&] {
    if (cur.size() == len) {
      out.push_back(cur);
      return;
    }
    for (std::size_t l = 0; l < pool_size; ++l) {
      if (used[l]) continue;
      used[l] = true;
      cur.push_back(CandidateLabel::from_index(l));
      rec();
      cur.pop_back();
      used[l] = false;
    }
  };
  rec();
  return out;
}

double brute_token_score(const Labels& pred, const Labels& truth, const RewardConfig& cfg) {
  const double k = static_cast<double>(truth.size());
  double total = 0.0;
  Labels earlier;
  for (std::size_t i = 0; i < pred.size() && i < truth.size(); ++i) {
    const bool exact = pred[i] == truth[i];
    bool elsewhere = false;
    for (std::size_t j = 0; j < truth.size(); ++j)
      if (j != i && truth[j] == pred[i]) elsewhere = true;
    const bool repeated = std::find(earlier.begin(), earlier.end(), pred[i]) != earlier.end();
    if (exact) {
      total += cfg.alpha / k;
    } else if (elsewhere && cfg.mode != RewardMode::kExactOnly &&
               !(cfg.dedup_content_credit && repeated)) {
      total += cfg.gamma / k;
    }
    earlier.push_back(pred[i]);
  }
  return total;
}

std::vector<BruteRun> all_maximal_runs(const Labels& pred_in, const Labels& truth) {
  Labels pred(pred_in.begin(),
              pred_in.begin() + static_cast<std::ptrdiff_t>(std::min(pred_in.size(), truth.size())));
  std::vector<BruteRun> out;
  for (std::size_t p = 0; p < pred.size(); ++p)
    for (std::size_t t = 0; t < truth.size(); ++t)
      for (std::size_t len = 1; p + len <= pred.size() && t + len <= truth.size(); ++len) {
        bool equal = true;
        for (std::size_t d = 0; d < len; ++d)
          if (!(pred[p + d] == truth[t + d])) equal = false;
        if (!equal) continue;
        const bool left_ext = p > 0 && t > 0 && pred[p - 1] == truth[t - 1];
        const bool right_ext = p + len < pred.size() && t + len < truth.size() &&
                               pred[p + len] == truth[t + len];
        if (!left_ext && !right_ext) out.push_back({p, t, len});
      }
  return out;
}

std::size_t brute_match_length(const Labels& pred, const Labels& truth, std::size_t min_len) {
  std::vector<BruteRun> runs;
  for (const auto& r : all_maximal_runs(pred, truth))
    if (r.len >= min_len && r.p != r.t) runs.push_back(r);
  std::stable_sort(runs.begin(), runs.end(), [](const BruteRun& a, const BruteRun& b) {
    if (a.len != b.len) return a.len > b.len;
    if (a.p != b.p) return a.p < b.p;
    return a.t < b.t;
  });
  std::vector<bool> taken(pred.size(), false);
  std::size_t total = 0;
  for (const auto& r : runs) {
    bool free = true;
    for (std::size_t d = 0; d < r.len; ++d)
      if (taken[r.p + d]) free = false;
    if (!free) continue;
    for (std::size_t d = 0; d < r.len; ++d) taken[r.p + d] = true;
    total += r.len;
  }
  return total;
}

double brute_continuity(const Labels& pred, const Labels& truth, const RewardConfig& cfg) {
  if (cfg.mode != RewardMode::kContentPlusSequence) return 0.0;
  return cfg.gamma / static_cast<double>(truth.size()) *
         static_cast<double>(brute_match_length(pred, truth, cfg.min_substring_len));
}

double brute_r_correct(const Labels& pred, const Labels& truth, const RewardConfig& cfg) {
  return brute_token_score(pred, truth, cfg) + brute_continuity(pred, truth, cfg);
}

double max_r_correct(const Labels& truth, std::size_t pool_size, const RewardConfig& cfg) {
  double best = 0.0;
  for (const auto& pred : distinct_sequences(pool_size, truth.size()))
    best = std::max(best, brute_r_correct(pred, truth, cfg));
  return best;
}

std::vector<std::size_t> rescan_select(const EmbeddingSequence& seq, std::size_t start_pos,
                                       std::size_t n, double kappa) {
  std::vector<std::size_t> picked{start_pos};
  for (std::size_t j = start_pos + 1; j < seq.size(); ++j) {
    if (picked.size() == n) break;
    auto a = seq.vector(picked.back());
    auto b = seq.vector(j);
    long double s = 0.0L;
    for (std::size_t d = 0; d < a.size(); ++d)
      s += static_cast<long double>(a[d]) * static_cast<long double>(b[d]);
    if (s <= kappa) picked.push_back(j);
  }
  if (picked.size() < n) return {};
  return picked;
}

std::vector<double> reference_advantages(std::span<const double> rewards, double eps) {
  long double mean = 0.0L;
  for (double r : rewards) mean += r;
  mean /= static_cast<long double>(rewards.size());
  long double var = 0.0L;
  for (double r : rewards) var += (r - mean) * (r - mean);
  var /= static_cast<long double>(rewards.size());
  const long double denom = std::sqrt(var) + eps;
  std::vector<double> out;
  for (double r : rewards) out.push_back(static_cast<double>((r - mean) / denom));
  return out;
}

std::vector<double> central_differences(const std::function<double(std::span<const double>)>& f,
                                        std::span<const double> x, double h) {
  std::vector<double> probe(x.begin(), x.end());
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + h;
    const double up = f(probe);
    probe[i] = x[i] - h;
    const double down = f(probe);
    probe[i] = x[i];
    out[i] = (up - down) / (2.0 * h);
  }
  return out;
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = r;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double n = static_cast<double>(rx.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

MannKendall mann_kendall(std::span<const double> x) {
  MannKendall out;
  const std::size_t n = x.size();
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      s += (x[j] > x[i]) - (x[j] < x[i]);
  std::map<double, std::size_t> ties;
  for (double v : x) ++ties[v];
  const double nn = static_cast<double>(n);
  double var = nn * (nn - 1) * (2 * nn + 5);
  for (auto [v, t] : ties) {
    const double tt = static_cast<double>(t);
    var -= tt * (tt - 1) * (2 * tt + 5);
  }
  var /= 18.0;
  out.s = s;
  if (var <= 0.0) return out;
  if (s > 0) out.z = (s - 1) / std::sqrt(var);
  else if (s < 0) out.z = (s + 1) / std::sqrt(var);
  out.p_value = std::erfc(std::abs(out.z) / std::sqrt(2.0));
  return out;
}

}  // namespace mvp::oracle
