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

#include "mvp/reward.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <optional>

#include "mvp/error.hpp"

namespace mvp {

std::string_view to_string(RewardMode mode) {
  switch (mode) {
    case RewardMode::kExactOnly:
      return "exact_only";
    case RewardMode::kContentAware:
      return "content_aware";
    case RewardMode::kContentPlusSequence:
      return "content_plus_sequence";
  }
  return "unknown";
}

RewardMode parse_reward_mode(std::string_view name) {
  for (auto m : {RewardMode::kExactOnly, RewardMode::kContentAware,
                 RewardMode::kContentPlusSequence})
    if (name == to_string(m)) return m;
  throw ConfigError("unknown reward mode '" + std::string(name) +
                    "' (expected exact_only, content_aware or content_plus_sequence)");
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::kExact:
      return "exact";
    case Verdict::kContent:
      return "content";
    case Verdict::kMiss:
      return "miss";
  }
  return "miss";
}

void RewardConfig::validate() const {
  if (!(gamma > 0.0) || !(alpha > gamma) || !std::isfinite(alpha))
    throw ConfigError("reward constants must satisfy alpha > gamma > 0");
  if (!(beta_fmt >= 0.0 && beta_fmt <= 1.0))
    throw ConfigError("beta_fmt must be in [0, 1]");
  if (min_substring_len == 0) throw ConfigError("min_substring_len must be >= 1");
}

// ---------------------------------------------------------------------------
// Response parsing
//
// Well-formed means: optional whitespace, one <think>...</think> block,
// optional whitespace, one <answer>...</answer> block, optional whitespace,
// and no other occurrence of either tag anywhere.

namespace {

constexpr std::string_view kThinkOpen = "<think>";
constexpr std::string_view kThinkClose = "</think>";
constexpr std::string_view kAnswerOpen = "<answer>";
constexpr std::string_view kAnswerClose = "</answer>";

std::size_t count_of(std::string_view hay, std::string_view needle) {
  std::size_t n = 0;
  for (std::size_t pos = hay.find(needle); pos != std::string_view::npos;
       pos = hay.find(needle, pos + needle.size()))
    ++n;
  return n;
}

bool blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isspace(c) != 0; });
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

// "[b, a,c]" -> {b,a,c}; nullopt unless every item is a single letter.
std::optional<std::vector<CandidateLabel>> parse_label_list(std::string_view inner) {
  std::vector<CandidateLabel> out;
  if (blank(inner)) return out;
  while (true) {
    const std::size_t comma = inner.find(',');
    std::string_view item = trim(inner.substr(0, comma));
    if (item.size() != 1 || !std::isalpha(static_cast<unsigned char>(item[0])))
      return std::nullopt;
    out.emplace_back(static_cast<char>(std::tolower(static_cast<unsigned char>(item[0]))));
    if (comma == std::string_view::npos) break;
    inner.remove_prefix(comma + 1);
  }
  return out;
}

std::vector<CandidateLabel> first_label_list(std::string_view text) {
  for (std::size_t open = text.find('['); open != std::string_view::npos;
       open = text.find('[', open + 1)) {
    const std::size_t close = text.find(']', open + 1);
    if (close == std::string_view::npos) break;
    if (auto labels = parse_label_list(text.substr(open + 1, close - open - 1)))
      return *labels;
  }
  return {};
}

}  // namespace

ParsedResponse parse_response(std::string_view raw) {
  ParsedResponse out;
  const std::size_t t_open = raw.find(kThinkOpen);
  const std::size_t t_close =
      t_open == std::string_view::npos ? std::string_view::npos
                                       : raw.find(kThinkClose, t_open + kThinkOpen.size());
  const std::size_t a_open = raw.find(kAnswerOpen);
  const std::size_t a_close =
      a_open == std::string_view::npos ? std::string_view::npos
                                       : raw.find(kAnswerClose, a_open + kAnswerOpen.size());

  if (t_close != std::string_view::npos) {
    const std::size_t begin = t_open + kThinkOpen.size();
    out.think_text = std::string(raw.substr(begin, t_close - begin));
  }

  std::string_view answer_scope = raw;
  if (a_close != std::string_view::npos) {
    const std::size_t begin = a_open + kAnswerOpen.size();
    answer_scope = raw.substr(begin, a_close - begin);
  }
  out.labels = first_label_list(answer_scope);

  const bool single = count_of(raw, kThinkOpen) == 1 && count_of(raw, kThinkClose) == 1 &&
                      count_of(raw, kAnswerOpen) == 1 && count_of(raw, kAnswerClose) == 1;
  if (single && t_close != std::string_view::npos && a_close != std::string_view::npos &&
      t_close < a_open) {
    out.format_ok = blank(raw.substr(0, t_open)) &&
                    blank(raw.substr(t_close + kThinkClose.size(),
                                     a_open - t_close - kThinkClose.size())) &&
                    blank(raw.substr(a_close + kAnswerClose.size()));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Scoring

namespace {

constexpr std::size_t kMaxLen = CandidateLabel::kAlphabetSize;

// Labels as small integers, prediction truncated to K.
struct Encoded {
  std::array<std::uint8_t, kMaxLen> pred{};
  std::array<std::uint8_t, kMaxLen> truth{};
  std::size_t np = 0;
  std::size_t nt = 0;
};

Encoded encode(std::span<const CandidateLabel> pred,
               std::span<const CandidateLabel> truth) {
  if (truth.empty()) throw EmptyTruth();
  if (truth.size() > kMaxLen)
    throw ConfigError("answer sequences are limited to 26 labels");
  Encoded e;
  e.nt = truth.size();
  e.np = std::min(pred.size(), truth.size());
  for (std::size_t i = 0; i < e.nt; ++i) e.truth[i] = static_cast<std::uint8_t>(truth[i].index());
  for (std::size_t i = 0; i < e.np; ++i) e.pred[i] = static_cast<std::uint8_t>(pred[i].index());
  return e;
}

}  // namespace

TokenScore token_score(std::span<const CandidateLabel> pred,
                       std::span<const CandidateLabel> truth, const RewardConfig& cfg) {
  const Encoded e = encode(pred, truth);
  std::uint32_t truth_set = 0;
  for (std::size_t i = 0; i < e.nt; ++i) truth_set |= 1u << e.truth[i];

  const double k = static_cast<double>(e.nt);
  const double exact_credit = cfg.alpha / k;
  const double content_credit =
      cfg.mode == RewardMode::kExactOnly ? 0.0 : cfg.gamma / k;

  TokenScore out;
  out.per_position.reserve(e.np);
  std::uint32_t seen = 0;
  for (std::size_t i = 0; i < e.np; ++i) {
    const std::uint32_t bit = 1u << e.pred[i];
    Verdict v = Verdict::kMiss;
    if (e.pred[i] == e.truth[i]) {
      v = Verdict::kExact;
      out.value += exact_credit;
    } else if ((truth_set & bit) && !(cfg.dedup_content_credit && (seen & bit))) {
      v = Verdict::kContent;
      out.value += content_credit;
    }
    seen |= bit;
    out.per_position.push_back({pred[i], v});
  }
  return out;
}

ContinuityBonus continuity_bonus(std::span<const CandidateLabel> pred,
                                 std::span<const CandidateLabel> truth,
                                 const RewardConfig& cfg) {
  const Encoded e = encode(pred, truth);
  ContinuityBonus out;
  if (cfg.mode != RewardMode::kContentPlusSequence || e.np == 0) return out;

  // ext[i][j] = length of the common run starting at pred[i], truth[j].
  std::array<std::array<std::uint8_t, kMaxLen + 1>, kMaxLen + 1> ext{};
  for (std::size_t i = e.np; i-- > 0;)
    for (std::size_t j = e.nt; j-- > 0;)
      ext[i][j] = e.pred[i] == e.truth[j] ? static_cast<std::uint8_t>(ext[i + 1][j + 1] + 1)
                                          : std::uint8_t{0};

  std::vector<MatchedRun> qualifying;
  for (std::size_t i = 0; i < e.np; ++i) {
    for (std::size_t j = 0; j < e.nt; ++j) {
      const std::size_t len = ext[i][j];
      if (len < cfg.min_substring_len || i == j) continue;
      // left-maximal; right-maximality is implied by ext
      if (i > 0 && j > 0 && e.pred[i - 1] == e.truth[j - 1]) continue;
      qualifying.push_back({i, j, len});
    }
  }
  std::sort(qualifying.begin(), qualifying.end(),
            [](const MatchedRun& a, const MatchedRun& b) {
              if (a.length != b.length) return a.length > b.length;
              if (a.pred_start != b.pred_start) return a.pred_start < b.pred_start;
              return a.truth_start < b.truth_start;
            });

  std::uint32_t used = 0;
  std::size_t l_match = 0;
  for (const auto& run : qualifying) {
    const std::uint32_t span_bits = ((1u << run.length) - 1u) << run.pred_start;
    if (used & span_bits) continue;
    used |= span_bits;
    l_match += run.length;
    out.runs.push_back(run);
  }
  out.value = cfg.gamma / static_cast<double>(e.nt) * static_cast<double>(l_match);
  return out;
}

RewardBreakdown correctness_reward(std::span<const CandidateLabel> pred,
                                   std::span<const CandidateLabel> truth,
                                   const RewardConfig& cfg) {
  RewardBreakdown b;
  auto tok = token_score(pred, truth, cfg);
  auto bonus = continuity_bonus(pred, truth, cfg);
  b.token_score = tok.value;
  b.continuity_bonus = bonus.value;
  b.r_correct = tok.value + bonus.value;
  b.per_position = std::move(tok.per_position);
  b.matched_runs = std::move(bonus.runs);
  b.pred_length = pred.size();
  b.truth_length = truth.size();
  b.mode = cfg.mode;
  return b;
}

RewardBreakdown score_prediction(std::span<const CandidateLabel> pred, bool format_ok,
                                 std::span<const CandidateLabel> truth,
                                 const RewardConfig& cfg) {
  RewardBreakdown b = correctness_reward(pred, truth, cfg);
  b.r_format = format_ok ? 1 : 0;
  b.r_total = cfg.beta_fmt * b.r_format + (1.0 - cfg.beta_fmt) * b.r_correct;
  return b;
}

RewardBreakdown total_reward(std::string_view raw_response,
                             std::span<const CandidateLabel> truth,
                             const RewardConfig& cfg) {
  const ParsedResponse parsed = parse_response(raw_response);
  return score_prediction(parsed.labels, parsed.format_ok, truth, cfg);
}

nlohmann::ordered_json to_json(const RewardBreakdown& b) {
  nlohmann::ordered_json positions = nlohmann::ordered_json::array();
  for (const auto& p : b.per_position)
    positions.push_back({{"label", std::string(1, p.label.letter())},
                         {"verdict", to_string(p.verdict)}});
  nlohmann::ordered_json runs = nlohmann::ordered_json::array();
  for (const auto& r : b.matched_runs)
    runs.push_back({{"pred_start", r.pred_start},
                    {"truth_start", r.truth_start},
                    {"length", r.length}});
  return {{"token_score", b.token_score},
          {"continuity_bonus", b.continuity_bonus},
          {"r_correct", b.r_correct},
          {"r_format", b.r_format},
          {"r_total", b.r_total},
          {"per_position", std::move(positions)},
          {"matched_runs", std::move(runs)},
          {"pred_length", b.pred_length},
          {"truth_length", b.truth_length},
          {"length_mismatch", b.length_mismatch()},
          {"mode", to_string(b.mode)}};
}

nlohmann::ordered_json to_json(const RewardConfig& cfg) {
  return {{"alpha", cfg.alpha},
          {"gamma", cfg.gamma},
          {"beta_fmt", cfg.beta_fmt},
          {"min_substring_len", cfg.min_substring_len},
          {"mode", to_string(cfg.mode)},
          {"dedup_content_credit", cfg.dedup_content_credit}};
}

}  // namespace mvp
