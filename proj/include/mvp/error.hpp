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
#include <stdexcept>
#include <string>
#include <vector>

namespace mvp {

// Root of every error this library throws. The CLI maps the three direct
// subclasses onto exit codes (usage = 1, data = 2, verification = 3).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad configuration values: out-of-range constants, impossible targets.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed, missing, or insufficient input data.
class DataError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(std::size_t lhs, std::size_t rhs)
      : Error("dimension mismatch: " + std::to_string(lhs) + " vs " +
              std::to_string(rhs)),
        lhs_dim(lhs),
        rhs_dim(rhs) {}
  std::size_t lhs_dim;
  std::size_t rhs_dim;
};

// Fewer than the requested number of frames survived de-duplication.
class InsufficientFrames : public DataError {
 public:
  InsufficientFrames(std::size_t achieved_count, std::size_t requested_count)
      : DataError("insufficient frames: selected " +
                  std::to_string(achieved_count) + " of " +
                  std::to_string(requested_count)),
        achieved(achieved_count),
        requested(requested_count) {}
  std::size_t achieved;
  std::size_t requested;
};

class DistractorShortage : public DataError {
 public:
  DistractorShortage(std::size_t available_count, std::size_t needed_count)
      : DataError("distractor shortage: " + std::to_string(available_count) +
                  " vicinity frames available, " +
                  std::to_string(needed_count) + " needed"),
        available(available_count),
        needed(needed_count) {}
  std::size_t available;
  std::size_t needed;
};

class EmptyCorpus : public DataError {
 public:
  using DataError::DataError;
};

// A rollout scorer threw part-way through quality filtering.
class FilterAborted : public DataError {
 public:
  FilterAborted(const std::string& why, std::vector<double> scores)
      : DataError("quality filter aborted: " + why),
        partial_scores(std::move(scores)) {}
  std::vector<double> partial_scores;
};

class TemplateError : public ConfigError {
 public:
  explicit TemplateError(std::string missing)
      : ConfigError("prompt template is missing placeholder " + missing),
        placeholder(std::move(missing)) {}
  std::string placeholder;
};

class EmptyTruth : public Error {
 public:
  EmptyTruth() : Error("ground-truth answer sequence is empty") {}
};

class GroupSizeError : public ConfigError {
 public:
  explicit GroupSizeError(std::size_t g)
      : ConfigError("group size must be >= 2, got " + std::to_string(g)) {}
};

class NumericInputError : public Error {
 public:
  using Error::Error;
};

class LengthMismatch : public Error {
 public:
  using Error::Error;
};

// The optimizer produced a non-finite gradient for one rollout group.
class DivergedStep : public Error {
 public:
  DivergedStep(std::string group, std::size_t step_index = 0)
      : Error("non-finite gradient in group '" + group + "'" +
              (step_index ? " at step " + std::to_string(step_index) : "")),
        group_id(std::move(group)),
        step(step_index) {}
  std::string group_id;
  std::size_t step;
};

class ActionSpaceMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace mvp
