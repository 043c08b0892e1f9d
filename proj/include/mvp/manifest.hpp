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

// Run manifest written next to every command's outputs: what ran, with which
// effective configuration (and where each value came from), over which input
// bytes, and when.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace mvp {

inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr std::string_view kManifestFile = "manifest.json";

// Where a configuration value came from, highest precedence first.
enum class ValueSource { kFlag, kFile, kEnv, kDefault };
std::string_view to_string(ValueSource s);

struct ConfigEntry {
  std::string name;
  nlohmann::ordered_json value;
  ValueSource source = ValueSource::kDefault;
};

struct InputDigest {
  std::string path;
  std::string sha256;
  std::uint64_t bytes = 0;
};

struct RunManifest {
  std::string command;
  std::vector<std::string> argv;
  std::vector<ConfigEntry> config;
  std::vector<InputDigest> inputs;
  std::optional<std::uint64_t> seed;
  std::string tool_version{kToolVersion};
  std::string started_at;
  std::string finished_at;
  std::vector<std::string> outputs;

  // Replaces an existing entry of the same name.
  void set(std::string name, nlohmann::ordered_json value, ValueSource source);
  // Digests a file, or every regular file under a directory in path order.
  // Throws mvp::DataError if the path cannot be read.
  void add_input(const std::filesystem::path& path);
};

// Lowercase hex SHA-256 of a file's bytes. Throws mvp::DataError.
std::string sha256_file(const std::filesystem::path& path);
std::string sha256_hex(std::string_view bytes);

// UTC, second resolution: 2026-01-31T12:00:00Z.
std::string utc_timestamp();

nlohmann::ordered_json to_json(const RunManifest& m);

// Stamps finished_at and writes <dir>/manifest.json, replacing any previous
// manifest. Returns the path written.
std::filesystem::path write_manifest(const std::filesystem::path& dir, RunManifest& m);

}  // namespace mvp
