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

#include "mvp/manifest.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <ctime>
#include <fstream>
#include <memory>

#include "mvp/error.hpp"

namespace mvp {
namespace {

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new(), &EVP_MD_CTX_free) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha256(), nullptr) != 1)
      throw Error("SHA-256 initialisation failed");
  }
  void update(const void* data, std::size_t n) {
    if (EVP_DigestUpdate(ctx_.get(), data, n) != 1) throw Error("SHA-256 update failed");
  }
  std::string hex() {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx_.get(), md.data(), &len) != 1) throw Error("SHA-256 final failed");
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
      out.push_back(kDigits[md[i] >> 4]);
      out.push_back(kDigits[md[i] & 0xf]);
    }
    return out;
  }

 private:
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx_;
};

}  // namespace

std::string_view to_string(ValueSource s) {
  switch (s) {
    case ValueSource::kFlag:
      return "flag";
    case ValueSource::kFile:
      return "file";
    case ValueSource::kEnv:
      return "env";
    case ValueSource::kDefault:
      return "default";
  }
  return "default";
}

std::string sha256_hex(std::string_view bytes) {
  Sha256 h;
  h.update(bytes.data(), bytes.size());
  return h.hex();
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  Sha256 h;
  std::array<char, 1 << 16> buf;
  while (in) {
    in.read(buf.data(), buf.size());
    h.update(buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  return h.hex();
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void RunManifest::set(std::string name, nlohmann::ordered_json value, ValueSource source) {
  for (auto& e : config)
    if (e.name == name) {
      e.value = std::move(value);
      e.source = source;
      return;
    }
  config.push_back({std::move(name), std::move(value), source});
}

void RunManifest::add_input(const std::filesystem::path& path) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (fs::is_directory(path, ec)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(path))
      if (entry.is_regular_file()) files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) add_input(f);
    return;
  }
  const auto size = fs::file_size(path, ec);
  if (ec) throw DataError("cannot read " + path.string() + ": " + ec.message());
  inputs.push_back({path.string(), sha256_file(path), static_cast<std::uint64_t>(size)});
}

nlohmann::ordered_json to_json(const RunManifest& m) {
  nlohmann::ordered_json config = nlohmann::ordered_json::array();
  for (const auto& e : m.config)
    config.push_back({{"name", e.name}, {"value", e.value}, {"source", to_string(e.source)}});
  nlohmann::ordered_json inputs = nlohmann::ordered_json::array();
  for (const auto& d : m.inputs)
    inputs.push_back({{"path", d.path}, {"sha256", d.sha256}, {"bytes", d.bytes}});
  nlohmann::ordered_json j{{"command", m.command},
                           {"argv", m.argv},
                           {"tool_version", m.tool_version},
                           {"seed", nullptr},
                           {"config", std::move(config)},
                           {"inputs", std::move(inputs)},
                           {"outputs", m.outputs},
                           {"started_at", m.started_at},
                           {"finished_at", m.finished_at}};
  if (m.seed) j["seed"] = *m.seed;
  return j;
}

std::filesystem::path write_manifest(const std::filesystem::path& dir, RunManifest& m) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  m.finished_at = utc_timestamp();
  const auto path = dir / kManifestFile;
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << to_json(m).dump(2) << '\n';
  if (!out) throw DataError("failed writing " + path.string());
  return path;
}

}  // namespace mvp
