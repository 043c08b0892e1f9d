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

// Writes synthetic .mvpe embedding streams so the pipeline can run without
// the Python extractor.

#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "mvp/embedding.hpp"
#include "mvp/error.hpp"
#include "mvp/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Write synthetic .mvpe embedding files", "mvp-fixture-embeddings"};
  std::string out;
  std::size_t count = 8;
  std::uint64_t seed = 0;
  mvp::synthetic::VideoOptions opt;
  app.add_option("--out", out, "Output directory")->required();
  app.add_option("--videos", count, "Number of videos")->capture_default_str();
  app.add_option("--frames", opt.frames, "Frames per video (1 FPS)")->capture_default_str();
  app.add_option("--dim", opt.dim, "Embedding dimension")->capture_default_str();
  app.add_option("--duplicate-prob", opt.duplicate_prob,
                 "Chance a frame repeats its predecessor")
      ->capture_default_str();
  app.add_option("--seed", seed, "RNG seed")->capture_default_str();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e, std::cerr, std::cerr);
    return 1;
  }

  try {
    std::filesystem::create_directories(out);
    for (const auto& v : mvp::synthetic::video_corpus(count, seed, opt))
      mvp::write_mvpe(std::filesystem::path(out) / (v.video_id() + ".mvpe"), v);
  } catch (const std::exception& e) {
    std::cerr << "mvp-fixture-embeddings: " << e.what() << '\n';
    return 2;
  }
  std::cout << "wrote " << count << " videos to " << out << '\n';
  return 0;
}
