// Copyright 2026 The Percept Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "demo_dataset.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "percept/errors.hpp"
#include "percept/io.hpp"
#include "percept/prng.hpp"
#include "percept/prompt.hpp"

namespace percept::tools {

namespace {

// 96x72 PPM whose clutter tracks `busyness` in [0, 1]: a light canvas with
// busyness-many random dark rectangles scattered over it.
std::vector<std::uint8_t> busy_image(double busyness, Rng& rng) {
  const int width = 96;
  const int height = 72;
  std::vector<std::uint8_t> pixels(static_cast<std::size_t>(width) * height * 3, 0xe8);
  const int rectangles = static_cast<int>(2 + busyness * 60);
  for (int r = 0; r < rectangles; ++r) {
    const int x0 = static_cast<int>(rng.uniform_below(width - 4));
    const int y0 = static_cast<int>(rng.uniform_below(height - 4));
    const int w = 2 + static_cast<int>(rng.uniform_below(10));
    const int h = 2 + static_cast<int>(rng.uniform_below(8));
    const std::uint8_t shade = static_cast<std::uint8_t>(rng.uniform_below(140));
    for (int y = y0; y < std::min(height, y0 + h); ++y) {
      for (int x = x0; x < std::min(width, x0 + w); ++x) {
        const std::size_t at = (static_cast<std::size_t>(y) * width + x) * 3;
        pixels[at] = shade;
        pixels[at + 1] = static_cast<std::uint8_t>(shade / 2 + 40);
        pixels[at + 2] = static_cast<std::uint8_t>(255 - shade);
      }
    }
  }
  const std::string header =
      "P6\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), pixels.begin(), pixels.end());
  return out;
}

}  // namespace

std::filesystem::path generate_demo_dataset(const DemoSpec& spec) {
  if (spec.items_per_category < 2 || spec.categories < 1) {
    throw Error(ErrorCode::ConfigError,
                "demo dataset needs >= 2 items per category and >= 1 category");
  }
  std::filesystem::create_directories(spec.directory / "images");
  Rng rng(spec.seed);

  nlohmann::json manifest;
  manifest["dataset"] = "percept-demo";
  manifest["score_range"] = {0.0, 100.0};
  nlohmann::json items = nlohmann::json::array();
  nlohmann::json latents;

  int counter = 0;
  const int total = spec.items_per_category * spec.categories;
  for (int c = 0; c < spec.categories; ++c) {
    const std::string category = "category_" + std::string(1, static_cast<char>('a' + c % 26));
    for (int i = 0; i < spec.items_per_category; ++i, ++counter) {
      char id[32];
      std::snprintf(id, sizeof(id), "demo_%03d", counter);
      const double score = total > 1 ? 100.0 * counter / (total - 1) : 50.0;
      const std::string rel = "images/" + std::string(id) + ".ppm";
      write_file(spec.directory / rel, busy_image(score / 100.0, rng));
      items.push_back({{"id", id}, {"category", category}, {"path", rel}, {"score", score}});

      // Per-parameter latents near the complexity score, each parameter
      // nudged differently so rankings are not identical across parameters.
      nlohmann::json entry;
      for (Principle principle : all_principles()) {
        const double nudge = (rng.uniform01() - 0.5) * 0.08;
        entry[principle_token(principle)] = std::clamp(score / 100.0 + nudge, 0.0, 1.0);
      }
      latents[id] = entry;
    }
  }
  manifest["items"] = items;

  const auto manifest_path = spec.directory / "manifest.json";
  write_file(manifest_path, manifest.dump(2) + "\n");
  write_file(spec.directory / "latents.json", latents.dump(2) + "\n");
  return manifest_path;
}

}  // namespace percept::tools
