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

#ifndef PERCEPT_TOOLS_DEMO_DATASET_HPP_
#define PERCEPT_TOOLS_DEMO_DATASET_HPP_

#include <cstdint>
#include <filesystem>

namespace percept::tools {

struct DemoSpec {
  std::filesystem::path directory;
  int items_per_category = 12;
  int categories = 2;
  std::uint64_t seed = 7;
};

// Writes a ready-to-run synthetic dataset: PPM images whose busyness tracks
// a ground-truth complexity score, a manifest.json, and a latents.json
// sidecar for the simulated judge. Returns the manifest path.
std::filesystem::path generate_demo_dataset(const DemoSpec& spec);

}  // namespace percept::tools

#endif  // PERCEPT_TOOLS_DEMO_DATASET_HPP_
