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

#ifndef PERCEPT_DATASET_HPP_
#define PERCEPT_DATASET_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace percept {

struct ScoreRange {
  double min = 0.0;
  double max = 1.0;
};

struct ImageItem {
  std::string id;
  std::string dataset;
  std::string category;
  std::string locator;                  // path as written in the manifest
  std::filesystem::path resolved_path;  // locator resolved against the manifest directory
  int width = 0;                        // effective dimensions after ingestion
  int height = 0;
  bool downscaled = false;  // true when ingestion applied proportional downscaling
  std::optional<double> ground_truth;       // raw dataset-native score
  std::optional<double> ground_truth_norm;  // min-max normalized to [0, 1]
};

struct DatasetIndex {
  std::string dataset;
  ScoreRange score_range;
  std::vector<ImageItem> items;  // manifest order

  const ImageItem* find(const std::string& id) const;
};

enum class OversizePolicy { Reject, Downscale };

struct IngestOptions {
  int max_image_dimension = 8000;
  OversizePolicy oversize_policy = OversizePolicy::Reject;
};

// Min-max normalization to [0, 1]. Affine and order preserving.
// Throws DegenerateRange when min >= max, ScoreOutOfRange when raw is
// outside [min, max].
double normalize_score(double raw, ScoreRange range);

// Loads and validates a JSON manifest:
//   {"dataset": "...", "score_range": [min, max],
//    "items": [{"id", "category", "path", "score"?}, ...]}
// Item paths resolve relative to the manifest's directory. Every image file
// must exist and have a readable header; items beyond max_image_dimension
// are rejected or downscaled per IngestOptions.
DatasetIndex load_manifest(const std::filesystem::path& manifest_path,
                           const IngestOptions& options = {});

// Re-emits the manifest JSON for an index. load_manifest(serialize) is the
// identity for indexes whose image files are unchanged.
std::string serialize_manifest(const DatasetIndex& index);

// Category partitions ordered lexicographically by category; items within a
// partition sorted by id. Every item lands in exactly one partition.
std::vector<std::pair<std::string, std::vector<ImageItem>>> partition_by_category(
    const DatasetIndex& index);

}  // namespace percept

#endif  // PERCEPT_DATASET_HPP_
