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

#include "percept/dataset.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "percept/errors.hpp"
#include "percept/image.hpp"
#include "percept/io.hpp"

namespace percept {

namespace {

using nlohmann::json;

json require_field(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) {
    throw Error(ErrorCode::ParseError, where + ": missing required field '" + key + "'");
  }
  return obj.at(key);
}

}  // namespace

const ImageItem* DatasetIndex::find(const std::string& id) const {
  for (const ImageItem& item : items) {
    if (item.id == id) return &item;
  }
  return nullptr;
}

double normalize_score(double raw, ScoreRange range) {
  if (!(range.min < range.max)) {
    throw Error(ErrorCode::DegenerateRange,
                "score_range [" + std::to_string(range.min) + ", " +
                    std::to_string(range.max) + "] has no width");
  }
  if (raw < range.min || raw > range.max) {
    throw Error(ErrorCode::ScoreOutOfRange,
                "score " + std::to_string(raw) + " outside declared range [" +
                    std::to_string(range.min) + ", " + std::to_string(range.max) + "]");
  }
  return (raw - range.min) / (range.max - range.min);
}

DatasetIndex load_manifest(const std::filesystem::path& manifest_path,
                           const IngestOptions& options) {
  json doc;
  try {
    doc = json::parse(read_text_file(manifest_path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError,
                "manifest " + manifest_path.string() + ": " + e.what());
  }
  if (!doc.is_object()) {
    throw Error(ErrorCode::ParseError, "manifest root must be a JSON object");
  }

  DatasetIndex index;
  const std::string where = manifest_path.filename().string();
  const json name = require_field(doc, "dataset", where);
  if (!name.is_string()) throw Error(ErrorCode::ParseError, where + ": 'dataset' must be a string");
  index.dataset = name.get<std::string>();

  const json range = require_field(doc, "score_range", where);
  if (!range.is_array() || range.size() != 2 || !range[0].is_number() || !range[1].is_number()) {
    throw Error(ErrorCode::ParseError, where + ": 'score_range' must be [min, max]");
  }
  index.score_range = {range[0].get<double>(), range[1].get<double>()};
  if (!(index.score_range.min < index.score_range.max)) {
    throw Error(ErrorCode::DegenerateRange, where + ": score_range has no width");
  }

  const json items = require_field(doc, "items", where);
  if (!items.is_array()) throw Error(ErrorCode::ParseError, where + ": 'items' must be an array");

  const std::filesystem::path base = manifest_path.has_parent_path()
                                         ? manifest_path.parent_path()
                                         : std::filesystem::path(".");
  std::set<std::string> seen_ids;
  for (const json& entry : items) {
    if (!entry.is_object()) {
      throw Error(ErrorCode::ParseError, where + ": item entries must be objects");
    }
    ImageItem item;
    item.dataset = index.dataset;
    item.id = require_field(entry, "id", where).get<std::string>();
    item.category = require_field(entry, "category", where).get<std::string>();
    item.locator = require_field(entry, "path", where).get<std::string>();
    if (!seen_ids.insert(item.id).second) {
      throw Error(ErrorCode::DuplicateId, "item id '" + item.id + "' appears more than once");
    }
    if (entry.contains("score")) {
      if (!entry.at("score").is_number()) {
        throw Error(ErrorCode::ParseError, where + ": 'score' must be a number");
      }
      item.ground_truth = entry.at("score").get<double>();
      item.ground_truth_norm = normalize_score(*item.ground_truth, index.score_range);
    }

    item.resolved_path = std::filesystem::path(item.locator).is_absolute()
                             ? std::filesystem::path(item.locator)
                             : base / item.locator;
    if (!std::filesystem::exists(item.resolved_path)) {
      throw Error(ErrorCode::MissingImageFile,
                  "item '" + item.id + "': no file at " + item.resolved_path.string());
    }
    const auto bytes = read_file(item.resolved_path);
    ImageInfo info;
    try {
      info = probe_image(bytes);
    } catch (const Error& e) {
      throw Error(e.code(), "item '" + item.id + "': " + e.what());
    }
    item.width = info.width;
    item.height = info.height;
    const int limit = options.max_image_dimension;
    if (info.width > limit || info.height > limit) {
      if (options.oversize_policy == OversizePolicy::Reject) {
        throw Error(ErrorCode::ImageTooLarge,
                    "item '" + item.id + "' is " + std::to_string(info.width) + "x" +
                        std::to_string(info.height) + ", judge limit is " +
                        std::to_string(limit) + " per side");
      }
      const auto scaled = downscale_to_fit(bytes, limit);
      const ImageInfo scaled_info = probe_image(scaled);
      item.width = scaled_info.width;
      item.height = scaled_info.height;
      item.downscaled = true;
    }
    index.items.push_back(std::move(item));
  }

  // Pairwise comparison needs at least two items per category.
  std::map<std::string, int> category_counts;
  for (const ImageItem& item : index.items) ++category_counts[item.category];
  for (const auto& [category, count] : category_counts) {
    if (count < 2) {
      throw Error(ErrorCode::TooFewItems,
                  "category '" + category + "' has " + std::to_string(count) +
                      " item(s); pairwise comparison needs at least 2");
    }
  }
  return index;
}

std::string serialize_manifest(const DatasetIndex& index) {
  json doc;
  doc["dataset"] = index.dataset;
  doc["score_range"] = {index.score_range.min, index.score_range.max};
  json items = json::array();
  for (const ImageItem& item : index.items) {
    json entry;
    entry["id"] = item.id;
    entry["category"] = item.category;
    entry["path"] = item.locator;
    if (item.ground_truth) entry["score"] = *item.ground_truth;
    items.push_back(std::move(entry));
  }
  doc["items"] = std::move(items);
  return doc.dump(2) + "\n";
}

std::vector<std::pair<std::string, std::vector<ImageItem>>> partition_by_category(
    const DatasetIndex& index) {
  std::map<std::string, std::vector<ImageItem>> buckets;
  for (const ImageItem& item : index.items) {
    buckets[item.category].push_back(item);
  }
  std::vector<std::pair<std::string, std::vector<ImageItem>>> partitions;
  partitions.reserve(buckets.size());
  for (auto& [category, bucket] : buckets) {
    std::sort(bucket.begin(), bucket.end(),
              [](const ImageItem& a, const ImageItem& b) { return a.id < b.id; });
    partitions.emplace_back(category, std::move(bucket));
  }
  return partitions;
}

}  // namespace percept
