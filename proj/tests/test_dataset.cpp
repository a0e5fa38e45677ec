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

#include <doctest.h>

#include <fstream>
#include <functional>

#include "percept/errors.hpp"
#include "percept/prng.hpp"
#include "testutil.hpp"

using namespace percept;
using percept::testing::ManifestItem;
using percept::testing::TempDir;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a percept::Error");
  return ErrorCode::IoError;
}

}  // namespace

TEST_SUITE_BEGIN("dataset");

TEST_CASE("normalize_score maps endpoints and midpoints") {
  CHECK(normalize_score(50.0, {0.0, 100.0}) == doctest::Approx(0.5));
  CHECK(normalize_score(0.0, {0.0, 100.0}) == 0.0);
  CHECK(normalize_score(100.0, {0.0, 100.0}) == 1.0);
  CHECK(normalize_score(3.0, {1.0, 9.0}) == doctest::Approx(0.25));
}

TEST_CASE("normalize_score rejects degenerate and out-of-range input") {
  CHECK(code_of([] { normalize_score(1.0, {5.0, 5.0}); }) == ErrorCode::DegenerateRange);
  CHECK(code_of([] { normalize_score(1.0, {5.0, 2.0}); }) == ErrorCode::DegenerateRange);
  CHECK(code_of([] { normalize_score(120.0, {0.0, 100.0}); }) == ErrorCode::ScoreOutOfRange);
}

TEST_CASE("normalization is affine and order preserving") {
  Rng rng(11);
  const ScoreRange range{-3.0, 47.0};
  for (int trial = 0; trial < 200; ++trial) {
    double a = range.min + rng.uniform01() * (range.max - range.min);
    double b = range.min + rng.uniform01() * (range.max - range.min);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    CHECK(normalize_score(a, range) < normalize_score(b, range));
  }
}

TEST_CASE("load_manifest validates and normalizes") {
  TempDir dir;
  for (int i = 0; i < 3; ++i) {
    percept::testing::write_ppm(dir / ("img" + std::to_string(i) + ".ppm"), 4, 4, i);
  }
  const auto manifest = percept::testing::write_manifest(
      dir.path(), "demo", 0.0, 100.0,
      {{"a", "ads", "img0.ppm", 0.0}, {"b", "ads", "img1.ppm", 50.0},
       {"c", "ads", "img2.ppm", 100.0}});
  const DatasetIndex index = load_manifest(manifest);
  CHECK(index.dataset == "demo");
  CHECK(index.items.size() == 3);
  CHECK(*index.find("a")->ground_truth_norm == doctest::Approx(0.0));
  CHECK(*index.find("b")->ground_truth_norm == doctest::Approx(0.5));
  CHECK(*index.find("c")->ground_truth_norm == doctest::Approx(1.0));
  CHECK(index.find("a")->width == 4);
  CHECK(index.find("a")->height == 4);
}

TEST_CASE("load_manifest error paths") {
  TempDir dir;
  percept::testing::write_ppm(dir / "ok.ppm", 4, 4);

  SUBCASE("duplicate id") {
    const auto manifest = percept::testing::write_manifest(
        dir.path(), "demo", 0.0, 100.0,
        {{"img_7", "ads", "ok.ppm", 1.0}, {"img_7", "ads", "ok.ppm", 2.0}});
    CHECK(code_of([&] { load_manifest(manifest); }) == ErrorCode::DuplicateId);
  }
  SUBCASE("score out of declared range") {
    const auto manifest = percept::testing::write_manifest(
        dir.path(), "demo", 0.0, 100.0,
        {{"a", "ads", "ok.ppm", 120.0}, {"b", "ads", "ok.ppm", 5.0}});
    CHECK(code_of([&] { load_manifest(manifest); }) == ErrorCode::ScoreOutOfRange);
  }
  SUBCASE("missing image file") {
    const auto manifest = percept::testing::write_manifest(
        dir.path(), "demo", 0.0, 100.0,
        {{"a", "ads", "absent.ppm", 1.0}, {"b", "ads", "ok.ppm", 5.0}});
    CHECK(code_of([&] { load_manifest(manifest); }) == ErrorCode::MissingImageFile);
  }
  SUBCASE("malformed manifest") {
    const auto path = dir / "broken.json";
    std::ofstream(path) << "{ not json";
    CHECK(code_of([&] { load_manifest(path); }) == ErrorCode::ParseError);
  }
  SUBCASE("missing field") {
    const auto path = dir / "nofield.json";
    std::ofstream(path) << R"({"dataset": "d", "items": []})";
    CHECK(code_of([&] { load_manifest(path); }) == ErrorCode::ParseError);
  }
  SUBCASE("single-item category") {
    const auto manifest = percept::testing::write_manifest(
        dir.path(), "demo", 0.0, 100.0, {{"a", "ads", "ok.ppm", 1.0}});
    CHECK(code_of([&] { load_manifest(manifest); }) == ErrorCode::TooFewItems);
  }
}

TEST_CASE("oversized items are rejected or downscaled per policy") {
  TempDir dir;
  percept::testing::write_bytes(dir / "big.png", percept::testing::png_header_bytes(9000, 200));
  percept::testing::write_ppm(dir / "big.ppm", 100, 50);
  percept::testing::write_ppm(dir / "small.ppm", 4, 4);

  SUBCASE("reject by default") {
    const auto manifest = percept::testing::write_manifest(
        dir.path(), "demo", 0.0, 100.0,
        {{"a", "ads", "big.png", 1.0}, {"b", "ads", "small.ppm", 2.0}});
    IngestOptions options;
    options.max_image_dimension = 8000;
    CHECK(code_of([&] { load_manifest(manifest, options); }) == ErrorCode::ImageTooLarge);
  }
  SUBCASE("downscale raw formats when enabled") {
    const auto manifest = percept::testing::write_manifest(
        dir.path(), "demo", 0.0, 100.0,
        {{"a", "ads", "big.ppm", 1.0}, {"b", "ads", "small.ppm", 2.0}});
    IngestOptions options;
    options.max_image_dimension = 10;
    options.oversize_policy = OversizePolicy::Downscale;
    const DatasetIndex index = load_manifest(manifest, options);
    CHECK(index.find("a")->width == 10);
    CHECK(index.find("a")->height == 5);
    CHECK(index.find("a")->downscaled);
    CHECK_FALSE(index.find("b")->downscaled);
  }
  SUBCASE("compressed formats cannot be downscaled") {
    const auto manifest = percept::testing::write_manifest(
        dir.path(), "demo", 0.0, 100.0,
        {{"a", "ads", "big.png", 1.0}, {"b", "ads", "small.ppm", 2.0}});
    IngestOptions options;
    options.max_image_dimension = 8000;
    options.oversize_policy = OversizePolicy::Downscale;
    CHECK(code_of([&] { load_manifest(manifest, options); }) ==
          ErrorCode::UnsupportedDownscale);
  }
}

TEST_CASE("partition_by_category groups and orders deterministically") {
  TempDir dir;
  percept::testing::write_ppm(dir / "i.ppm", 4, 4);
  const auto manifest = percept::testing::write_manifest(
      dir.path(), "demo", 0.0, 100.0,
      {{"s2", "scenes", "i.ppm", 1.0},
       {"a1", "ads", "i.ppm", 2.0},
       {"a3", "ads", "i.ppm", 3.0},
       {"s1", "scenes", "i.ppm", 4.0},
       {"a2", "ads", "i.ppm", 5.0}});
  const DatasetIndex index = load_manifest(manifest);
  const auto partitions = partition_by_category(index);
  REQUIRE(partitions.size() == 2);
  CHECK(partitions[0].first == "ads");
  CHECK(partitions[0].second.size() == 3);
  CHECK(partitions[1].first == "scenes");
  CHECK(partitions[1].second.size() == 2);
  CHECK(partitions[0].second[0].id == "a1");
  CHECK(partitions[0].second[2].id == "a3");

  std::size_t total = 0;
  for (const auto& [category, items] : partitions) total += items.size();
  CHECK(total == index.items.size());
}

TEST_CASE("partition of an empty index is empty") {
  CHECK(partition_by_category(DatasetIndex{}).empty());
}

TEST_CASE("single-category index yields one partition") {
  TempDir dir;
  percept::testing::write_ppm(dir / "i.ppm", 4, 4);
  const auto manifest = percept::testing::write_manifest(
      dir.path(), "demo", 0.0, 100.0,
      {{"a", "ads", "i.ppm", 1.0}, {"b", "ads", "i.ppm", 2.0}});
  CHECK(partition_by_category(load_manifest(manifest)).size() == 1);
}

TEST_CASE("ingest, re-serialize, re-ingest is the identity") {
  TempDir dir;
  const auto fixture = percept::testing::make_dataset(dir.path(), "demo", 3, {"ads", "art"});
  const DatasetIndex first = load_manifest(fixture.manifest);
  const std::string serialized = serialize_manifest(first);
  const auto copy_path = dir / "manifest_copy.json";
  std::ofstream(copy_path) << serialized;
  const DatasetIndex second = load_manifest(copy_path);

  REQUIRE(first.items.size() == second.items.size());
  CHECK(first.dataset == second.dataset);
  CHECK(first.score_range.min == second.score_range.min);
  CHECK(first.score_range.max == second.score_range.max);
  for (std::size_t i = 0; i < first.items.size(); ++i) {
    CHECK(first.items[i].id == second.items[i].id);
    CHECK(first.items[i].category == second.items[i].category);
    CHECK(first.items[i].locator == second.items[i].locator);
    CHECK(first.items[i].width == second.items[i].width);
    CHECK(first.items[i].height == second.items[i].height);
    CHECK(first.items[i].ground_truth == second.items[i].ground_truth);
    CHECK(first.items[i].ground_truth_norm == second.items[i].ground_truth_norm);
  }
}

TEST_SUITE_END();
