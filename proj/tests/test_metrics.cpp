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

#include "percept/metrics.hpp"

#include <doctest.h>

#include <cmath>

#include "percept/errors.hpp"
#include "percept/prng.hpp"
#include "testutil.hpp"

using namespace percept;
using percept::testing::TempDir;

namespace {

// High-precision reference: long double raw-moment formulation with a
// different algebraic route than the implementation.
long double pearson_reference(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  long double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const long double xi = x[i];
    const long double yi = y[i];
    sx += xi;
    sy += yi;
    sxx += xi * xi;
    syy += yi * yi;
    sxy += xi * yi;
  }
  const long double num = n * sxy - sx * sy;
  const long double den = std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
  return num / den;
}

long double spearman_reference(const std::vector<double>& x, const std::vector<double>& y) {
  auto ranks = [](const std::vector<double>& v) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      double below = 0.0;
      double equal = 0.0;
      for (double other : v) {
        if (other < v[i]) below += 1.0;
        if (other == v[i]) equal += 1.0;
      }
      out[i] = below + (equal + 1.0) / 2.0;  // mean of the tied positions
    }
    return out;
  };
  return pearson_reference(ranks(x), ranks(y));
}

std::vector<double> random_vector(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (double& value : v) value = rng.uniform01();
  return v;
}

}  // namespace

TEST_SUITE_BEGIN("metrics");

TEST_CASE("pearson on worked examples") {
  CHECK(pearson(std::vector<double>{1, 2, 3}, std::vector<double>{2, 4, 6}) ==
        doctest::Approx(1.0));
  CHECK(pearson(std::vector<double>{1, 2, 3}, std::vector<double>{3, 2, 1}) ==
        doctest::Approx(-1.0));
  // Deviations: covariance sum 4.0 over sqrt(5.0 * 5.0).
  CHECK(pearson(std::vector<double>{1, 2, 3, 4}, std::vector<double>{1, 3, 2, 4}) ==
        doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("pearson error paths") {
  auto expect_code = [](ErrorCode want, auto fn) {
    try {
      fn();
      FAIL("expected error");
    } catch (const Error& e) {
      CHECK(e.code() == want);
    }
  };
  expect_code(ErrorCode::LengthMismatch, [] {
    pearson(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2});
  });
  expect_code(ErrorCode::TooFewSamples, [] {
    pearson(std::vector<double>{1, 2}, std::vector<double>{1, 2});
  });
  expect_code(ErrorCode::ConstantVector, [] {
    pearson(std::vector<double>{2, 2, 2}, std::vector<double>{1, 2, 3});
  });
  expect_code(ErrorCode::ConstantVector, [] {
    spearman(std::vector<double>{1, 2, 3}, std::vector<double>{5, 5, 5});
  });
}

TEST_CASE("average ranks share tied positions") {
  const std::vector<double> ranks = average_ranks(std::vector<double>{1, 2, 2, 3});
  CHECK(ranks == std::vector<double>{1.0, 2.5, 2.5, 4.0});
}

TEST_CASE("spearman on worked examples") {
  CHECK(spearman(std::vector<double>{0.1, 0.5, 0.7, 0.9},
                 std::vector<double>{10, 20, 30, 40}) == doctest::Approx(1.0));
  CHECK(spearman(std::vector<double>{1, 2, 3, 4}, std::vector<double>{1, 3, 2, 4}) ==
        doctest::Approx(0.8).epsilon(1e-12));
  // x ranks [1, 2.5, 2.5, 4]: 4.5 / sqrt(22.5).
  CHECK(spearman(std::vector<double>{1, 2, 2, 3}, std::vector<double>{1, 2, 3, 4}) ==
        doctest::Approx(4.5 / std::sqrt(22.5)).epsilon(1e-4));
  CHECK(spearman(std::vector<double>{1, 2, 2, 3}, std::vector<double>{1, 2, 3, 4}) ==
        doctest::Approx(0.9487).epsilon(1e-4));
}

TEST_CASE("pearson symmetry and affine invariance") {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 3 + rng.uniform_below(40);
    const std::vector<double> x = random_vector(rng, n);
    const std::vector<double> y = random_vector(rng, n);
    const double r = pearson(x, y);
    CHECK(pearson(y, x) == doctest::Approx(r).epsilon(1e-12));

    std::vector<double> scaled(n);
    const double a = 0.5 + rng.uniform01() * 3.0;
    const double b = rng.uniform01() * 10.0 - 5.0;
    for (std::size_t i = 0; i < n; ++i) scaled[i] = a * x[i] + b;
    CHECK(pearson(scaled, y) == doctest::Approx(r).epsilon(1e-9));
    for (std::size_t i = 0; i < n; ++i) scaled[i] = -a * x[i] + b;
    CHECK(pearson(scaled, y) == doctest::Approx(-r).epsilon(1e-9));
  }
}

TEST_CASE("spearman depends only on rank order") {
  Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 3 + rng.uniform_below(40);
    const std::vector<double> x = random_vector(rng, n);
    const std::vector<double> y = random_vector(rng, n);
    const double rho = spearman(x, y);

    std::vector<double> transformed(n);
    for (std::size_t i = 0; i < n; ++i) transformed[i] = std::exp(3.0 * x[i]);
    CHECK(spearman(transformed, y) == rho);
    for (std::size_t i = 0; i < n; ++i) transformed[i] = x[i] * x[i] * x[i] + 2.0 * x[i];
    CHECK(spearman(transformed, y) == rho);
  }
}

TEST_CASE("both coefficients match the high-precision reference") {
  Rng rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 10 + rng.uniform_below(91);
    const std::vector<double> x = random_vector(rng, n);
    const std::vector<double> y = random_vector(rng, n);
    CHECK(std::abs(pearson(x, y) - static_cast<double>(pearson_reference(x, y))) < 1e-12);
    CHECK(std::abs(spearman(x, y) - static_cast<double>(spearman_reference(x, y))) < 1e-12);
  }
}

namespace {

// Small labeled index without touching the filesystem beyond the fixture.
DatasetIndex make_index(const std::vector<std::tuple<std::string, std::string, double>>& rows) {
  DatasetIndex index;
  index.dataset = "demo";
  index.score_range = {0.0, 100.0};
  for (const auto& [id, category, score] : rows) {
    ImageItem item;
    item.id = id;
    item.dataset = "demo";
    item.category = category;
    item.ground_truth = score;
    item.ground_truth_norm = score / 100.0;
    index.items.push_back(item);
  }
  return index;
}

ScoreVector make_scores(const std::string& category, Principle principle,
                        const std::vector<std::pair<std::string, double>>& values) {
  ScoreVector scores;
  scores.category = category;
  scores.principle = principle;
  scores.method = ScoreMethod::WinRate;
  for (const auto& [id, value] : values) scores.items.push_back({id, value, 0});
  return scores;
}

}  // namespace

TEST_CASE("build_report correlates per cell against normalized ground truth") {
  const DatasetIndex index = make_index(
      {{"a", "ads", 10.0}, {"b", "ads", 40.0}, {"c", "ads", 70.0}, {"d", "ads", 90.0}});
  const std::vector<ScoreVector> scores = {make_scores(
      "ads", Principle::VisualClutter, {{"a", 0.1}, {"b", 0.4}, {"c", 0.7}, {"d", 0.9}})};
  const CorrelationReport report = build_report(scores, index);
  REQUIRE(report.cells.size() == 1);
  CHECK(report.cells[0].status == CellStatus::Ok);
  CHECK(report.cells[0].plcc == doctest::Approx(1.0));
  CHECK(report.cells[0].srocc == doctest::Approx(1.0));
  CHECK(report.cells[0].n == 4);
}

TEST_CASE("cells with fewer than 3 labeled items are marked insufficient") {
  DatasetIndex index = make_index({{"a", "ads", 10.0}, {"b", "ads", 40.0}});
  ImageItem unlabeled;
  unlabeled.id = "c";
  unlabeled.category = "ads";
  index.items.push_back(unlabeled);
  const std::vector<ScoreVector> scores = {make_scores(
      "ads", Principle::VisualClutter, {{"a", 0.1}, {"b", 0.4}, {"c", 0.9}})};
  const CorrelationReport report = build_report(scores, index);
  REQUIRE(report.cells.size() == 1);
  CHECK(report.cells[0].status == CellStatus::Insufficient);
  CHECK(report.cells[0].n == 2);
}

TEST_CASE("constant score vectors yield undefined cells, not zero") {
  const DatasetIndex index =
      make_index({{"a", "ads", 10.0}, {"b", "ads", 40.0}, {"c", "ads", 70.0}});
  const std::vector<ScoreVector> scores = {make_scores(
      "ads", Principle::Proximity, {{"a", 0.5}, {"b", 0.5}, {"c", 0.5}})};
  const CorrelationReport report = build_report(scores, index);
  CHECK(report.cells[0].status == CellStatus::Undefined);
}

TEST_CASE("a fully labeled 6-category run yields 48 cells per method") {
  std::vector<std::tuple<std::string, std::string, double>> rows;
  std::vector<ScoreVector> scores;
  const std::vector<std::string> categories = {"Advertisement", "Interior Design", "Objects",
                                               "Scenes", "Suprematism", "Visualizations"};
  for (const std::string& category : categories) {
    std::vector<std::pair<std::string, double>> values;
    for (int i = 0; i < 4; ++i) {
      const std::string id = category + "_" + std::to_string(i);
      rows.emplace_back(id, category, 20.0 * i + 1.0);
      values.emplace_back(id, 0.2 * i);
    }
    for (Principle principle : all_principles()) {
      scores.push_back(make_scores(category, principle, values));
    }
  }
  const CorrelationReport report = build_report(scores, make_index(rows));
  CHECK(report.cells.size() == 48);
  CHECK(report.categories().size() == 6);
}

TEST_CASE("unlabeled items are excluded and reflected in n") {
  DatasetIndex index = make_index({{"a", "ads", 10.0}, {"b", "ads", 40.0}, {"c", "ads", 70.0}});
  ImageItem unlabeled;
  unlabeled.id = "d";
  unlabeled.category = "ads";
  index.items.push_back(unlabeled);
  const std::vector<ScoreVector> scores = {make_scores(
      "ads", Principle::VisualClutter, {{"a", 0.1}, {"b", 0.4}, {"c", 0.7}, {"d", 0.99}})};
  const CorrelationReport report = build_report(scores, index);
  CHECK(report.cells[0].n == 3);
  CHECK(report.cells[0].status == CellStatus::Ok);
}

TEST_CASE("a dataset without any labels cannot be correlated") {
  DatasetIndex index;
  index.dataset = "demo";
  for (const char* id : {"a", "b", "c"}) {
    ImageItem item;
    item.id = id;
    item.category = "ads";
    index.items.push_back(item);
  }
  const std::vector<ScoreVector> scores = {make_scores(
      "ads", Principle::VisualClutter, {{"a", 0.1}, {"b", 0.4}, {"c", 0.7}})};
  try {
    build_report(scores, index);
    FAIL("expected NoLabeledItems");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoLabeledItems);
  }
}

TEST_SUITE_END();
