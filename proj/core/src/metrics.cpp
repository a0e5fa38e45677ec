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

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "percept/errors.hpp"

namespace percept {

namespace {

void check_inputs(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::LengthMismatch, "vectors have lengths " + std::to_string(x.size()) +
                                               " and " + std::to_string(y.size()));
  }
  if (x.size() < 3) {
    throw Error(ErrorCode::TooFewSamples,
                "correlation needs at least 3 samples, got " + std::to_string(x.size()));
  }
}

bool is_constant(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

}  // namespace

double pearson(std::span<const double> x, std::span<const double> y) {
  check_inputs(x, y);
  if (is_constant(x) || is_constant(y)) {
    throw Error(ErrorCode::ConstantVector,
                "correlation against a constant vector is undefined");
  }
  const std::size_t n = x.size();
  const double mean_x = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  const double mean_y = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mean_x;
    const double dy = y[i] - mean_y;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  return sxy / std::sqrt(sxx * syy);
}

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    // Positions i..j (0-based) share the mean of 1-based ranks i+1..j+1.
    const double shared = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
    i = j + 1;
  }
  return ranks;
}

double spearman(std::span<const double> x, std::span<const double> y) {
  check_inputs(x, y);
  if (is_constant(x) || is_constant(y)) {
    throw Error(ErrorCode::ConstantVector,
                "rank correlation against a constant vector is undefined");
  }
  const std::vector<double> rx = average_ranks(x);
  const std::vector<double> ry = average_ranks(y);
  return pearson(rx, ry);
}

const CorrelationCell* CorrelationReport::find(const std::string& category,
                                               Principle principle,
                                               ScoreMethod method) const {
  for (const CorrelationCell& cell : cells) {
    if (cell.category == category && cell.principle == principle && cell.method == method) {
      return &cell;
    }
  }
  return nullptr;
}

std::vector<std::string> CorrelationReport::categories() const {
  std::set<std::string> unique;
  for (const CorrelationCell& cell : cells) unique.insert(cell.category);
  return {unique.begin(), unique.end()};
}

std::vector<ScoreMethod> CorrelationReport::methods() const {
  std::vector<ScoreMethod> out;
  for (ScoreMethod method : {ScoreMethod::WinRate, ScoreMethod::BradleyTerry}) {
    for (const CorrelationCell& cell : cells) {
      if (cell.method == method) {
        out.push_back(method);
        break;
      }
    }
  }
  return out;
}

CorrelationReport build_report(const std::vector<ScoreVector>& scores,
                               const DatasetIndex& index) {
  bool any_labeled = false;
  for (const ImageItem& item : index.items) {
    if (item.ground_truth_norm) {
      any_labeled = true;
      break;
    }
  }
  if (!any_labeled) {
    throw Error(ErrorCode::NoLabeledItems,
                "dataset '" + index.dataset + "' has no ground-truth scores to correlate with");
  }

  CorrelationReport report;
  report.dataset = index.dataset;
  for (const ScoreVector& vector : scores) {
    CorrelationCell cell;
    cell.category = vector.category;
    cell.principle = vector.principle;
    cell.method = vector.method;

    std::vector<double> predicted;
    std::vector<double> truth;
    for (const ScoredItem& item : vector.items) {
      const ImageItem* indexed = index.find(item.id);
      if (!indexed) {
        throw Error(ErrorCode::UnknownItem,
                    "scored item '" + item.id + "' is not in dataset '" + index.dataset + "'");
      }
      if (indexed->ground_truth_norm) {
        predicted.push_back(item.score);
        truth.push_back(*indexed->ground_truth_norm);
      }
    }
    cell.n = static_cast<int>(predicted.size());
    if (cell.n < 3) {
      cell.status = CellStatus::Insufficient;
    } else {
      try {
        cell.plcc = pearson(predicted, truth);
        cell.srocc = spearman(predicted, truth);
        cell.status = CellStatus::Ok;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::ConstantVector) throw;
        cell.status = CellStatus::Undefined;
      }
    }
    report.cells.push_back(std::move(cell));
  }
  return report;
}

}  // namespace percept
