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

#ifndef PERCEPT_METRICS_HPP_
#define PERCEPT_METRICS_HPP_

#include <span>
#include <string>
#include <vector>

#include "percept/aggregate.hpp"
#include "percept/dataset.hpp"

namespace percept {

// Pearson linear correlation coefficient. Throws LengthMismatch,
// TooFewSamples (n < 3), ConstantVector.
double pearson(std::span<const double> x, std::span<const double> y);

// Spearman rank-order correlation: Pearson over average ranks. Ties receive
// the mean of the rank positions they occupy, which keeps the coefficient
// unbiased when scores tie (win rates are discrete multiples of 1/n, so ties
// are routine). Errors as pearson.
double spearman(std::span<const double> x, std::span<const double> y);

// 1-based average ranks in ascending value order; tied values share the mean
// of the positions they span.
std::vector<double> average_ranks(std::span<const double> values);

enum class CellStatus {
  Ok,
  Insufficient,  // fewer than 3 labeled items in the cell
  Undefined,     // constant score or ground-truth vector; no correlation exists
};

struct CorrelationCell {
  std::string category;
  Principle principle = Principle::Similarity;
  ScoreMethod method = ScoreMethod::WinRate;
  CellStatus status = CellStatus::Insufficient;
  double plcc = 0.0;
  double srocc = 0.0;
  int n = 0;  // labeled items actually correlated
};

struct CorrelationReport {
  std::string dataset;
  std::vector<CorrelationCell> cells;

  const CorrelationCell* find(const std::string& category, Principle principle,
                              ScoreMethod method) const;
  std::vector<std::string> categories() const;       // sorted unique
  std::vector<ScoreMethod> methods() const;          // in enum order, present only
};

// One cell per (category, principle, method): PLCC and SROCC of the score
// vector against normalized ground truth over the labeled items. Cells with
// fewer than 3 labeled items are marked Insufficient; constant vectors yield
// Undefined rather than a fake 0. Throws NoLabeledItems when the entire
// index carries no ground truth.
CorrelationReport build_report(const std::vector<ScoreVector>& scores,
                               const DatasetIndex& index);

}  // namespace percept

#endif  // PERCEPT_METRICS_HPP_
