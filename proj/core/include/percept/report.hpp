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

#ifndef PERCEPT_REPORT_HPP_
#define PERCEPT_REPORT_HPP_

#include <map>
#include <string>

#include "percept/metrics.hpp"

namespace percept {

struct CategoryCounts {
  long long scheduled = 0;
  long long judged = 0;  // verdicts obtained, fresh or cached
  long long cached = 0;  // subset of judged answered from the cache
  long long failed = 0;
  long long skipped = 0;
};

struct RunSummary {
  std::string dataset;
  std::string schedule_mode;
  std::string judge_backend;
  std::string model_id;
  std::map<std::string, CategoryCounts> categories;
  long long backend_calls = 0;
  double wall_time_seconds = 0.0;
  std::string config_hash;
};

enum class TableFormat { Csv, Markdown };

// Correlation table shaped like a published results table: one row per
// perception parameter in canonical order, one PLCC and one SROCC column per
// category (categories sorted), values to 2 decimals. Markdown bolds every
// cell equal to its column maximum. Reports holding both scoring methods get
// one table section per method. Throws EmptyReport.
std::string emit_table(const CorrelationReport& report, TableFormat format);

enum class CorrelationMetric { Plcc, Srocc };

// Radar chart as a standalone SVG document: one axis per parameter, one
// closed polygon per category, fixed radial scale [-0.2, 1.0] with values
// clamped for display (the scale and any clamping are annotated). When both
// scoring methods are present the win-rate cells are drawn. Deterministic
// byte-for-byte for a fixed report. Throws TooFewAxes when fewer than 3
// parameters are covered.
std::string emit_radar(const CorrelationReport& report, CorrelationMetric metric);

// Run summary as JSON with stable key order. Enforces
// judged + failed + skipped == scheduled per category (CountMismatch).
std::string emit_summary(const RunSummary& summary);

}  // namespace percept

#endif  // PERCEPT_REPORT_HPP_
