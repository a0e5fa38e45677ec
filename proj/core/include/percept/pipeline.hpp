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

#ifndef PERCEPT_PIPELINE_HPP_
#define PERCEPT_PIPELINE_HPP_

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "percept/aggregate.hpp"
#include "percept/dataset.hpp"
#include "percept/errors.hpp"
#include "percept/judge.hpp"
#include "percept/metrics.hpp"
#include "percept/report.hpp"
#include "percept/schedule.hpp"

namespace percept {

struct ScheduleSpec {
  ScheduleMode mode = ScheduleMode::Full;
  int budget_k = 0;  // sampled mode: comparisons per item
  bool order_balanced = false;
};

struct RunConfig {
  std::filesystem::path manifest_path;
  std::vector<std::string> category_filter;  // empty = all categories
  ScheduleSpec schedule;
  std::uint64_t seed = 0;  // drives sampled schedules and the simulated judge
  JudgeConfig judge;
  double noise_p = 0.0;                 // simulated backend flip probability
  std::filesystem::path latent_file;    // simulated backend latent scores (optional)
  std::vector<ScoreMethod> methods{ScoreMethod::WinRate, ScoreMethod::BradleyTerry};
  BradleyTerryOptions bradley_terry;
  OversizePolicy oversize_policy = OversizePolicy::Reject;
  std::filesystem::path output_dir = "percept-out";
  std::filesystem::path cache_dir = ".percept-cache";
  bool emit_schedule = false;
  bool emit_matrices = false;
  std::filesystem::path template_file;  // optional prompt override
};

// Hash over the semantic run configuration (fields that change results), key
// order independent. Output paths, concurrency, and retry knobs are excluded.
std::string config_hash(const RunConfig& config);

struct Diagnostic {
  ErrorCode code;
  std::string message;
};

// Side-effect-free preflight: manifest validity, image dimensions against the
// judge limit, schedule feasibility per category, credential presence for the
// live backend, latent coverage for the simulated one. Returns diagnostics
// instead of throwing; an empty list means the config is runnable.
std::vector<Diagnostic> validate(const RunConfig& config);

struct RunResult {
  RunSummary summary;
  // Absent when the dataset carries no ground truth (scoring still runs).
  std::optional<CorrelationReport> report;
  std::vector<ComparisonMatrix> matrices;
  std::vector<ScoreVector> scores;
};

// End-to-end pipeline: ingest, schedule, judge (through the verdict cache),
// aggregate, correlate, write all report artifacts under output_dir.
// Re-running with a warm cache performs zero backend calls and reproduces
// identical artifacts. Per-pair judge failures are recorded and excluded
// from the matrices; configuration problems throw (ErrorCode::ConfigError
// or the underlying code) before any judging starts.
// backend_override replaces the configured backend (testing hook).
RunResult run(const RunConfig& config,
              std::shared_ptr<JudgeBackend> backend_override = nullptr);

// Judging only: populate the verdict cache and write summary.json (plus
// schedules.json when emit_schedule is set).
RunSummary run_judge_stage(const RunConfig& config,
                           std::shared_ptr<JudgeBackend> backend_override = nullptr);

// Aggregation only: replay the cache against the schedule (zero backend
// calls; unjudged pairs are counted as skipped) and write matrices.json and
// scores.json under output_dir.
RunResult run_aggregate_stage(const RunConfig& config);

// Reporting only: read matrices.json from output_dir, recompute scores,
// correlate against the manifest's ground truth, and write the report
// artifacts.
RunResult run_report_stage(const RunConfig& config);

}  // namespace percept

#endif  // PERCEPT_PIPELINE_HPP_
