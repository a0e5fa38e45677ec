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

#include "percept/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <map>
#include <thread>

#include <nlohmann/json.hpp>

#include "percept/errors.hpp"
#include "percept/hashing.hpp"
#include "percept/image.hpp"
#include "percept/io.hpp"

namespace percept {

namespace {

using nlohmann::json;

IngestOptions ingest_options(const RunConfig& config) {
  return {config.judge.max_image_dimension, config.oversize_policy};
}

std::string sanitize_filename(const std::string& name) {
  std::string out;
  for (char c : name) {
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
  }
  return out.empty() ? "dataset" : out;
}

std::filesystem::path cache_file_path(const RunConfig& config, const std::string& dataset) {
  return config.cache_dir / ("verdicts_" + sanitize_filename(dataset) + ".jsonl");
}

std::string schedule_mode_string(const ScheduleSpec& spec) {
  std::string mode = spec.mode == ScheduleMode::Full
                         ? "full"
                         : "sampled:" + std::to_string(spec.budget_k);
  if (spec.order_balanced) mode += "+balanced";
  return mode;
}

PromptTemplate make_template(const RunConfig& config) {
  return config.template_file.empty() ? default_template()
                                      : load_template_file(config.template_file);
}

std::vector<std::pair<std::string, std::vector<ImageItem>>> filtered_partitions(
    const RunConfig& config, const DatasetIndex& index) {
  auto partitions = partition_by_category(index);
  if (config.category_filter.empty()) return partitions;
  std::vector<std::pair<std::string, std::vector<ImageItem>>> selected;
  for (const std::string& wanted : config.category_filter) {
    bool found = false;
    for (auto& partition : partitions) {
      if (partition.first == wanted) {
        selected.push_back(partition);
        found = true;
        break;
      }
    }
    if (!found) {
      throw Error(ErrorCode::ConfigError,
                  "category filter names '" + wanted + "', which is not in the dataset");
    }
  }
  std::sort(selected.begin(), selected.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return selected;
}

Schedule build_schedule(const RunConfig& config, const std::string& category,
                        const std::vector<ImageItem>& items) {
  std::vector<std::string> ids;
  ids.reserve(items.size());
  for (const ImageItem& item : items) ids.push_back(item.id);
  Schedule schedule = config.schedule.mode == ScheduleMode::Full
                          ? full_round_robin(category, ids)
                          : sampled_pairs(category, ids, config.schedule.budget_k, config.seed);
  if (config.schedule.order_balanced) schedule = with_order_balancing(schedule);
  return schedule;
}

LatentScores load_latent_file(const std::filesystem::path& path) {
  json doc;
  try {
    doc = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, "latent file " + path.string() + ": " + e.what());
  }
  if (!doc.is_object()) {
    throw Error(ErrorCode::ParseError, "latent file must map item ids to scores");
  }
  LatentScores latents;
  for (const auto& [id, value] : doc.items()) {
    std::array<double, kPrincipleCount> scores{};
    if (value.is_number()) {
      scores.fill(value.get<double>());
    } else if (value.is_object()) {
      for (Principle principle : all_principles()) {
        const char* token = principle_token(principle);
        if (!value.contains(token)) {
          throw Error(ErrorCode::MissingLatentScore,
                      "latent file item '" + id + "' lacks a score for " + token);
        }
        scores[principle_index(principle)] = value.at(token).get<double>();
      }
    } else {
      throw Error(ErrorCode::ParseError,
                  "latent entry for '" + id + "' must be a number or an object");
    }
    latents[id] = scores;
  }
  return latents;
}

// Latents for the simulated oracle: the sidecar file when given, otherwise
// each item's normalized ground truth on every parameter.
LatentScores resolve_latents(const RunConfig& config, const DatasetIndex& index) {
  if (!config.latent_file.empty()) return load_latent_file(config.latent_file);
  LatentScores latents;
  for (const ImageItem& item : index.items) {
    if (item.ground_truth_norm) {
      std::array<double, kPrincipleCount> scores{};
      scores.fill(*item.ground_truth_norm);
      latents[item.id] = scores;
    }
  }
  return latents;
}

struct TaskOutcome {
  std::optional<VerdictSet> verdicts;
  bool cached = false;
  std::string error;
};

std::map<std::string, std::vector<std::uint8_t>> load_category_images(
    const RunConfig& config, const std::vector<ImageItem>& items) {
  std::map<std::string, std::vector<std::uint8_t>> images;
  for (const ImageItem& item : items) {
    std::vector<std::uint8_t> bytes = read_file(item.resolved_path);
    if (item.downscaled) {
      bytes = downscale_to_fit(bytes, config.judge.max_image_dimension);
    }
    images[item.id] = std::move(bytes);
  }
  return images;
}

std::vector<TaskOutcome> judge_schedule(
    PairJudge& judge, const std::string& dataset, const Schedule& schedule,
    const std::map<std::string, std::vector<std::uint8_t>>& images, int concurrency) {
  std::vector<TaskOutcome> outcomes(schedule.tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= schedule.tasks.size()) break;
      const PairTask& task = schedule.tasks[i];
      try {
        JudgeJob job{dataset, schedule.category, task, images.at(task.first),
                     images.at(task.second)};
        outcomes[i].verdicts = judge.judge_pair(job);
        outcomes[i].cached = judge.last_was_cache_hit();
      } catch (const std::exception& e) {
        outcomes[i].error = e.what();
      }
    }
  };
  const int workers = std::max(
      1, std::min(concurrency, static_cast<int>(schedule.tasks.size())));
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(workers));
  for (int i = 0; i < workers; ++i) threads.emplace_back(worker);
  for (std::thread& thread : threads) thread.join();
  return outcomes;
}

void write_failures(const RunConfig& config, const json& failures) {
  const auto path = config.output_dir / "failures.jsonl";
  std::error_code ec;
  std::filesystem::remove(path, ec);
  if (failures.empty()) return;
  std::string text;
  for (const json& failure : failures) text += failure.dump() + "\n";
  write_file(path, text);
}

void write_schedules(const RunConfig& config, const std::vector<Schedule>& schedules) {
  if (!config.emit_schedule) return;
  json all = json::array();
  for (const Schedule& schedule : schedules) {
    all.push_back(json::parse(schedule_to_json(schedule)));
  }
  write_file(config.output_dir / "schedules.json", all.dump(2) + "\n");
}

void write_matrices_and_scores(const RunConfig& config,
                               const std::vector<ComparisonMatrix>& matrices,
                               const std::vector<ScoreVector>& scores) {
  json matrix_docs = json::array();
  for (const ComparisonMatrix& matrix : matrices) {
    matrix_docs.push_back(json::parse(matrix.to_json()));
  }
  write_file(config.output_dir / "matrices.json", matrix_docs.dump(2) + "\n");
  json score_docs = json::array();
  for (const ScoreVector& vector : scores) {
    score_docs.push_back(json::parse(score_vector_to_json(vector)));
  }
  write_file(config.output_dir / "scores.json", score_docs.dump(2) + "\n");
}

void write_report_artifacts(const RunConfig& config, const CorrelationReport& report) {
  write_file(config.output_dir / "report.csv", emit_table(report, TableFormat::Csv));
  write_file(config.output_dir / "report.md", emit_table(report, TableFormat::Markdown));
  write_file(config.output_dir / "radar_plcc.svg",
             emit_radar(report, CorrelationMetric::Plcc));
  write_file(config.output_dir / "radar_srocc.svg",
             emit_radar(report, CorrelationMetric::Srocc));
}

std::vector<ScoreVector> score_matrices(const RunConfig& config,
                                        const std::vector<ComparisonMatrix>& matrices) {
  std::vector<ScoreVector> scores;
  for (const ComparisonMatrix& matrix : matrices) {
    for (ScoreMethod method : config.methods) {
      scores.push_back(method == ScoreMethod::WinRate
                           ? win_rate_scores(matrix)
                           : bradley_terry_scores(matrix, config.bradley_terry));
    }
  }
  return scores;
}

std::optional<CorrelationReport> correlate(const std::vector<ScoreVector>& scores,
                                           const DatasetIndex& index) {
  try {
    return build_report(scores, index);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NoLabeledItems) return std::nullopt;
    throw;
  }
}

}  // namespace

std::string config_hash(const RunConfig& config) {
  json methods = json::array();
  for (ScoreMethod method : config.methods) methods.push_back(score_method_name(method));
  const json doc = {
      {"manifest", config.manifest_path.string()},
      {"categories", config.category_filter},
      {"schedule",
       {{"mode", config.schedule.mode == ScheduleMode::Full ? "full" : "sampled"},
        {"budget_k", config.schedule.budget_k},
        {"order_balanced", config.schedule.order_balanced}}},
      {"seed", config.seed},
      {"judge",
       {{"backend", config.judge.backend == JudgeBackendKind::Live ? "live" : "simulated"},
        {"model_id", config.judge.model_id},
        {"temperature", config.judge.temperature},
        {"max_image_dimension", config.judge.max_image_dimension},
        {"endpoint_url", config.judge.endpoint_url}}},
      {"noise_p", config.noise_p},
      {"latent_file", config.latent_file.string()},
      {"methods", methods},
      {"bradley_terry",
       {{"epsilon", config.bradley_terry.epsilon},
        {"max_iterations", config.bradley_terry.max_iterations},
        {"tolerance", config.bradley_terry.tolerance}}},
      {"oversize_policy",
       config.oversize_policy == OversizePolicy::Reject ? "reject" : "downscale"},
      {"template_file", config.template_file.string()},
  };
  return content_hash(doc.dump());
}

std::vector<Diagnostic> validate(const RunConfig& config) {
  std::vector<Diagnostic> diagnostics;
  auto add = [&](ErrorCode code, std::string message) {
    diagnostics.push_back({code, std::move(message)});
  };

  if (config.judge.temperature < 0.0) {
    add(ErrorCode::ConfigError, "temperature must be >= 0");
  }
  if (config.judge.concurrency_limit < 1) {
    add(ErrorCode::ConfigError, "concurrency limit must be >= 1");
  }
  if (config.judge.max_image_dimension <= 0) {
    add(ErrorCode::ConfigError, "max image dimension must be positive");
  }
  if (config.noise_p < 0.0 || config.noise_p > 0.5) {
    add(ErrorCode::ConfigError, "noise_p must lie in [0, 0.5]");
  }
  if (config.bradley_terry.epsilon < 0.0) {
    add(ErrorCode::ConfigError, "Bradley-Terry epsilon must be >= 0");
  }
  if (config.bradley_terry.max_iterations < 1 || config.bradley_terry.tolerance <= 0.0) {
    add(ErrorCode::ConfigError, "Bradley-Terry iteration limits must be positive");
  }
  if (config.methods.empty()) {
    add(ErrorCode::ConfigError, "at least one scoring method is required");
  }

  if (config.judge.backend == JudgeBackendKind::Live) {
    if (config.judge.endpoint_url.empty()) {
      add(ErrorCode::ConfigError, "live backend requires --endpoint");
    }
    const char* credential = std::getenv(config.judge.credential_env_var.c_str());
    if (credential == nullptr || *credential == '\0') {
      add(ErrorCode::MissingCredential,
          "environment variable " + config.judge.credential_env_var + " is unset or empty");
    }
  }

  if (!config.template_file.empty()) {
    try {
      load_template_file(config.template_file);
    } catch (const Error& e) {
      add(e.code(), e.what());
    }
  }

  DatasetIndex index;
  try {
    index = load_manifest(config.manifest_path, ingest_options(config));
  } catch (const Error& e) {
    add(e.code(), e.what());
    return diagnostics;
  }

  std::vector<std::pair<std::string, std::vector<ImageItem>>> partitions;
  try {
    partitions = filtered_partitions(config, index);
  } catch (const Error& e) {
    add(e.code(), e.what());
    return diagnostics;
  }

  for (const auto& [category, items] : partitions) {
    if (config.schedule.mode == ScheduleMode::Sampled &&
        (config.schedule.budget_k < 1 ||
         config.schedule.budget_k > static_cast<int>(items.size()) - 1)) {
      add(ErrorCode::InfeasibleBudget,
          "category '" + category + "': budget k=" + std::to_string(config.schedule.budget_k) +
              " infeasible for n=" + std::to_string(items.size()));
    }
  }

  if (config.judge.backend == JudgeBackendKind::Simulated) {
    try {
      const LatentScores latents = resolve_latents(config, index);
      for (const auto& [category, items] : partitions) {
        for (const ImageItem& item : items) {
          if (!latents.count(item.id)) {
            add(ErrorCode::MissingLatentScore,
                "item '" + item.id + "' has neither a latent score nor ground truth; "
                "the simulated judge cannot rank it");
          }
        }
      }
    } catch (const Error& e) {
      add(e.code(), e.what());
    }
  }

  return diagnostics;
}

namespace {

struct PipelineState {
  DatasetIndex index;
  std::vector<std::pair<std::string, std::vector<ImageItem>>> partitions;
  std::vector<Schedule> schedules;
  PromptTemplate prompt;
  RunSummary summary;
};

PipelineState prepare(const RunConfig& config) {
  std::vector<Diagnostic> diagnostics = validate(config);
  if (!diagnostics.empty()) {
    std::string joined;
    for (const Diagnostic& diagnostic : diagnostics) {
      if (!joined.empty()) joined += "; ";
      joined += diagnostic.message;
    }
    throw Error(ErrorCode::ConfigError, joined);
  }

  PipelineState state;
  state.index = load_manifest(config.manifest_path, ingest_options(config));
  state.partitions = filtered_partitions(config, state.index);
  for (const auto& [category, items] : state.partitions) {
    state.schedules.push_back(build_schedule(config, category, items));
  }
  state.prompt = make_template(config);
  state.summary.dataset = state.index.dataset;
  state.summary.schedule_mode = schedule_mode_string(config.schedule);
  state.summary.model_id = config.judge.model_id;
  state.summary.config_hash = config_hash(config);
  return state;
}

// Judge every scheduled pair through the cache, collect verdicts per
// category, and fill in the summary counts.
std::map<std::string, std::vector<VerdictSet>> execute_judging(
    const RunConfig& config, PipelineState& state,
    std::shared_ptr<JudgeBackend> backend_override) {
  std::shared_ptr<JudgeBackend> backend = backend_override;
  if (!backend) {
    const LatentScores latents = config.judge.backend == JudgeBackendKind::Simulated
                                     ? resolve_latents(config, state.index)
                                     : LatentScores{};
    backend = make_backend(config.judge, latents, config.noise_p, config.seed);
  }
  state.summary.judge_backend = backend->describe();

  VerdictCache cache(cache_file_path(config, state.index.dataset));
  PairJudge judge(config.judge, state.prompt, backend, &cache);

  std::map<std::string, std::vector<VerdictSet>> verdicts_by_category;
  json failures = json::array();
  for (std::size_t p = 0; p < state.partitions.size(); ++p) {
    const auto& [category, items] = state.partitions[p];
    const Schedule& schedule = state.schedules[p];
    const auto images = load_category_images(config, items);
    const std::vector<TaskOutcome> outcomes = judge_schedule(
        judge, state.index.dataset, schedule, images, config.judge.concurrency_limit);

    CategoryCounts counts;
    counts.scheduled = static_cast<long long>(schedule.tasks.size());
    std::vector<VerdictSet>& verdicts = verdicts_by_category[category];
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
      const TaskOutcome& outcome = outcomes[i];
      if (outcome.verdicts) {
        ++counts.judged;
        if (outcome.cached) ++counts.cached;
        verdicts.push_back(*outcome.verdicts);
      } else {
        ++counts.failed;
        failures.push_back({{"category", category},
                            {"first", schedule.tasks[i].first},
                            {"second", schedule.tasks[i].second},
                            {"error", outcome.error}});
      }
    }
    state.summary.categories[category] = counts;
  }
  state.summary.backend_calls = backend->calls();
  write_failures(config, failures);
  return verdicts_by_category;
}

std::vector<ComparisonMatrix> build_matrices(
    const PipelineState& state,
    const std::map<std::string, std::vector<VerdictSet>>& verdicts_by_category) {
  std::vector<ComparisonMatrix> matrices;
  for (const auto& [category, items] : state.partitions) {
    std::vector<std::string> ids;
    ids.reserve(items.size());
    for (const ImageItem& item : items) ids.push_back(item.id);
    const auto it = verdicts_by_category.find(category);
    for (Principle principle : all_principles()) {
      ComparisonMatrix matrix(principle, category, ids);
      if (it != verdicts_by_category.end()) {
        for (const VerdictSet& verdicts : it->second) matrix.accumulate(verdicts);
      }
      matrices.push_back(std::move(matrix));
    }
  }
  return matrices;
}

}  // namespace

RunResult run(const RunConfig& config, std::shared_ptr<JudgeBackend> backend_override) {
  const auto started = std::chrono::steady_clock::now();
  PipelineState state = prepare(config);
  write_schedules(config, state.schedules);

  const auto verdicts = execute_judging(config, state, std::move(backend_override));

  RunResult result;
  result.matrices = build_matrices(state, verdicts);
  result.scores = score_matrices(config, result.matrices);
  result.report = correlate(result.scores, state.index);

  if (config.emit_matrices) {
    write_matrices_and_scores(config, result.matrices, result.scores);
  }
  if (result.report) {
    write_report_artifacts(config, *result.report);
  }
  state.summary.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  result.summary = state.summary;
  write_file(config.output_dir / "summary.json", emit_summary(result.summary));
  return result;
}

RunSummary run_judge_stage(const RunConfig& config,
                           std::shared_ptr<JudgeBackend> backend_override) {
  const auto started = std::chrono::steady_clock::now();
  PipelineState state = prepare(config);
  write_schedules(config, state.schedules);
  execute_judging(config, state, std::move(backend_override));
  state.summary.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  write_file(config.output_dir / "summary.json", emit_summary(state.summary));
  return state.summary;
}

RunResult run_aggregate_stage(const RunConfig& config) {
  const auto started = std::chrono::steady_clock::now();
  PipelineState state = prepare(config);
  VerdictCache cache(cache_file_path(config, state.index.dataset));
  state.summary.judge_backend = "cache-replay";

  std::map<std::string, std::vector<VerdictSet>> verdicts_by_category;
  for (std::size_t p = 0; p < state.partitions.size(); ++p) {
    const auto& [category, items] = state.partitions[p];
    const Schedule& schedule = state.schedules[p];
    CategoryCounts counts;
    counts.scheduled = static_cast<long long>(schedule.tasks.size());
    for (const PairTask& task : schedule.tasks) {
      const RenderedPrompt prompt = render_prompt(state.prompt, task);
      const CacheKey key{state.index.dataset,       category,
                         task.first,                task.second,
                         content_hash(prompt.text), config.judge.model_id,
                         config.judge.temperature};
      if (auto record = cache.lookup(key)) {
        ++counts.judged;
        ++counts.cached;
        verdicts_by_category[category].push_back(record->verdicts);
      } else {
        ++counts.skipped;
      }
    }
    state.summary.categories[category] = counts;
  }

  RunResult result;
  result.matrices = build_matrices(state, verdicts_by_category);
  result.scores = score_matrices(config, result.matrices);
  result.report = correlate(result.scores, state.index);
  write_matrices_and_scores(config, result.matrices, result.scores);
  state.summary.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  result.summary = state.summary;
  write_file(config.output_dir / "summary.json", emit_summary(result.summary));
  return result;
}

RunResult run_report_stage(const RunConfig& config) {
  const DatasetIndex index = load_manifest(config.manifest_path, ingest_options(config));
  const auto matrices_path = config.output_dir / "matrices.json";
  if (!std::filesystem::exists(matrices_path)) {
    throw Error(ErrorCode::ConfigError,
                matrices_path.string() + " not found; run the aggregate stage first");
  }
  json docs;
  try {
    docs = json::parse(read_text_file(matrices_path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, matrices_path.string() + ": " + e.what());
  }
  RunResult result;
  for (const json& doc : docs) {
    result.matrices.push_back(ComparisonMatrix::from_json(doc.dump()));
  }
  result.scores = score_matrices(config, result.matrices);
  result.report = correlate(result.scores, index);
  if (!result.report) {
    throw Error(ErrorCode::NoLabeledItems,
                "dataset '" + index.dataset + "' has no ground truth; nothing to report");
  }
  write_report_artifacts(config, *result.report);
  return result;
}

}  // namespace percept
