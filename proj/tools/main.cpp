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

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "demo_dataset.hpp"
#include "percept/errors.hpp"
#include "percept/pipeline.hpp"
#include "percept/report.hpp"

namespace {

using percept::Error;
using percept::ErrorCode;
using percept::RunConfig;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

struct CliOptions {
  RunConfig config;
  std::string schedule = "full";
  std::string judge = "simulated";
  std::string method = "both";
  long long timeout_ms = 30000;
};

void add_common_options(CLI::App* cmd, CliOptions& opts, bool manifest_required = true) {
  auto* manifest = cmd->add_option("--manifest", opts.config.manifest_path,
                                   "Dataset manifest JSON file");
  if (manifest_required) manifest->required();
  cmd->add_option("--category", opts.config.category_filter,
                  "Restrict the run to these categories (repeatable)");
  cmd->add_option("--schedule", opts.schedule,
                  "Comparison schedule: 'full' or 'sampled:<k>' comparisons per item")
      ->capture_default_str();
  cmd->add_flag("--order-balanced", opts.config.schedule.order_balanced,
                "Judge each pair in both image orders");
  cmd->add_option("--judge", opts.judge, "Judge backend: 'live' or 'simulated'")
      ->check(CLI::IsMember({"live", "simulated"}))
      ->capture_default_str();
  cmd->add_option("--model", opts.config.judge.model_id, "Judge model identifier")
      ->capture_default_str();
  cmd->add_option("--temperature", opts.config.judge.temperature, "Judge sampling temperature")
      ->capture_default_str();
  cmd->add_option("--seed", opts.config.seed,
                  "Seed for sampled schedules and the simulated judge")
      ->capture_default_str();
  cmd->add_option("--noise-p", opts.config.noise_p,
                  "Simulated judge flip probability in [0, 0.5]")
      ->capture_default_str();
  cmd->add_option("--latent", opts.config.latent_file,
                  "Latent score sidecar JSON for the simulated judge");
  cmd->add_option("--concurrency", opts.config.judge.concurrency_limit,
                  "Maximum in-flight judge requests")
      ->capture_default_str();
  cmd->add_option("--cache-dir", opts.config.cache_dir, "Verdict cache directory")
      ->capture_default_str();
  cmd->add_option("--output", opts.config.output_dir, "Report output directory")
      ->capture_default_str();
  cmd->add_option("--method", opts.method,
                  "Scoring method: 'win-rate', 'bradley-terry', or 'both'")
      ->check(CLI::IsMember({"win-rate", "bradley-terry", "both"}))
      ->capture_default_str();
  cmd->add_option("--epsilon", opts.config.bradley_terry.epsilon,
                  "Bradley-Terry pseudo-count regularizer")
      ->capture_default_str();
  cmd->add_option("--bt-max-iter", opts.config.bradley_terry.max_iterations,
                  "Bradley-Terry iteration cap")
      ->capture_default_str();
  cmd->add_option("--bt-tol", opts.config.bradley_terry.tolerance,
                  "Bradley-Terry convergence tolerance")
      ->capture_default_str();
  cmd->add_flag("--emit-schedule", opts.config.emit_schedule,
                "Write schedules.json for audit");
  cmd->add_flag("--emit-matrices", opts.config.emit_matrices,
                "Write matrices.json and scores.json");
  cmd->add_option("--template", opts.config.template_file,
                  "Prompt template override file");
  cmd->add_flag("--debug-wire", opts.config.judge.debug_wire,
                "Log wire requests/responses to stderr (images redacted)");
  cmd->add_option("--endpoint", opts.config.judge.endpoint_url,
                  "Live judge endpoint URL (chat-style JSON API)");
  cmd->add_option("--credential-env", opts.config.judge.credential_env_var,
                  "Environment variable holding the live judge credential")
      ->capture_default_str();
  cmd->add_option("--max-retries", opts.config.judge.max_retries,
                  "Retries per request for malformed or rate-limited replies")
      ->capture_default_str();
  cmd->add_option("--timeout-ms", opts.timeout_ms, "HTTP request timeout in milliseconds")
      ->capture_default_str();
  cmd->add_option("--max-image-dim", opts.config.judge.max_image_dimension,
                  "Judge image dimension limit in pixels per side")
      ->capture_default_str();
  cmd->add_flag_callback(
      "--downscale-oversize",
      [&opts] { opts.config.oversize_policy = percept::OversizePolicy::Downscale; },
      "Proportionally downscale oversized items instead of rejecting them");
}

// Resolves the string-typed options into the RunConfig. Throws Error on
// malformed values.
RunConfig finalize(CliOptions& opts) {
  RunConfig config = opts.config;
  if (opts.schedule == "full") {
    config.schedule.mode = percept::ScheduleMode::Full;
  } else if (opts.schedule.rfind("sampled:", 0) == 0) {
    config.schedule.mode = percept::ScheduleMode::Sampled;
    try {
      config.schedule.budget_k = std::stoi(opts.schedule.substr(8));
    } catch (const std::exception&) {
      throw Error(ErrorCode::ConfigError,
                  "--schedule sampled:<k> needs an integer budget, got '" + opts.schedule + "'");
    }
  } else {
    throw Error(ErrorCode::ConfigError,
                "--schedule must be 'full' or 'sampled:<k>', got '" + opts.schedule + "'");
  }

  config.judge.backend = opts.judge == "live" ? percept::JudgeBackendKind::Live
                                              : percept::JudgeBackendKind::Simulated;
  if (opts.judge == "live" && config.judge.model_id == "sim-oracle") {
    throw Error(ErrorCode::ConfigError, "--judge live requires --model");
  }

  config.methods.clear();
  if (opts.method == "win-rate" || opts.method == "both") {
    config.methods.push_back(percept::ScoreMethod::WinRate);
  }
  if (opts.method == "bradley-terry" || opts.method == "both") {
    config.methods.push_back(percept::ScoreMethod::BradleyTerry);
  }

  config.judge.request_timeout = std::chrono::milliseconds(opts.timeout_ms);
  return config;
}

int exit_code_for(const Error& e) {
  return (e.code() == ErrorCode::ConfigError || e.code() == ErrorCode::MissingCredential)
             ? kExitConfig
             : kExitRuntime;
}

void print_summary(const percept::RunSummary& summary) {
  std::cout << percept::emit_summary(summary);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"percept: pairwise visual-perception scoring with a pluggable judge"};
  app.require_subcommand(1);

  CliOptions opts;

  CLI::App* validate_cmd =
      app.add_subcommand("validate", "Check a run configuration without side effects");
  add_common_options(validate_cmd, opts);

  CLI::App* run_cmd =
      app.add_subcommand("run", "Ingest, schedule, judge, aggregate, correlate, report");
  add_common_options(run_cmd, opts);

  CLI::App* judge_cmd =
      app.add_subcommand("judge", "Judge scheduled pairs into the verdict cache only");
  add_common_options(judge_cmd, opts);

  CLI::App* aggregate_cmd = app.add_subcommand(
      "aggregate", "Rebuild matrices and scores from the verdict cache (no judge calls)");
  add_common_options(aggregate_cmd, opts);

  CLI::App* report_cmd = app.add_subcommand(
      "report", "Regenerate report artifacts from previously emitted matrices");
  add_common_options(report_cmd, opts);

  CLI::App* demo_cmd =
      app.add_subcommand("demo", "Generate a synthetic dataset for a simulated end-to-end run");
  percept::tools::DemoSpec demo_spec;
  demo_cmd->add_option("--output", demo_spec.directory, "Directory for the demo dataset")
      ->required();
  demo_cmd->add_option("--items", demo_spec.items_per_category, "Items per category")
      ->capture_default_str();
  demo_cmd->add_option("--categories", demo_spec.categories, "Number of categories")
      ->capture_default_str();
  demo_cmd->add_option("--seed", demo_spec.seed, "Generator seed")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (demo_cmd->parsed()) {
      const auto manifest = percept::tools::generate_demo_dataset(demo_spec);
      std::cout << "demo dataset written; manifest: " << manifest.string() << "\n"
                << "try: percept run --manifest " << manifest.string() << " --latent "
                << (demo_spec.directory / "latents.json").string() << " --output "
                << (demo_spec.directory / "out").string() << "\n";
      return kExitOk;
    }

    const RunConfig config = finalize(opts);
    if (validate_cmd->parsed()) {
      const auto diagnostics = percept::validate(config);
      for (const auto& diagnostic : diagnostics) {
        std::cout << percept::error_code_name(diagnostic.code) << ": " << diagnostic.message
                  << "\n";
      }
      if (diagnostics.empty()) {
        std::cout << "configuration ok\n";
        return kExitOk;
      }
      return kExitConfig;
    }
    if (run_cmd->parsed()) {
      const percept::RunResult result = percept::run(config);
      print_summary(result.summary);
      if (!result.report) {
        std::cerr << "note: dataset has no ground truth; correlation stage skipped\n";
      }
      return kExitOk;
    }
    if (judge_cmd->parsed()) {
      print_summary(percept::run_judge_stage(config));
      return kExitOk;
    }
    if (aggregate_cmd->parsed()) {
      print_summary(percept::run_aggregate_stage(config).summary);
      return kExitOk;
    }
    if (report_cmd->parsed()) {
      const percept::RunResult result = percept::run_report_stage(config);
      std::cout << "report artifacts written to " << config.output_dir.string() << "\n";
      return kExitOk;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}
