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

#ifndef PERCEPT_JUDGE_HPP_
#define PERCEPT_JUDGE_HPP_

#include <array>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "percept/prompt.hpp"

namespace percept {

enum class JudgeBackendKind { Live, Simulated };

struct JudgeConfig {
  JudgeBackendKind backend = JudgeBackendKind::Simulated;
  std::string model_id = "sim-oracle";
  double temperature = 0.01;
  int max_image_dimension = 8000;
  int max_retries = 2;
  std::chrono::milliseconds request_timeout{30000};
  int concurrency_limit = 4;
  std::string endpoint_url;
  std::string credential_env_var = "PERCEPT_API_KEY";
  bool debug_wire = false;  // log wire bodies (images redacted) to stderr
};

// One unit of judge work: the rendered prompt plus the two image payloads in
// attachment-slot order. Payload views must outlive the call.
struct JudgeRequest {
  std::string prompt_text;
  std::string first_id;
  std::string second_id;
  std::span<const std::uint8_t> first_image;
  std::span<const std::uint8_t> second_image;
};

class JudgeBackend {
 public:
  virtual ~JudgeBackend() = default;

  // Produces the raw judge response text for one request. Implementations
  // must be safe to call from multiple worker threads.
  virtual std::string complete(const JudgeRequest& request) = 0;

  virtual std::string describe() const = 0;

  // Number of completions attempted, for cache-idempotence checks.
  long long calls() const { return calls_.load(); }

 protected:
  void count_call() { calls_.fetch_add(1); }

 private:
  std::atomic<long long> calls_{0};
};

// Per-image latent position on each perception parameter, in [0, 1].
using LatentScores = std::map<std::string, std::array<double, kPrincipleCount>>;

// Deterministic oracle verdict: per principle, the image with the higher
// latent score wins, flipped with probability noise_p; flips are independent
// per principle and keyed on (seed, ordered pair, principle), so repeated
// calls agree. Exact latent ties break toward First. Throws
// MissingLatentScore and requires 0 <= noise_p <= 1/2.
VerdictSet simulated_judge(const LatentScores& latents, double noise_p,
                           std::uint64_t seed, const PairTask& pair);

// Backend wrapper around simulated_judge that renders its verdicts in the
// response grammar, so the full parse path is exercised.
class SimulatedBackend : public JudgeBackend {
 public:
  SimulatedBackend(LatentScores latents, double noise_p, std::uint64_t seed);
  std::string complete(const JudgeRequest& request) override;
  std::string describe() const override;

 private:
  LatentScores latents_;
  double noise_p_;
  std::uint64_t seed_;
};

// JSON wire body for a chat-style multimodal endpoint: one user message whose
// content interleaves the prompt text with two base64 image parts in
// IMAGE_1, IMAGE_2 order. Throws EncodingError on an empty payload.
std::string encode_request(const std::string& prompt_text,
                           std::span<const std::uint8_t> first_image,
                           std::span<const std::uint8_t> second_image,
                           const JudgeConfig& config);

// Pulls the response text out of a chat-style JSON reply; accepts either
// {"content":[{"type":"text","text":...}]} or a top-level {"text":...} /
// {"output_text":...}. Throws TransportError when no text is found.
std::string extract_response_text(const std::string& body);

std::string base64_encode(std::span<const std::uint8_t> data);
std::vector<std::uint8_t> base64_decode(std::string_view text);

// Live HTTP backend: POSTs encode_request bodies to the configured endpoint
// with the credential from the environment. Retries transport failures and
// HTTP 429/503 with exponential backoff up to max_retries. Throws
// MissingCredential at construction, TransportError after retries.
class HttpBackend : public JudgeBackend {
 public:
  explicit HttpBackend(const JudgeConfig& config);
  std::string complete(const JudgeRequest& request) override;
  std::string describe() const override;

 private:
  JudgeConfig config_;
  std::string credential_;
};

std::shared_ptr<JudgeBackend> make_backend(const JudgeConfig& config,
                                           const LatentScores& latents,
                                           double noise_p, std::uint64_t seed);

struct CacheKey {
  std::string dataset;
  std::string category;
  std::string first;
  std::string second;
  std::string prompt_hash;  // hash of the rendered prompt text
  std::string model_id;
  double temperature = 0.0;

  std::string to_string() const;
};

struct CacheRecord {
  CacheKey key;
  VerdictSet verdicts;
  int attempts = 1;
};

// Append-only JSONL verdict store. Reload tolerates a corrupt trailing line
// (interrupted write); corruption anywhere else raises CacheCorrupt. Appends
// are serialized and flushed per record, so a killed run loses at most the
// in-flight verdicts.
class VerdictCache {
 public:
  explicit VerdictCache(std::filesystem::path file);

  std::optional<CacheRecord> lookup(const CacheKey& key) const;
  void append(const CacheRecord& record);
  std::size_t size() const;
  const std::filesystem::path& path() const { return file_; }

 private:
  std::filesystem::path file_;
  mutable std::mutex mutex_;
  std::unordered_map<std::string, CacheRecord> records_;
};

struct JudgeJob {
  std::string dataset;
  std::string category;
  PairTask pair;
  std::span<const std::uint8_t> first_image;
  std::span<const std::uint8_t> second_image;
};

// Judges pairs through a backend with caching and bounded parse retries.
// Thread-safe up to the configured concurrency.
class PairJudge {
 public:
  PairJudge(JudgeConfig config, PromptTemplate tmpl,
            std::shared_ptr<JudgeBackend> backend, VerdictCache* cache);

  // Returns a verdict set satisfying its invariants. Cache hits perform no
  // backend call. On a malformed response the prompt is re-sent with a
  // corrective sentence up to max_retries times, then JudgeFailure is
  // thrown. Oversized images raise ImageTooLarge.
  VerdictSet judge_pair(const JudgeJob& job);

  // True when the last judge_pair result came from the cache (per thread).
  bool last_was_cache_hit() const;

  const PromptTemplate& prompt_template() const { return template_; }

 private:
  JudgeConfig config_;
  PromptTemplate template_;
  std::shared_ptr<JudgeBackend> backend_;
  VerdictCache* cache_;
  static thread_local bool last_cache_hit_;
};

}  // namespace percept

#endif  // PERCEPT_JUDGE_HPP_
