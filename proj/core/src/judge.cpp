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

#include "percept/judge.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#ifdef PERCEPT_WITH_TLS
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "percept/errors.hpp"
#include "percept/hashing.hpp"
#include "percept/image.hpp"
#include "percept/io.hpp"
#include "percept/prng.hpp"

namespace percept {

namespace {

using nlohmann::json;

constexpr char kBase64Alphabet[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

std::string format_latent(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", value);
  return buf;
}

// Uniform draw in [0, 1) keyed on (seed, ordered pair, principle). Pure, so
// the simulated judge is reproducible and safe under unbounded concurrency.
double keyed_uniform(std::uint64_t seed, const std::string& first,
                     const std::string& second, std::size_t principle_idx) {
  std::uint64_t h = splitmix64(seed ^ 0x7c3a9d55e1b62f01ULL);
  h = splitmix64(h ^ fnv1a64(first));
  h = splitmix64(h ^ fnv1a64(second));
  h = splitmix64(h ^ static_cast<std::uint64_t>(principle_idx));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

json verdict_set_to_json(const VerdictSet& set) {
  json verdicts;
  for (Principle principle : all_principles()) {
    const Verdict& v = set.verdict(principle);
    verdicts[principle_token(principle)] = {
        {"winner", v.winner == Winner::First ? "IMAGE_1" : "IMAGE_2"},
        {"justification", v.justification},
    };
  }
  return json{{"first", set.first},
              {"second", set.second},
              {"verdicts", std::move(verdicts)},
              {"raw_response", set.raw_response},
              {"model_id", set.model_id},
              {"temperature", set.temperature},
              {"timestamp", set.timestamp}};
}

VerdictSet verdict_set_from_json(const json& doc) {
  VerdictSet set;
  set.first = doc.at("first").get<std::string>();
  set.second = doc.at("second").get<std::string>();
  set.raw_response = doc.at("raw_response").get<std::string>();
  set.model_id = doc.at("model_id").get<std::string>();
  set.temperature = doc.at("temperature").get<double>();
  set.timestamp = doc.at("timestamp").get<std::string>();
  const json& verdicts = doc.at("verdicts");
  for (Principle principle : all_principles()) {
    const json& v = verdicts.at(principle_token(principle));
    set.verdict(principle) = {
        v.at("winner").get<std::string>() == "IMAGE_1" ? Winner::First : Winner::Second,
        v.at("justification").get<std::string>()};
  }
  return set;
}

// "scheme://host[:port]/path" -> {"scheme://host[:port]", "/path"}
std::pair<std::string, std::string> split_endpoint(const std::string& url) {
  const std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorCode::ConfigError, "endpoint URL must include a scheme: " + url);
  }
  const std::size_t path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

std::string redact_wire_body(const std::string& body) {
  try {
    json doc = json::parse(body);
    for (json& message : doc.at("messages")) {
      for (json& part : message.at("content")) {
        if (part.value("type", "") == "image") {
          const std::size_t size = part.at("source").at("data").get<std::string>().size();
          part["source"]["data"] = "<redacted " + std::to_string(size) + " base64 chars>";
        }
      }
    }
    return doc.dump();
  } catch (const json::exception&) {
    return "<unparseable body, " + std::to_string(body.size()) + " bytes>";
  }
}

}  // namespace

std::string base64_encode(std::span<const std::uint8_t> data) {
  std::string out;
  out.reserve((data.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 3 <= data.size(); i += 3) {
    const std::uint32_t v = (data[i] << 16) | (data[i + 1] << 8) | data[i + 2];
    out.push_back(kBase64Alphabet[(v >> 18) & 63]);
    out.push_back(kBase64Alphabet[(v >> 12) & 63]);
    out.push_back(kBase64Alphabet[(v >> 6) & 63]);
    out.push_back(kBase64Alphabet[v & 63]);
  }
  const std::size_t rest = data.size() - i;
  if (rest == 1) {
    const std::uint32_t v = data[i] << 16;
    out.push_back(kBase64Alphabet[(v >> 18) & 63]);
    out.push_back(kBase64Alphabet[(v >> 12) & 63]);
    out += "==";
  } else if (rest == 2) {
    const std::uint32_t v = (data[i] << 16) | (data[i + 1] << 8);
    out.push_back(kBase64Alphabet[(v >> 18) & 63]);
    out.push_back(kBase64Alphabet[(v >> 12) & 63]);
    out.push_back(kBase64Alphabet[(v >> 6) & 63]);
    out.push_back('=');
  }
  return out;
}

std::vector<std::uint8_t> base64_decode(std::string_view text) {
  auto value_of = [](char c) -> int {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '/') return 63;
    return -1;
  };
  std::vector<std::uint8_t> out;
  out.reserve(text.size() / 4 * 3);
  int buffer = 0;
  int bits = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '=') break;  // padding starts, remaining chars must be '='
    const int v = value_of(c);
    if (v < 0) {
      throw Error(ErrorCode::EncodingError,
                  "invalid base64 character at position " + std::to_string(i));
    }
    buffer = (buffer << 6) | v;
    bits += 6;
    if (bits >= 8) {
      bits -= 8;
      out.push_back(static_cast<std::uint8_t>((buffer >> bits) & 0xff));
    }
  }
  return out;
}

VerdictSet simulated_judge(const LatentScores& latents, double noise_p,
                           std::uint64_t seed, const PairTask& pair) {
  if (noise_p < 0.0 || noise_p > 0.5) {
    throw Error(ErrorCode::ConfigError,
                "noise_p must lie in [0, 0.5], got " + std::to_string(noise_p));
  }
  const auto first_it = latents.find(pair.first);
  const auto second_it = latents.find(pair.second);
  if (first_it == latents.end() || second_it == latents.end()) {
    throw Error(ErrorCode::MissingLatentScore,
                "no latent scores for item '" +
                    (first_it == latents.end() ? pair.first : pair.second) + "'");
  }

  VerdictSet set;
  set.first = pair.first;
  set.second = pair.second;
  for (Principle principle : all_principles()) {
    const std::size_t idx = principle_index(principle);
    const double a = first_it->second[idx];
    const double b = second_it->second[idx];
    Winner winner = (a >= b) ? Winner::First : Winner::Second;  // ties toward First
    const bool flip =
        noise_p > 0.0 && keyed_uniform(seed, pair.first, pair.second, idx) < noise_p;
    if (flip) winner = winner == Winner::First ? Winner::Second : Winner::First;
    std::string justification = "latent " + format_latent(a) + " vs " + format_latent(b);
    if (flip) justification += " (noise flip)";
    set.verdict(principle) = {winner, std::move(justification)};
  }
  set.raw_response = format_verdict_lines(set);
  return set;
}

SimulatedBackend::SimulatedBackend(LatentScores latents, double noise_p, std::uint64_t seed)
    : latents_(std::move(latents)), noise_p_(noise_p), seed_(seed) {}

std::string SimulatedBackend::complete(const JudgeRequest& request) {
  count_call();
  PairTask pair;
  pair.first = request.first_id;
  pair.second = request.second_id;
  return format_verdict_lines(simulated_judge(latents_, noise_p_, seed_, pair));
}

std::string SimulatedBackend::describe() const {
  return "simulated(noise_p=" + format_latent(noise_p_) +
         ", seed=" + std::to_string(seed_) + ")";
}

std::string encode_request(const std::string& prompt_text,
                           std::span<const std::uint8_t> first_image,
                           std::span<const std::uint8_t> second_image,
                           const JudgeConfig& config) {
  if (first_image.empty() || second_image.empty()) {
    throw Error(ErrorCode::EncodingError, "image payloads must be non-empty");
  }
  auto image_part = [](std::span<const std::uint8_t> payload) {
    return json{{"type", "image"},
                {"source",
                 {{"type", "base64"},
                  {"media_type", image_media_type(sniff_image_format(payload))},
                  {"data", base64_encode(payload)}}}};
  };
  json body{
      {"model", config.model_id},
      {"temperature", config.temperature},
      {"max_tokens", 2048},
      {"messages",
       json::array({json{{"role", "user"},
                         {"content", json::array({json{{"type", "text"}, {"text", prompt_text}},
                                                  image_part(first_image),
                                                  image_part(second_image)})}}})},
  };
  return body.dump();
}

std::string extract_response_text(const std::string& body) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::TransportError, std::string("response is not JSON: ") + e.what());
  }
  if (doc.contains("content") && doc["content"].is_array()) {
    std::string text;
    for (const json& part : doc["content"]) {
      if (part.value("type", "text") == "text" && part.contains("text")) {
        text += part["text"].get<std::string>();
      }
    }
    if (!text.empty()) return text;
  }
  if (doc.contains("choices") && doc["choices"].is_array() && !doc["choices"].empty()) {
    const json& message = doc["choices"][0].value("message", json::object());
    if (message.contains("content") && message["content"].is_string()) {
      return message["content"].get<std::string>();
    }
  }
  for (const char* key : {"text", "output_text"}) {
    if (doc.contains(key) && doc[key].is_string()) return doc[key].get<std::string>();
  }
  throw Error(ErrorCode::TransportError, "no text content in judge response");
}

HttpBackend::HttpBackend(const JudgeConfig& config) : config_(config) {
  if (config_.endpoint_url.empty()) {
    throw Error(ErrorCode::ConfigError, "live backend requires an endpoint URL");
  }
  const char* credential = std::getenv(config_.credential_env_var.c_str());
  if (credential == nullptr || *credential == '\0') {
    throw Error(ErrorCode::MissingCredential,
                "environment variable " + config_.credential_env_var +
                    " is unset or empty; it must hold the judge API credential");
  }
  credential_ = credential;
}

std::string HttpBackend::complete(const JudgeRequest& request) {
  count_call();
  const std::string body =
      encode_request(request.prompt_text, request.first_image, request.second_image, config_);
  const auto [base, path] = split_endpoint(config_.endpoint_url);

  httplib::Client client(base);
  const auto timeout = config_.request_timeout;
  client.set_connection_timeout(std::chrono::duration_cast<std::chrono::seconds>(timeout));
  client.set_read_timeout(std::chrono::duration_cast<std::chrono::seconds>(timeout));
  client.set_write_timeout(std::chrono::duration_cast<std::chrono::seconds>(timeout));
  const httplib::Headers headers{
      {"x-api-key", credential_},
      {"authorization", "Bearer " + credential_},
  };

  if (config_.debug_wire) {
    std::cerr << "[wire] POST " << config_.endpoint_url << " " << redact_wire_body(body)
              << "\n";
  }

  std::string last_failure;
  const int attempts = std::max(config_.max_retries, 0) + 1;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    if (attempt > 0) {
      const auto backoff = std::chrono::milliseconds(250) * (1 << std::min(attempt - 1, 4));
      std::this_thread::sleep_for(backoff);
    }
    httplib::Result result = client.Post(path, headers, body, "application/json");
    if (!result) {
      last_failure = "transport failure: " + httplib::to_string(result.error());
      continue;
    }
    if (config_.debug_wire) {
      std::cerr << "[wire] HTTP " << result->status << " " << result->body << "\n";
    }
    if (result->status == 429 || result->status == 503) {
      last_failure = "rate limited (HTTP " + std::to_string(result->status) + ")";
      continue;
    }
    if (result->status >= 500) {
      last_failure = "server error (HTTP " + std::to_string(result->status) + ")";
      continue;
    }
    if (result->status != 200) {
      throw Error(ErrorCode::TransportError,
                  "judge endpoint returned HTTP " + std::to_string(result->status));
    }
    return extract_response_text(result->body);
  }
  if (last_failure.rfind("rate limited", 0) == 0) {
    throw Error(ErrorCode::RateLimited, last_failure + " after " +
                                            std::to_string(attempts) + " attempts");
  }
  throw Error(ErrorCode::TransportError,
              last_failure + " after " + std::to_string(attempts) + " attempts");
}

std::string HttpBackend::describe() const {
  return "live(" + config_.model_id + " @ " + config_.endpoint_url + ")";
}

std::shared_ptr<JudgeBackend> make_backend(const JudgeConfig& config,
                                           const LatentScores& latents, double noise_p,
                                           std::uint64_t seed) {
  if (config.backend == JudgeBackendKind::Live) {
    return std::make_shared<HttpBackend>(config);
  }
  return std::make_shared<SimulatedBackend>(latents, noise_p, seed);
}

std::string CacheKey::to_string() const {
  char temp[32];
  std::snprintf(temp, sizeof(temp), "%.6g", temperature);
  std::string out;
  for (const std::string* part : {&dataset, &category, &first, &second, &prompt_hash, &model_id}) {
    out += *part;
    out += '\x1f';
  }
  out += temp;
  return out;
}

VerdictCache::VerdictCache(std::filesystem::path file) : file_(std::move(file)) {
  if (!std::filesystem::exists(file_)) return;
  std::ifstream in(file_);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot open verdict cache: " + file_.string());
  }
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) lines.push_back(line);
  }
  for (std::size_t i = 0; i < lines.size(); ++i) {
    try {
      const json doc = json::parse(lines[i]);
      CacheRecord record;
      const json& key = doc.at("key");
      record.key = {key.at("dataset").get<std::string>(),
                    key.at("category").get<std::string>(),
                    key.at("first").get<std::string>(),
                    key.at("second").get<std::string>(),
                    key.at("prompt_hash").get<std::string>(),
                    key.at("model_id").get<std::string>(),
                    key.at("temperature").get<double>()};
      record.verdicts = verdict_set_from_json(doc.at("verdicts"));
      record.attempts = doc.value("attempts", 1);
      records_[record.key.to_string()] = std::move(record);
    } catch (const json::exception& e) {
      if (i + 1 == lines.size()) {
        // Interrupted final write; drop the partial record.
        std::cerr << "[cache] dropping corrupt trailing line in " << file_.string() << "\n";
        break;
      }
      throw Error(ErrorCode::CacheCorrupt, "line " + std::to_string(i + 1) + " of " +
                                               file_.string() + ": " + e.what());
    }
  }
}

std::optional<CacheRecord> VerdictCache::lookup(const CacheKey& key) const {
  std::lock_guard<std::mutex> lock(mutex_);
  const auto it = records_.find(key.to_string());
  if (it == records_.end()) return std::nullopt;
  return it->second;
}

void VerdictCache::append(const CacheRecord& record) {
  json doc{{"key",
            {{"dataset", record.key.dataset},
             {"category", record.key.category},
             {"first", record.key.first},
             {"second", record.key.second},
             {"prompt_hash", record.key.prompt_hash},
             {"model_id", record.key.model_id},
             {"temperature", record.key.temperature}}},
           {"verdicts", verdict_set_to_json(record.verdicts)},
           {"attempts", record.attempts}};
  std::lock_guard<std::mutex> lock(mutex_);
  if (records_.count(record.key.to_string())) return;  // append-only, first write wins
  if (file_.has_parent_path()) std::filesystem::create_directories(file_.parent_path());
  std::ofstream out(file_, std::ios::app);
  if (!out) {
    throw Error(ErrorCode::IoError, "cannot append to verdict cache: " + file_.string());
  }
  out << doc.dump() << "\n";
  out.flush();
  if (!out) {
    throw Error(ErrorCode::IoError, "verdict cache write failed: " + file_.string());
  }
  records_[record.key.to_string()] = record;
}

std::size_t VerdictCache::size() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return records_.size();
}

thread_local bool PairJudge::last_cache_hit_ = false;

PairJudge::PairJudge(JudgeConfig config, PromptTemplate tmpl,
                     std::shared_ptr<JudgeBackend> backend, VerdictCache* cache)
    : config_(std::move(config)), template_(std::move(tmpl)), backend_(std::move(backend)),
      cache_(cache) {
  validate_template(template_);
}

bool PairJudge::last_was_cache_hit() const { return last_cache_hit_; }

VerdictSet PairJudge::judge_pair(const JudgeJob& job) {
  last_cache_hit_ = false;
  for (const auto* payload : {&job.first_image, &job.second_image}) {
    const ImageInfo info = probe_image(*payload);
    if (info.width > config_.max_image_dimension || info.height > config_.max_image_dimension) {
      throw Error(ErrorCode::ImageTooLarge,
                  "pair (" + job.pair.first + ", " + job.pair.second + "): image is " +
                      std::to_string(info.width) + "x" + std::to_string(info.height) +
                      ", judge limit is " + std::to_string(config_.max_image_dimension));
    }
  }

  const RenderedPrompt prompt = render_prompt(template_, job.pair);
  CacheKey key{job.dataset,          job.category,     job.pair.first, job.pair.second,
               content_hash(prompt.text), config_.model_id, config_.temperature};
  if (cache_ != nullptr) {
    if (auto hit = cache_->lookup(key)) {
      last_cache_hit_ = true;
      return hit->verdicts;
    }
  }

  JudgeRequest request;
  request.prompt_text = prompt.text;
  request.first_id = job.pair.first;
  request.second_id = job.pair.second;
  request.first_image = job.first_image;
  request.second_image = job.second_image;

  std::string last_parse_failure;
  const int attempts = std::max(config_.max_retries, 0) + 1;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    const std::string response = backend_->complete(request);
    try {
      VerdictSet verdicts = parse_verdicts(response, job.pair);
      verdicts.model_id = config_.model_id;
      verdicts.temperature = config_.temperature;
      verdicts.timestamp = utc_timestamp();
      if (cache_ != nullptr) {
        cache_->append({key, verdicts, attempt + 1});
      }
      return verdicts;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::MissingPrinciple && e.code() != ErrorCode::MalformedVerdict &&
          e.code() != ErrorCode::DuplicatePrinciple) {
        throw;
      }
      last_parse_failure = e.what();
      if (attempt == 0) {
        request.prompt_text +=
            "\n\nYour previous reply did not match the required format. Reply again "
            "with exactly eight lines following the grammar in the OUTPUT FORMAT "
            "section, and output nothing else.";
      }
    }
  }
  throw Error(ErrorCode::JudgeFailure,
              "pair (" + job.pair.first + ", " + job.pair.second + "): response stayed "
              "malformed after " + std::to_string(attempts) + " attempts; last error: " +
              last_parse_failure);
}

}  // namespace percept
