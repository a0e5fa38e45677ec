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

#ifndef PERCEPT_ERRORS_HPP_
#define PERCEPT_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace percept {

enum class ErrorCode {
  // dataset ingestion
  ParseError,
  DuplicateId,
  ScoreOutOfRange,
  MissingImageFile,
  DegenerateRange,
  UnknownImageFormat,
  CorruptImage,
  ImageTooLarge,
  UnsupportedDownscale,
  // scheduling
  TooFewItems,
  InfeasibleBudget,
  AlreadyBalanced,
  // prompt rendering / parsing
  TemplateError,
  MissingPrinciple,
  MalformedVerdict,
  DuplicatePrinciple,
  // judge execution
  TransportError,
  JudgeFailure,
  RateLimited,
  MissingLatentScore,
  EncodingError,
  CacheCorrupt,
  MissingCredential,
  // aggregation
  UnknownItem,
  EmptyMatrix,
  DisconnectedGraph,
  // correlation metrics
  LengthMismatch,
  ConstantVector,
  TooFewSamples,
  NoLabeledItems,
  // reporting
  EmptyReport,
  TooFewAxes,
  CountMismatch,
  // orchestration
  ConfigError,
  IoError,
};

const char* error_code_name(ErrorCode code);

/// Exception carrying a typed error code next to a human-readable message.
/// what() yields "<CodeName>: <message>".
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace percept

#endif  // PERCEPT_ERRORS_HPP_
