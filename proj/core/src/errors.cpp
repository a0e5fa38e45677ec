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

#include "percept/errors.hpp"

namespace percept {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::ScoreOutOfRange: return "ScoreOutOfRange";
    case ErrorCode::MissingImageFile: return "MissingImageFile";
    case ErrorCode::DegenerateRange: return "DegenerateRange";
    case ErrorCode::UnknownImageFormat: return "UnknownImageFormat";
    case ErrorCode::CorruptImage: return "CorruptImage";
    case ErrorCode::ImageTooLarge: return "ImageTooLarge";
    case ErrorCode::UnsupportedDownscale: return "UnsupportedDownscale";
    case ErrorCode::TooFewItems: return "TooFewItems";
    case ErrorCode::InfeasibleBudget: return "InfeasibleBudget";
    case ErrorCode::AlreadyBalanced: return "AlreadyBalanced";
    case ErrorCode::TemplateError: return "TemplateError";
    case ErrorCode::MissingPrinciple: return "MissingPrinciple";
    case ErrorCode::MalformedVerdict: return "MalformedVerdict";
    case ErrorCode::DuplicatePrinciple: return "DuplicatePrinciple";
    case ErrorCode::TransportError: return "TransportError";
    case ErrorCode::JudgeFailure: return "JudgeFailure";
    case ErrorCode::RateLimited: return "RateLimited";
    case ErrorCode::MissingLatentScore: return "MissingLatentScore";
    case ErrorCode::EncodingError: return "EncodingError";
    case ErrorCode::CacheCorrupt: return "CacheCorrupt";
    case ErrorCode::MissingCredential: return "MissingCredential";
    case ErrorCode::UnknownItem: return "UnknownItem";
    case ErrorCode::EmptyMatrix: return "EmptyMatrix";
    case ErrorCode::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::ConstantVector: return "ConstantVector";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::NoLabeledItems: return "NoLabeledItems";
    case ErrorCode::EmptyReport: return "EmptyReport";
    case ErrorCode::TooFewAxes: return "TooFewAxes";
    case ErrorCode::CountMismatch: return "CountMismatch";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

}  // namespace percept
