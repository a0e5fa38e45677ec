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

#ifndef PERCEPT_PROMPT_HPP_
#define PERCEPT_PROMPT_HPP_

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "percept/schedule.hpp"

namespace percept {

// The eight perception parameters a judge compares two images on: the six
// Gestalt laws of perceptual organization plus visual clutter and visual
// symmetry.
enum class Principle {
  Similarity,
  Proximity,
  Simplicity,
  Closure,
  Continuity,
  FigureGround,
  VisualClutter,
  VisualSymmetry,
};

inline constexpr std::size_t kPrincipleCount = 8;

const std::array<Principle, kPrincipleCount>& all_principles();

// Upper snake case token used in the response grammar, e.g. "FIGURE_GROUND".
const char* principle_token(Principle principle);

// Human-facing name used in tables and charts, e.g. "Law of Figure/Ground".
const char* principle_display_name(Principle principle);

std::optional<Principle> principle_from_token(std::string_view token);

constexpr std::size_t principle_index(Principle principle) {
  return static_cast<std::size_t>(principle);
}

struct PrincipleText {
  // Prose definition inserted into the prompt, addressed to the judge as it
  // would be to a human annotator.
  std::string definition;
  // Comparative question whose affirmative answer marks the MORE complex
  // image under this lens, so all eight score vectors correlate with
  // complexity without per-parameter sign flips.
  std::string polarity_question;
};

struct PromptTemplate {
  std::string role_preamble;
  std::array<PrincipleText, kPrincipleCount> principles;
  std::string task_instruction;
  // The response grammar block. Fixed: the verdict parser depends on it, so
  // template files cannot override it.
  std::string output_format_block;
};

// Built-in template: role framing as an HCI researcher judging visual
// complexity, the eight parameter definitions, the comparison instruction,
// and the response grammar.
PromptTemplate default_template();

// Loads overrides from a sectioned text file:
//   [role_preamble] ... [task_instruction] ...
//   [definition:SIMILARITY] ... [question:SIMILARITY] ...
// Unspecified sections keep their built-in text; the format block is not
// overridable. Throws TemplateError.
PromptTemplate load_template_file(const std::filesystem::path& path);

// Throws TemplateError when a template violates its invariants (empty
// sections, principle named more than once in the rendered definitions).
void validate_template(const PromptTemplate& tmpl);

struct RenderedPrompt {
  std::string text;
  // Item ids bound to the two attachment slots, in IMAGE_1, IMAGE_2 order.
  std::array<std::string, 2> attachment_ids;
};

RenderedPrompt render_prompt(const PromptTemplate& tmpl, const PairTask& pair);

enum class Winner { First, Second };

struct Verdict {
  Winner winner = Winner::First;
  std::string justification;
};

struct VerdictSet {
  std::string first;   // id bound to IMAGE_1
  std::string second;  // id bound to IMAGE_2
  std::array<Verdict, kPrincipleCount> verdicts;
  std::string raw_response;
  std::string model_id;
  double temperature = 0.0;
  std::string timestamp;

  const Verdict& verdict(Principle p) const { return verdicts[principle_index(p)]; }
  Verdict& verdict(Principle p) { return verdicts[principle_index(p)]; }
};

// Extracts the eight verdict lines "<PRINCIPLE>: <IMAGE_1|IMAGE_2> | <why>"
// from a judge response. Lines not starting with a known principle token are
// ignored (judges often add prose around the block). Throws MissingPrinciple,
// MalformedVerdict, DuplicatePrinciple.
VerdictSet parse_verdicts(const std::string& response, const PairTask& pair);

// Re-serializes a verdict set into the response grammar; the inverse of
// parse_verdicts for conforming single-line justifications.
std::string format_verdict_lines(const VerdictSet& verdicts);

}  // namespace percept

#endif  // PERCEPT_PROMPT_HPP_
