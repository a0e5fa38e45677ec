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

#include "percept/prompt.hpp"

#include <cctype>
#include <map>
#include <sstream>

#include "percept/errors.hpp"
#include "percept/io.hpp"

namespace percept {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

constexpr const char* kSectionDefinitions = "PARAMETER DEFINITIONS";
constexpr const char* kSectionTask = "TASK";
constexpr const char* kSectionFormat = "OUTPUT FORMAT";

std::size_t count_occurrences(std::string_view haystack, std::string_view needle) {
  std::size_t count = 0;
  for (std::size_t pos = haystack.find(needle); pos != std::string_view::npos;
       pos = haystack.find(needle, pos + 1)) {
    ++count;
  }
  return count;
}

}  // namespace

const std::array<Principle, kPrincipleCount>& all_principles() {
  static const std::array<Principle, kPrincipleCount> order = {
      Principle::Similarity,   Principle::Proximity,     Principle::Simplicity,
      Principle::Closure,      Principle::Continuity,    Principle::FigureGround,
      Principle::VisualClutter, Principle::VisualSymmetry,
  };
  return order;
}

const char* principle_token(Principle principle) {
  switch (principle) {
    case Principle::Similarity: return "SIMILARITY";
    case Principle::Proximity: return "PROXIMITY";
    case Principle::Simplicity: return "SIMPLICITY";
    case Principle::Closure: return "CLOSURE";
    case Principle::Continuity: return "CONTINUITY";
    case Principle::FigureGround: return "FIGURE_GROUND";
    case Principle::VisualClutter: return "VISUAL_CLUTTER";
    case Principle::VisualSymmetry: return "VISUAL_SYMMETRY";
  }
  return "";
}

const char* principle_display_name(Principle principle) {
  switch (principle) {
    case Principle::Similarity: return "Law of Similarity";
    case Principle::Proximity: return "Law of Proximity";
    case Principle::Simplicity: return "Law of Simplicity";
    case Principle::Closure: return "Law of Closure";
    case Principle::Continuity: return "Law of Continuity";
    case Principle::FigureGround: return "Law of Figure/Ground";
    case Principle::VisualClutter: return "Visual Clutter";
    case Principle::VisualSymmetry: return "Visual Symmetry";
  }
  return "";
}

std::optional<Principle> principle_from_token(std::string_view token) {
  for (Principle p : all_principles()) {
    if (token == principle_token(p)) return p;
  }
  return std::nullopt;
}

PromptTemplate default_template() {
  PromptTemplate tmpl;
  tmpl.role_preamble =
      "You are an HCI researcher who studies visual perception. Your task is to "
      "evaluate and compare the visual complexity of images using established "
      "principles from psychology and cognitive science. Judge only what is "
      "visible in the images themselves.";

  auto& p = tmpl.principles;
  p[principle_index(Principle::Similarity)] = {
      "Elements that share visual attributes such as shape, size, color, texture, "
      "or orientation are perceived as belonging together. Strong similarity "
      "collects many elements into a few visual families; weak similarity leaves "
      "many unrelated kinds of elements.",
      "Which image groups less readily by similarity, showing the greater variety "
      "of unrelated shapes, colors, and textures?"};
  p[principle_index(Principle::Proximity)] = {
      "Elements placed close to one another are perceived as a group. Clear "
      "clustering lets a viewer read a few chunks instead of many isolated parts.",
      "Which image shows the weaker spatial grouping, with elements scattered "
      "rather than organized into a few clusters?"};
  p[principle_index(Principle::Simplicity)] = {
      "Perception resolves what it sees into the simplest, most regular forms "
      "available. An image follows this law when its content reduces to a few "
      "orderly, regular shapes.",
      "Which image exhibits weaker adherence to the law of simplicity, resisting "
      "reduction to simple and regular forms?"};
  p[principle_index(Principle::Closure)] = {
      "The visual system completes interrupted contours and perceives whole "
      "figures even when parts are missing, so fragmentary marks can still read "
      "as complete shapes.",
      "Which image leaves more contours incomplete or fragmented, forcing the "
      "viewer to work harder to complete its figures?"};
  p[principle_index(Principle::Continuity)] = {
      "Elements arranged along a continuous line or smooth curve are perceived "
      "as related; the eye prefers to follow smooth paths rather than abrupt "
      "changes of direction.",
      "Which image offers fewer smooth continuations, with more interrupted or "
      "abruptly changing paths for the eye to follow?"};
  p[principle_index(Principle::FigureGround)] = {
      "A scene is parsed into a figure that carries attention and the ground it "
      "stands against. A crisp separation makes the subject effortless to "
      "isolate from its background.",
      "In which image is the figure harder to separate from its ground, with "
      "subject and background competing or interleaving?"};
  p[principle_index(Principle::VisualClutter)] = {
      "Crowding and disorder produced by many items, dense texture, or "
      "overlapping material. Clutter raises the effort of finding, reading, or "
      "describing anything in the image.",
      "Which image has more visual clutter?"};
  p[principle_index(Principle::VisualSymmetry)] = {
      "Balanced correspondence of visual weight across an axis or around a "
      "center. Symmetric compositions are processed more easily and read as "
      "more orderly.",
      "Which image is less symmetric in its overall composition?"};

  tmpl.task_instruction =
      "Compare IMAGE_1 and IMAGE_2 on each of the eight parameters defined above. "
      "For every parameter, answer its comparison question by choosing exactly one "
      "image, and justify the choice in one sentence grounded in the visible "
      "content. Treat the parameters independently; do not let one answer dictate "
      "another.";

  tmpl.output_format_block =
      "Respond with exactly eight lines, one per parameter, in the order the "
      "parameters are defined above, and nothing else. Each line must follow this "
      "grammar:\n"
      "FORMAT: <PRINCIPLE>: <IMAGE_1|IMAGE_2> | <justification>\n"
      "where <PRINCIPLE> is the parameter name in upper snake case and the image "
      "token names your selected image. Example line:\n"
      "VISUAL_CLUTTER: IMAGE_2 | overlapping labels and dense texture crowd the frame\n"
      "There is no tie option; pick exactly one image on every line.";

  return tmpl;
}

void validate_template(const PromptTemplate& tmpl) {
  if (trim(tmpl.role_preamble).empty()) {
    throw Error(ErrorCode::TemplateError, "role_preamble is empty");
  }
  if (trim(tmpl.task_instruction).empty()) {
    throw Error(ErrorCode::TemplateError, "task_instruction is empty");
  }
  if (trim(tmpl.output_format_block).empty()) {
    throw Error(ErrorCode::TemplateError, "output_format_block is empty");
  }
  for (Principle principle : all_principles()) {
    const PrincipleText& text = tmpl.principles[principle_index(principle)];
    if (trim(text.definition).empty() || trim(text.polarity_question).empty()) {
      throw Error(ErrorCode::TemplateError,
                  std::string("principle ") + principle_token(principle) +
                      " needs both a definition and a comparison question");
    }
  }
  // Definitions prose must not spell another parameter's token, or the
  // rendered definitions section would name it twice.
  for (Principle principle : all_principles()) {
    const PrincipleText& text = tmpl.principles[principle_index(principle)];
    for (Principle other : all_principles()) {
      const std::string_view token = principle_token(other);
      if (count_occurrences(text.definition, token) +
              count_occurrences(text.polarity_question, token) >
          0) {
        throw Error(ErrorCode::TemplateError,
                    std::string("definition of ") + principle_token(principle) +
                        " spells out token " + std::string(token));
      }
    }
  }
}

PromptTemplate load_template_file(const std::filesystem::path& path) {
  PromptTemplate tmpl = default_template();
  const std::string fixed_format_block = tmpl.output_format_block;

  std::istringstream in(read_text_file(path));
  std::string line;
  std::string section;
  std::map<std::string, std::string> sections;
  while (std::getline(in, line)) {
    const std::string_view stripped = trim(line);
    if (stripped.size() >= 2 && stripped.front() == '[' && stripped.back() == ']') {
      section = std::string(stripped.substr(1, stripped.size() - 2));
      if (sections.count(section)) {
        throw Error(ErrorCode::TemplateError,
                    "template section '" + section + "' given twice in " + path.string());
      }
      sections[section] = "";
      continue;
    }
    if (section.empty()) {
      if (!stripped.empty()) {
        throw Error(ErrorCode::TemplateError,
                    "template text before any [section] header in " + path.string());
      }
      continue;
    }
    sections[section] += line;
    sections[section] += '\n';
  }

  for (auto& [name, body] : sections) {
    const std::string text = std::string(trim(body));
    if (name == "role_preamble") {
      tmpl.role_preamble = text;
    } else if (name == "task_instruction") {
      tmpl.task_instruction = text;
    } else if (name == "output_format_block") {
      throw Error(ErrorCode::TemplateError,
                  "the output format block is fixed and cannot be overridden");
    } else if (name.rfind("definition:", 0) == 0 || name.rfind("question:", 0) == 0) {
      const bool is_definition = name.rfind("definition:", 0) == 0;
      const std::string token = name.substr(name.find(':') + 1);
      const auto principle = principle_from_token(token);
      if (!principle) {
        throw Error(ErrorCode::TemplateError, "unknown parameter token '" + token + "'");
      }
      PrincipleText& entry = tmpl.principles[principle_index(*principle)];
      (is_definition ? entry.definition : entry.polarity_question) = text;
    } else {
      throw Error(ErrorCode::TemplateError, "unknown template section '" + name + "'");
    }
  }

  tmpl.output_format_block = fixed_format_block;
  validate_template(tmpl);
  return tmpl;
}

RenderedPrompt render_prompt(const PromptTemplate& tmpl, const PairTask& pair) {
  validate_template(tmpl);
  std::string text;
  text += tmpl.role_preamble;
  text += "\n\n";
  text += kSectionDefinitions;
  text += "\n";
  int number = 1;
  for (Principle principle : all_principles()) {
    const PrincipleText& entry = tmpl.principles[principle_index(principle)];
    text += std::to_string(number++) + ". " + principle_token(principle) + "\n";
    text += "   " + entry.definition + "\n";
    text += "   Comparison question: " + entry.polarity_question + "\n";
  }
  text += "\n";
  text += kSectionTask;
  text += "\n";
  text +=
      "Two images are attached. The first attached image is IMAGE_1 and the "
      "second attached image is IMAGE_2.\n";
  text += tmpl.task_instruction;
  text += "\n\n";
  text += kSectionFormat;
  text += "\n";
  text += tmpl.output_format_block;
  text += "\n";
  return {std::move(text), {pair.first, pair.second}};
}

VerdictSet parse_verdicts(const std::string& response, const PairTask& pair) {
  VerdictSet result;
  result.first = pair.first;
  result.second = pair.second;
  result.raw_response = response;

  std::array<bool, kPrincipleCount> seen{};
  std::size_t start = 0;
  while (start <= response.size()) {
    std::size_t end = response.find('\n', start);
    if (end == std::string::npos) end = response.size();
    std::string_view line = trim(std::string_view(response).substr(start, end - start));
    start = end + 1;
    if (line.empty()) continue;

    const std::size_t colon = line.find(':');
    if (colon == std::string_view::npos) continue;
    const auto principle = principle_from_token(trim(line.substr(0, colon)));
    if (!principle) continue;  // surrounding prose, not a verdict line

    if (seen[principle_index(*principle)]) {
      throw Error(ErrorCode::DuplicatePrinciple,
                  std::string("parameter ") + principle_token(*principle) +
                      " answered more than once");
    }

    std::string_view rest = trim(line.substr(colon + 1));
    std::size_t token_end = 0;
    while (token_end < rest.size() &&
           !std::isspace(static_cast<unsigned char>(rest[token_end])) &&
           rest[token_end] != '|') {
      ++token_end;
    }
    const std::string_view winner_token = rest.substr(0, token_end);
    Winner winner;
    if (winner_token == "IMAGE_1") {
      winner = Winner::First;
    } else if (winner_token == "IMAGE_2") {
      winner = Winner::Second;
    } else {
      throw Error(ErrorCode::MalformedVerdict,
                  std::string(principle_token(*principle)) + ": winner token '" +
                      std::string(winner_token) + "' is not IMAGE_1 or IMAGE_2");
    }

    rest = trim(rest.substr(token_end));
    if (rest.empty() || rest.front() != '|') {
      throw Error(ErrorCode::MalformedVerdict,
                  std::string(principle_token(*principle)) +
                      ": missing '|' separator before the justification");
    }
    const std::string_view justification = trim(rest.substr(1));
    if (justification.empty()) {
      throw Error(ErrorCode::MalformedVerdict,
                  std::string(principle_token(*principle)) + ": empty justification");
    }

    seen[principle_index(*principle)] = true;
    result.verdict(*principle) = {winner, std::string(justification)};
  }

  std::string missing;
  for (Principle principle : all_principles()) {
    if (!seen[principle_index(principle)]) {
      if (!missing.empty()) missing += ", ";
      missing += principle_token(principle);
    }
  }
  if (!missing.empty()) {
    throw Error(ErrorCode::MissingPrinciple, "no well-formed line for: " + missing);
  }
  return result;
}

std::string format_verdict_lines(const VerdictSet& verdicts) {
  std::string out;
  for (Principle principle : all_principles()) {
    const Verdict& v = verdicts.verdict(principle);
    out += principle_token(principle);
    out += ": ";
    out += v.winner == Winner::First ? "IMAGE_1" : "IMAGE_2";
    out += " | ";
    out += v.justification;
    out += "\n";
  }
  return out;
}

}  // namespace percept
