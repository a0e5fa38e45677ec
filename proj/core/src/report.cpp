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

#include "percept/report.hpp"

#include <cmath>
#include <cstdio>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "percept/errors.hpp"

namespace percept {

namespace {

using nlohmann::json;

std::string format2(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", value);
  return buf;
}

double round2(double value) { return std::round(value * 100.0) / 100.0; }

// One table cell: the two-decimal display value, or a status word.
std::string cell_text(const CorrelationCell* cell, CorrelationMetric metric) {
  if (cell == nullptr) return "";
  switch (cell->status) {
    case CellStatus::Ok:
      return format2(metric == CorrelationMetric::Plcc ? cell->plcc : cell->srocc);
    case CellStatus::Insufficient:
      return "insufficient";
    case CellStatus::Undefined:
      return "undefined";
  }
  return "";
}

std::optional<double> cell_value(const CorrelationCell* cell, CorrelationMetric metric) {
  if (cell == nullptr || cell->status != CellStatus::Ok) return std::nullopt;
  return metric == CorrelationMetric::Plcc ? cell->plcc : cell->srocc;
}

struct TableColumn {
  std::string category;
  CorrelationMetric metric;
};

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string table_for_method(const CorrelationReport& report, ScoreMethod method,
                             TableFormat format) {
  const std::vector<std::string> categories = report.categories();
  std::vector<TableColumn> columns;
  for (const std::string& category : categories) {
    columns.push_back({category, CorrelationMetric::Plcc});
    columns.push_back({category, CorrelationMetric::Srocc});
  }

  // Column maxima over the rounded display values; every cell matching the
  // maximum is bolded, mirroring tables that may bold ties.
  std::vector<std::optional<double>> column_max(columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    for (Principle principle : all_principles()) {
      const CorrelationCell* cell = report.find(columns[c].category, principle, method);
      const auto value = cell_value(cell, columns[c].metric);
      if (!value) continue;
      const double rounded = round2(*value);
      if (!column_max[c] || rounded > *column_max[c]) column_max[c] = rounded;
    }
  }

  std::string out;
  const bool markdown = format == TableFormat::Markdown;
  if (markdown) {
    out += "### ";
    out += score_method_name(method);
    out += "\n\n|Law/Concept|";
    for (const TableColumn& column : columns) {
      out += column.category;
      out += column.metric == CorrelationMetric::Plcc ? " PLCC|" : " SROCC|";
    }
    out += "\n|";
    for (std::size_t c = 0; c <= columns.size(); ++c) out += "---|";
    out += "\n";
  } else {
    out += "method,";
    out += score_method_name(method);
    out += "\nLaw/Concept";
    for (const TableColumn& column : columns) {
      out += ",";
      out += csv_escape(column.category +
                        (column.metric == CorrelationMetric::Plcc ? " PLCC" : " SROCC"));
    }
    out += "\n";
  }

  for (Principle principle : all_principles()) {
    if (markdown) out += "|";
    out += csv_escape(principle_display_name(principle));
    for (std::size_t c = 0; c < columns.size(); ++c) {
      const CorrelationCell* cell = report.find(columns[c].category, principle, method);
      std::string text = cell_text(cell, columns[c].metric);
      if (markdown) {
        const auto value = cell_value(cell, columns[c].metric);
        if (value && column_max[c] && round2(*value) == *column_max[c]) {
          text = "**" + text + "**";
        }
        out += "|" + text;
      } else {
        out += "," + csv_escape(text);
      }
    }
    out += markdown ? "|\n" : "\n";
  }
  return out;
}

}  // namespace

std::string emit_table(const CorrelationReport& report, TableFormat format) {
  if (report.cells.empty()) {
    throw Error(ErrorCode::EmptyReport, "correlation report has no cells");
  }
  std::string out;
  if (format == TableFormat::Markdown) {
    out += "# Correlation report: " + report.dataset + "\n\n";
  }
  bool first = true;
  for (ScoreMethod method : report.methods()) {
    if (!first) out += "\n";
    first = false;
    out += table_for_method(report, method, format);
  }
  return out;
}

namespace {

constexpr double kRadarMin = -0.2;
constexpr double kRadarMax = 1.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                          "#8c564b", "#17becf", "#e377c2", "#7f7f7f", "#bcbd22"};

std::string format_coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string xml_escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string emit_radar(const CorrelationReport& report, CorrelationMetric metric) {
  std::vector<Principle> axes;
  for (Principle principle : all_principles()) {
    for (const CorrelationCell& cell : report.cells) {
      if (cell.principle == principle) {
        axes.push_back(principle);
        break;
      }
    }
  }
  if (axes.size() < 3) {
    throw Error(ErrorCode::TooFewAxes, "radar chart needs at least 3 parameters, report covers " +
                                           std::to_string(axes.size()));
  }
  const std::vector<ScoreMethod> methods = report.methods();
  if (methods.empty()) {
    throw Error(ErrorCode::EmptyReport, "correlation report has no cells");
  }
  const ScoreMethod method = methods.front();
  const std::vector<std::string> categories = report.categories();

  const double width = 720.0, height = 600.0;
  const double cx = 300.0, cy = 300.0, radius = 220.0;
  const char* metric_name = metric == CorrelationMetric::Plcc ? "PLCC" : "SROCC";

  auto angle_of = [&](std::size_t axis) {
    return -M_PI / 2.0 + 2.0 * M_PI * static_cast<double>(axis) /
                             static_cast<double>(axes.size());
  };
  auto point_at = [&](std::size_t axis, double value) {
    const double r = radius * (value - kRadarMin) / (kRadarMax - kRadarMin);
    const double a = angle_of(axis);
    return std::pair<double, double>{cx + r * std::cos(a), cy + r * std::sin(a)};
  };

  int clamped = 0;
  bool any_missing = false;

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + format_coord(width) +
         "\" height=\"" + format_coord(height) + "\" viewBox=\"0 0 " + format_coord(width) +
         " " + format_coord(height) + "\">\n";
  svg += "  <title>" + xml_escape(report.dataset) + " " + metric_name + " by parameter"
         "</title>\n";
  svg += "  <rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";

  // Grid rings every 0.2 of correlation, axis spokes, axis labels.
  for (int level = 0; level <= 6; ++level) {
    const double value = kRadarMin + 0.2 * level;
    const double r = radius * (value - kRadarMin) / (kRadarMax - kRadarMin);
    svg += "  <circle cx=\"" + format_coord(cx) + "\" cy=\"" + format_coord(cy) +
           "\" r=\"" + format_coord(r) +
           "\" fill=\"none\" stroke=\"#d0d0d0\" stroke-width=\"1\"/>\n";
    svg += "  <text class=\"ring-label\" x=\"" + format_coord(cx + 4.0) + "\" y=\"" +
           format_coord(cy - r - 2.0) + "\" font-size=\"10\" fill=\"#808080\">" +
           format2(value) + "</text>\n";
  }
  for (std::size_t a = 0; a < axes.size(); ++a) {
    const auto [x, y] = point_at(a, kRadarMax);
    svg += "  <line x1=\"" + format_coord(cx) + "\" y1=\"" + format_coord(cy) + "\" x2=\"" +
           format_coord(x) + "\" y2=\"" + format_coord(y) +
           "\" stroke=\"#b0b0b0\" stroke-width=\"1\"/>\n";
    const double angle = angle_of(a);
    const double lx = cx + (radius + 14.0) * std::cos(angle);
    const double ly = cy + (radius + 14.0) * std::sin(angle);
    const char* anchor = std::cos(angle) > 0.3 ? "start"
                         : std::cos(angle) < -0.3 ? "end"
                                                  : "middle";
    svg += "  <text class=\"axis-label\" x=\"" + format_coord(lx) + "\" y=\"" +
           format_coord(ly) + "\" font-size=\"12\" text-anchor=\"" + anchor +
           "\" fill=\"#303030\">" + xml_escape(principle_display_name(axes[a])) +
           "</text>\n";
  }

  for (std::size_t c = 0; c < categories.size(); ++c) {
    const char* color = kPalette[c % (sizeof(kPalette) / sizeof(kPalette[0]))];
    std::string points;
    bool missing_here = false;
    for (std::size_t a = 0; a < axes.size(); ++a) {
      const CorrelationCell* cell = report.find(categories[c], axes[a], method);
      double value = kRadarMin;
      if (cell != nullptr && cell->status == CellStatus::Ok) {
        value = metric == CorrelationMetric::Plcc ? cell->plcc : cell->srocc;
        if (value < kRadarMin || value > kRadarMax) {
          ++clamped;
          value = std::clamp(value, kRadarMin, kRadarMax);
        }
      } else {
        missing_here = true;
        any_missing = true;
      }
      const auto [x, y] = point_at(a, value);
      if (!points.empty()) points += " ";
      points += format_coord(x) + "," + format_coord(y);
    }
    svg += "  <polygon class=\"category-polygon\" points=\"" + points + "\" fill=\"" + color +
           "\" fill-opacity=\"0.15\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";

    const double ly = 40.0 + 22.0 * static_cast<double>(c);
    svg += "  <rect x=\"560\" y=\"" + format_coord(ly - 10.0) +
           "\" width=\"12\" height=\"12\" fill=\"" + color + "\"/>\n";
    svg += "  <text class=\"legend-label\" x=\"578\" y=\"" + format_coord(ly) +
           "\" font-size=\"12\" fill=\"#303030\">" + xml_escape(categories[c]) +
           (missing_here ? " *" : "") + "</text>\n";
  }

  std::string footnote = std::string(metric_name) + " (" + score_method_name(method) +
                         "), radial scale " + format2(kRadarMin) + " to " + format2(kRadarMax);
  if (clamped > 0) {
    footnote += "; " + std::to_string(clamped) + " value(s) clamped to the scale";
  }
  if (any_missing) {
    footnote += "; * category has undefined cells drawn at the scale minimum";
  }
  svg += "  <text class=\"footnote\" x=\"20\" y=\"" + format_coord(height - 16.0) +
         "\" font-size=\"11\" fill=\"#606060\">" + xml_escape(footnote) + "</text>\n";
  svg += "</svg>\n";
  return svg;
}

std::string emit_summary(const RunSummary& summary) {
  json categories = json::object();
  for (const auto& [category, counts] : summary.categories) {
    if (counts.judged + counts.failed + counts.skipped != counts.scheduled) {
      throw Error(ErrorCode::CountMismatch,
                  "category '" + category + "': judged " + std::to_string(counts.judged) +
                      " + failed " + std::to_string(counts.failed) + " + skipped " +
                      std::to_string(counts.skipped) + " != scheduled " +
                      std::to_string(counts.scheduled));
    }
    categories[category] = {{"scheduled", counts.scheduled}, {"judged", counts.judged},
                            {"cached", counts.cached},       {"failed", counts.failed},
                            {"skipped", counts.skipped}};
  }
  const json doc = {{"dataset", summary.dataset},
                    {"schedule_mode", summary.schedule_mode},
                    {"judge_backend", summary.judge_backend},
                    {"model_id", summary.model_id},
                    {"categories", categories},
                    {"backend_calls", summary.backend_calls},
                    {"wall_time_seconds", summary.wall_time_seconds},
                    {"config_hash", summary.config_hash}};
  return doc.dump(2) + "\n";
}

}  // namespace percept
