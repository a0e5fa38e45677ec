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

#include "percept/aggregate.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numeric>

#include <nlohmann/json.hpp>

#include "percept/errors.hpp"

namespace percept {

namespace {

using nlohmann::json;

void assign_ranks(ScoreVector& scores) {
  std::vector<std::size_t> order(scores.items.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const ScoredItem& lhs = scores.items[a];
    const ScoredItem& rhs = scores.items[b];
    if (lhs.score != rhs.score) return lhs.score > rhs.score;
    return lhs.id < rhs.id;
  });
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    scores.items[order[pos]].rank = static_cast<int>(pos) + 1;
  }
}

}  // namespace

ComparisonMatrix::ComparisonMatrix(Principle principle, std::string category,
                                   std::vector<std::string> item_ids)
    : principle_(principle), category_(std::move(category)), ids_(std::move(item_ids)) {
  std::sort(ids_.begin(), ids_.end());
  ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
  wins_.assign(ids_.size() * ids_.size(), 0);
  trials_.assign(ids_.size() * ids_.size(), 0);
}

int ComparisonMatrix::index_of(const std::string& id) const {
  const auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) {
    throw Error(ErrorCode::UnknownItem,
                "item '" + id + "' is not indexed in the " +
                    std::string(principle_token(principle_)) + "/" + category_ + " matrix");
  }
  return static_cast<int>(it - ids_.begin());
}

void ComparisonMatrix::record(const std::string& winner_id, const std::string& loser_id) {
  const int w = index_of(winner_id);
  const int l = index_of(loser_id);
  if (w == l) {
    throw Error(ErrorCode::UnknownItem, "self-comparison recorded for item '" + winner_id + "'");
  }
  ++wins_[idx(w, l)];
  ++trials_[idx(w, l)];
  ++trials_[idx(l, w)];
}

void ComparisonMatrix::accumulate(const VerdictSet& verdicts) {
  const Verdict& verdict = verdicts.verdict(principle_);
  if (verdict.winner == Winner::First) {
    record(verdicts.first, verdicts.second);
  } else {
    record(verdicts.second, verdicts.first);
  }
}

bool ComparisonMatrix::connected() const {
  const int n = size();
  if (n <= 1) return true;
  std::vector<bool> visited(static_cast<std::size_t>(n), false);
  std::vector<int> stack{0};
  visited[0] = true;
  int reached = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int u = 0; u < n; ++u) {
      if (!visited[static_cast<std::size_t>(u)] && trials(v, u) > 0) {
        visited[static_cast<std::size_t>(u)] = true;
        ++reached;
        stack.push_back(u);
      }
    }
  }
  return reached == n;
}

std::string ComparisonMatrix::to_json() const {
  json doc;
  doc["principle"] = principle_token(principle_);
  doc["category"] = category_;
  doc["ids"] = ids_;
  const int n = size();
  json wins = json::array();
  json trials_rows = json::array();
  for (int i = 0; i < n; ++i) {
    json wrow = json::array();
    json trow = json::array();
    for (int j = 0; j < n; ++j) {
      wrow.push_back(wins_[idx(i, j)]);
      trow.push_back(trials_[idx(i, j)]);
    }
    wins.push_back(std::move(wrow));
    trials_rows.push_back(std::move(trow));
  }
  doc["wins"] = std::move(wins);
  doc["trials"] = std::move(trials_rows);
  return doc.dump();
}

ComparisonMatrix ComparisonMatrix::from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
    const auto principle = principle_from_token(doc.at("principle").get<std::string>());
    if (!principle) {
      throw Error(ErrorCode::ParseError, "matrix json: unknown principle token");
    }
    ComparisonMatrix matrix(*principle, doc.at("category").get<std::string>(),
                            doc.at("ids").get<std::vector<std::string>>());
    const int n = matrix.size();
    const json& wins = doc.at("wins");
    const json& trials = doc.at("trials");
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        matrix.wins_[matrix.idx(i, j)] = wins.at(i).at(j).get<int>();
        matrix.trials_[matrix.idx(i, j)] = trials.at(i).at(j).get<int>();
      }
    }
    return matrix;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("matrix json: ") + e.what());
  }
}

const char* score_method_name(ScoreMethod method) {
  return method == ScoreMethod::WinRate ? "win_rate" : "bradley_terry";
}

double ScoreVector::score_of(const std::string& id) const {
  for (const ScoredItem& item : items) {
    if (item.id == id) return item.score;
  }
  throw Error(ErrorCode::UnknownItem, "no score for item '" + id + "'");
}

ScoreVector win_rate_scores(const ComparisonMatrix& matrix) {
  const int n = matrix.size();
  if (n < 2) {
    throw Error(ErrorCode::EmptyMatrix, "win-rate needs at least 2 items, matrix has " +
                                            std::to_string(n));
  }
  ScoreVector scores;
  scores.principle = matrix.principle();
  scores.category = matrix.category();
  scores.method = ScoreMethod::WinRate;
  scores.items.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double sum = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      sum += static_cast<double>(matrix.wins(i, j)) /
             static_cast<double>(std::max(matrix.trials(i, j), 1));
    }
    scores.items.push_back({matrix.ids()[static_cast<std::size_t>(i)],
                            sum / static_cast<double>(n), 0});
  }
  assign_ranks(scores);
  return scores;
}

double bt_log_likelihood(const ComparisonMatrix& matrix,
                         std::span<const double> strengths, double epsilon) {
  const int n = matrix.size();
  double ll = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double w = matrix.wins(i, j) + epsilon;
      if (w == 0.0) continue;  // zero-weight term contributes nothing
      ll += w * (std::log(strengths[static_cast<std::size_t>(i)]) -
                 std::log(strengths[static_cast<std::size_t>(i)] +
                          strengths[static_cast<std::size_t>(j)]));
    }
  }
  return ll;
}

ScoreVector bradley_terry_scores(const ComparisonMatrix& matrix,
                                 const BradleyTerryOptions& options) {
  const int n = matrix.size();
  if (n < 2) {
    throw Error(ErrorCode::EmptyMatrix, "Bradley-Terry needs at least 2 items, matrix has " +
                                            std::to_string(n));
  }
  if (options.epsilon == 0.0 && !matrix.connected()) {
    throw Error(ErrorCode::DisconnectedGraph,
                "comparison graph for " + std::string(principle_token(matrix.principle())) +
                    "/" + matrix.category() +
                    " is disconnected and epsilon is 0; strengths are not identifiable");
  }

  const double eps = options.epsilon;
  std::vector<double> total_wins(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double w = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j != i) w += matrix.wins(i, j);
    }
    total_wins[static_cast<std::size_t>(i)] = w + eps * (n - 1);
  }

  std::vector<double> pi(static_cast<std::size_t>(n), 1.0 / n);
  std::vector<double> next(static_cast<std::size_t>(n), 0.0);
  if (options.strength_trace) options.strength_trace->clear();

  int sweeps = 0;
  bool converged = false;
#ifndef NDEBUG
  double prev_ll = bt_log_likelihood(matrix, pi, eps);
#endif
  while (sweeps < options.max_iterations) {
    ++sweeps;
    for (int i = 0; i < n; ++i) {
      double denom = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const double t = matrix.trials(i, j) + 2.0 * eps;
        denom += t / (pi[static_cast<std::size_t>(i)] + pi[static_cast<std::size_t>(j)]);
      }
      next[static_cast<std::size_t>(i)] =
          denom > 0.0 ? total_wins[static_cast<std::size_t>(i)] / denom
                      : pi[static_cast<std::size_t>(i)];
    }
    const double total = std::accumulate(next.begin(), next.end(), 0.0);
    // Keep strengths strictly positive; an undefeated opponent can push a
    // zero-win item's unpenalized update to exactly 0.
    for (double& v : next) {
      v = std::max(v / total, std::numeric_limits<double>::denorm_min());
    }

    double max_change = 0.0;
    for (int i = 0; i < n; ++i) {
      max_change = std::max(max_change, std::abs(next[static_cast<std::size_t>(i)] -
                                                 pi[static_cast<std::size_t>(i)]));
    }
    pi.swap(next);
    if (options.strength_trace) options.strength_trace->push_back(pi);
#ifndef NDEBUG
    const double ll = bt_log_likelihood(matrix, pi, eps);
    assert(ll >= prev_ll - 1e-9 && "MM sweep decreased the penalized log-likelihood");
    prev_ll = ll;
#endif
    if (max_change < options.tolerance) {
      converged = true;
      break;
    }
  }

  ScoreVector scores;
  scores.principle = matrix.principle();
  scores.category = matrix.category();
  scores.method = ScoreMethod::BradleyTerry;
  scores.converged = converged;
  scores.iterations = sweeps;
  scores.items.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    scores.items.push_back(
        {matrix.ids()[static_cast<std::size_t>(i)], pi[static_cast<std::size_t>(i)], 0});
  }
  assign_ranks(scores);
  return scores;
}

std::vector<std::string> rank_from_scores(const ScoreVector& scores) {
  std::vector<const ScoredItem*> order;
  order.reserve(scores.items.size());
  for (const ScoredItem& item : scores.items) order.push_back(&item);
  std::sort(order.begin(), order.end(), [](const ScoredItem* a, const ScoredItem* b) {
    if (a->score != b->score) return a->score > b->score;
    return a->id < b->id;
  });
  std::vector<std::string> ranked;
  ranked.reserve(order.size());
  for (const ScoredItem* item : order) ranked.push_back(item->id);
  return ranked;
}

std::string score_vector_to_json(const ScoreVector& scores) {
  json doc;
  doc["principle"] = principle_token(scores.principle);
  doc["category"] = scores.category;
  doc["method"] = score_method_name(scores.method);
  if (scores.method == ScoreMethod::BradleyTerry) {
    doc["converged"] = scores.converged;
    doc["iterations"] = scores.iterations;
  }
  json items = json::array();
  for (const ScoredItem& item : scores.items) {
    items.push_back({{"id", item.id}, {"score", item.score}, {"rank", item.rank}});
  }
  doc["items"] = std::move(items);
  return doc.dump();
}

}  // namespace percept
