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

#ifndef PERCEPT_AGGREGATE_HPP_
#define PERCEPT_AGGREGATE_HPP_

#include <span>
#include <string>
#include <vector>

#include "percept/prompt.hpp"

namespace percept {

// Per (principle, category) tournament record: wins[i][j] counts how often
// item i beat item j, trials[i][j] how often the pair was judged. Always
// wins[i][j] + wins[j][i] == trials[i][j] == trials[j][i] and the diagonals
// are zero. A single binary comparison per pair is the trials[i][j] == 1
// special case.
class ComparisonMatrix {
 public:
  ComparisonMatrix(Principle principle, std::string category,
                   std::vector<std::string> item_ids);

  Principle principle() const { return principle_; }
  const std::string& category() const { return category_; }
  const std::vector<std::string>& ids() const { return ids_; }
  int size() const { return static_cast<int>(ids_.size()); }

  int wins(int i, int j) const { return wins_[idx(i, j)]; }
  int trials(int i, int j) const { return trials_[idx(i, j)]; }

  // Index of an item id; throws UnknownItem.
  int index_of(const std::string& id) const;

  // Records one judged comparison: winner_id beat loser_id once.
  void record(const std::string& winner_id, const std::string& loser_id);

  // Folds the verdict for this matrix's principle into the counts. Both pair
  // members must be indexed; throws UnknownItem.
  void accumulate(const VerdictSet& verdicts);

  // True when every pair of items is joined by a path of judged comparisons.
  bool connected() const;

  std::string to_json() const;
  static ComparisonMatrix from_json(const std::string& text);

 private:
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i) * ids_.size() + static_cast<std::size_t>(j);
  }

  Principle principle_;
  std::string category_;
  std::vector<std::string> ids_;
  std::vector<int> wins_;
  std::vector<int> trials_;
};

enum class ScoreMethod { WinRate, BradleyTerry };

const char* score_method_name(ScoreMethod method);

struct ScoredItem {
  std::string id;
  double score = 0.0;
  int rank = 0;  // 1 = highest score; ties broken by id ascending
};

struct ScoreVector {
  Principle principle = Principle::Similarity;
  std::string category;
  ScoreMethod method = ScoreMethod::WinRate;
  std::vector<ScoredItem> items;  // in matrix id order
  bool converged = true;          // Bradley-Terry only
  int iterations = 0;             // Bradley-Terry only

  double score_of(const std::string& id) const;
};

// Row-mean relative score: s_i = (1/n) * sum_j wins[i][j] / max(trials[i][j], 1),
// the self term contributing zero. For a binary full round robin this is the
// plain row mean of the 0/1 outcome matrix. Throws EmptyMatrix for n < 2.
// Unjudged pairs contribute 0, which biases toward items with more
// comparisons; prefer Bradley-Terry under sampled schedules.
ScoreVector win_rate_scores(const ComparisonMatrix& matrix);

struct BradleyTerryOptions {
  // Pseudo-count added to every ordered pair's wins. Keeps the optimum finite
  // when an item wins or loses everything, and makes the comparison graph
  // complete, so epsilon > 0 never hits DisconnectedGraph.
  double epsilon = 0.01;
  int max_iterations = 1000;
  double tolerance = 1e-10;
  // When set, receives the strength vector after every sweep (testing hook
  // for the likelihood-ascent property).
  std::vector<std::vector<double>>* strength_trace = nullptr;
};

// Maximum-likelihood Bradley-Terry strengths via the classical
// minorize-maximize sweep
//     pi_i <- W_i / sum_{j != i} t'_ij / (pi_i + pi_j),
// with W_i = sum_j wins[i][j] + epsilon * (n - 1) and t'_ij = trials[i][j] +
// 2 * epsilon, normalized to sum 1 after every sweep. Each sweep is
// guaranteed not to decrease the (penalized) log-likelihood. Stops when the
// largest per-item strength change falls below tolerance; if max_iterations
// is hit first the result is still returned with converged == false.
// Throws DisconnectedGraph when epsilon == 0 and the comparison graph is
// disconnected, EmptyMatrix for n < 2.
ScoreVector bradley_terry_scores(const ComparisonMatrix& matrix,
                                 const BradleyTerryOptions& options = {});

// Penalized Bradley-Terry log-likelihood of the matrix's counts under the
// given strengths:
//     sum_{i != j} (wins[i][j] + epsilon) * log(pi_i / (pi_i + pi_j)).
double bt_log_likelihood(const ComparisonMatrix& matrix,
                         std::span<const double> strengths, double epsilon);

// Item ids sorted by descending score, exact ties broken by ascending id.
std::vector<std::string> rank_from_scores(const ScoreVector& scores);

std::string score_vector_to_json(const ScoreVector& scores);

}  // namespace percept

#endif  // PERCEPT_AGGREGATE_HPP_
