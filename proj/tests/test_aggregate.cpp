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

#include <doctest.h>

#include <cmath>

#include "percept/errors.hpp"
#include "percept/prng.hpp"

using namespace percept;

namespace {

// Independent oracle for the defining row-mean sum. Kept free of the
// implementation path it checks.
std::vector<double> win_rate_oracle(const ComparisonMatrix& matrix) {
  const int n = matrix.size();
  std::vector<double> expected(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double total = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const int trials = matrix.trials(i, j);
      total += static_cast<double>(matrix.wins(i, j)) / (trials < 1 ? 1.0 : trials);
    }
    expected[static_cast<std::size_t>(i)] = total / n;
  }
  return expected;
}

// Independent penalized Bradley-Terry log-likelihood.
double ll_oracle(const ComparisonMatrix& matrix, const std::vector<double>& pi,
                 double epsilon) {
  double ll = 0.0;
  for (int i = 0; i < matrix.size(); ++i) {
    for (int j = 0; j < matrix.size(); ++j) {
      if (i == j) continue;
      const double w = matrix.wins(i, j) + epsilon;
      if (w > 0.0) {
        ll += w * std::log(pi[static_cast<std::size_t>(i)] /
                           (pi[static_cast<std::size_t>(i)] + pi[static_cast<std::size_t>(j)]));
      }
    }
  }
  return ll;
}

std::vector<std::string> ids_of(int n, const char* prefix = "i") {
  std::vector<std::string> ids;
  for (int i = 0; i < n; ++i) {
    ids.push_back(std::string(prefix) + std::to_string(i));
  }
  return ids;
}

ComparisonMatrix random_matrix(Rng& rng, int n, int max_trials_per_pair = 4) {
  ComparisonMatrix matrix(Principle::VisualClutter, "cat", ids_of(n));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const int trials = static_cast<int>(rng.uniform_below(max_trials_per_pair + 1));
      for (int t = 0; t < trials; ++t) {
        if (rng.uniform_below(2) == 0) {
          matrix.record(matrix.ids()[i], matrix.ids()[j]);
        } else {
          matrix.record(matrix.ids()[j], matrix.ids()[i]);
        }
      }
    }
  }
  return matrix;
}

VerdictSet verdict_for(const std::string& first, const std::string& second, Winner winner) {
  VerdictSet set;
  set.first = first;
  set.second = second;
  for (Principle principle : all_principles()) {
    set.verdict(principle) = {winner, "x"};
  }
  return set;
}

}  // namespace

TEST_SUITE_BEGIN("aggregate");

TEST_CASE("accumulate updates win and trial counts symmetrically") {
  ComparisonMatrix matrix(Principle::VisualClutter, "ads", {"A", "B", "C"});
  matrix.accumulate(verdict_for("A", "B", Winner::First));
  const int a = matrix.index_of("A");
  const int b = matrix.index_of("B");
  CHECK(matrix.wins(a, b) == 1);
  CHECK(matrix.wins(b, a) == 0);
  CHECK(matrix.trials(a, b) == 1);
  CHECK(matrix.trials(b, a) == 1);
}

TEST_CASE("mirror verdicts from order balancing merge into one pair count") {
  ComparisonMatrix matrix(Principle::VisualClutter, "ads", {"A", "B"});
  matrix.accumulate(verdict_for("A", "B", Winner::First));   // A beats B
  matrix.accumulate(verdict_for("B", "A", Winner::Second));  // A beats B, mirrored order
  const int a = matrix.index_of("A");
  const int b = matrix.index_of("B");
  CHECK(matrix.wins(a, b) == 2);
  CHECK(matrix.trials(a, b) == 2);
}

TEST_CASE("verdicts naming unindexed items are rejected") {
  ComparisonMatrix matrix(Principle::VisualClutter, "ads", {"A", "B"});
  try {
    matrix.accumulate(verdict_for("A", "Z", Winner::First));
    FAIL("expected UnknownItem");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownItem);
  }
}

TEST_CASE("matrix invariants hold under random verdict streams") {
  Rng rng(31);
  for (int trial = 0; trial < 25; ++trial) {
    const ComparisonMatrix matrix = random_matrix(rng, 2 + static_cast<int>(rng.uniform_below(7)));
    for (int i = 0; i < matrix.size(); ++i) {
      CHECK(matrix.wins(i, i) == 0);
      CHECK(matrix.trials(i, i) == 0);
      for (int j = 0; j < matrix.size(); ++j) {
        if (i == j) continue;
        CHECK(matrix.wins(i, j) + matrix.wins(j, i) == matrix.trials(i, j));
        CHECK(matrix.trials(i, j) == matrix.trials(j, i));
        CHECK(matrix.wins(i, j) >= 0);
        CHECK(matrix.wins(i, j) <= matrix.trials(i, j));
      }
    }
  }
}

TEST_CASE("win rate on a 3-item linear tournament") {
  ComparisonMatrix matrix(Principle::Simplicity, "ads", {"A", "B", "C"});
  matrix.record("A", "B");
  matrix.record("A", "C");
  matrix.record("B", "C");
  const ScoreVector scores = win_rate_scores(matrix);
  CHECK(scores.score_of("A") == doctest::Approx(2.0 / 3.0));
  CHECK(scores.score_of("B") == doctest::Approx(1.0 / 3.0));
  CHECK(scores.score_of("C") == 0.0);
}

TEST_CASE("win rate of an empty-evidence matrix is all zeros") {
  ComparisonMatrix matrix(Principle::Simplicity, "ads", {"A", "B", "C"});
  for (const ScoredItem& item : win_rate_scores(matrix).items) {
    CHECK(item.score == 0.0);
  }
}

TEST_CASE("fully split order-balanced results give equal win rates") {
  ComparisonMatrix matrix(Principle::Simplicity, "ads", {"A", "B", "C"});
  for (const auto& [x, y] : std::vector<std::pair<std::string, std::string>>{
           {"A", "B"}, {"A", "C"}, {"B", "C"}}) {
    matrix.record(x, y);
    matrix.record(y, x);
  }
  const ScoreVector scores = win_rate_scores(matrix);
  for (const ScoredItem& item : scores.items) {
    CHECK(item.score == doctest::Approx(scores.items.front().score));
  }
}

TEST_CASE("win rate equals the brute-force row mean on random matrices") {
  Rng rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_below(7));
    const ComparisonMatrix matrix = random_matrix(rng, n);
    const std::vector<double> expected = win_rate_oracle(matrix);
    const ScoreVector actual = win_rate_scores(matrix);
    for (int i = 0; i < n; ++i) {
      CHECK(actual.items[static_cast<std::size_t>(i)].score ==
            expected[static_cast<std::size_t>(i)]);
    }
  }
}

TEST_CASE("win rate requires at least two items") {
  ComparisonMatrix matrix(Principle::Simplicity, "ads", {"A"});
  CHECK_THROWS_AS(win_rate_scores(matrix), Error);
}

TEST_CASE("two-player Bradley-Terry matches the closed form") {
  ComparisonMatrix matrix(Principle::VisualClutter, "ads", {"A", "B"});
  for (int i = 0; i < 3; ++i) matrix.record("A", "B");
  matrix.record("B", "A");
  BradleyTerryOptions options;
  options.epsilon = 0.0;
  const ScoreVector scores = bradley_terry_scores(matrix, options);
  CHECK(scores.converged);
  CHECK(scores.score_of("A") == doctest::Approx(0.75).epsilon(1e-6));
  CHECK(scores.score_of("B") == doctest::Approx(0.25).epsilon(1e-6));
}

TEST_CASE("symmetric three-player tournament yields uniform strengths") {
  ComparisonMatrix matrix(Principle::VisualClutter, "ads", {"A", "B", "C"});
  for (const auto& [x, y] : std::vector<std::pair<std::string, std::string>>{
           {"A", "B"}, {"A", "C"}, {"B", "C"}}) {
    matrix.record(x, y);
    matrix.record(y, x);
  }
  BradleyTerryOptions options;
  options.epsilon = 0.0;
  const ScoreVector scores = bradley_terry_scores(matrix, options);
  for (const ScoredItem& item : scores.items) {
    CHECK(item.score == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
  }
}

TEST_CASE("Bradley-Terry fixed point matches a dense grid search (n=4, eps=0.1)") {
  Rng rng(101);
  const ComparisonMatrix matrix = random_matrix(rng, 4, 3);
  BradleyTerryOptions options;
  options.epsilon = 0.1;
  options.tolerance = 1e-12;
  options.max_iterations = 5000;
  const ScoreVector scores = bradley_terry_scores(matrix, options);

  // Coarse-to-fine grid over the 3-simplex; the log-likelihood has a single
  // optimum under the normalization constraint, so refining around the
  // coarse argmax finds the global one.
  double best[3] = {0.25, 0.25, 0.25};
  double best_ll = -1e300;
  auto scan = [&](double lo0, double hi0, double lo1, double hi1, double lo2, double hi2,
                  double step) {
    for (double p0 = std::max(lo0, step); p0 <= hi0; p0 += step) {
      for (double p1 = std::max(lo1, step); p1 <= hi1 && p0 + p1 < 1.0; p1 += step) {
        for (double p2 = std::max(lo2, step); p2 <= hi2 && p0 + p1 + p2 < 1.0; p2 += step) {
          const std::vector<double> pi{p0, p1, p2, 1.0 - p0 - p1 - p2};
          const double ll = ll_oracle(matrix, pi, options.epsilon);
          if (ll > best_ll) {
            best_ll = ll;
            best[0] = p0;
            best[1] = p1;
            best[2] = p2;
          }
        }
      }
    }
  };
  scan(0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.02);
  scan(best[0] - 0.03, best[0] + 0.03, best[1] - 0.03, best[1] + 0.03, best[2] - 0.03,
       best[2] + 0.03, 0.001);

  const double grid[4] = {best[0], best[1], best[2], 1.0 - best[0] - best[1] - best[2]};
  for (int i = 0; i < 4; ++i) {
    CHECK(std::abs(scores.items[static_cast<std::size_t>(i)].score - grid[i]) < 1e-3);
  }
}

TEST_CASE("MM sweeps never decrease the penalized log-likelihood") {
  Rng rng(404);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + static_cast<int>(rng.uniform_below(5));
    const ComparisonMatrix matrix = random_matrix(rng, n);
    std::vector<std::vector<double>> trace;
    BradleyTerryOptions options;
    options.epsilon = 0.05;
    options.strength_trace = &trace;
    bradley_terry_scores(matrix, options);
    REQUIRE(!trace.empty());
    double previous = ll_oracle(matrix, trace.front(), options.epsilon);
    for (std::size_t sweep = 1; sweep < trace.size(); ++sweep) {
      const double current = ll_oracle(matrix, trace[sweep], options.epsilon);
      CHECK(current >= previous - 1e-9);
      previous = current;
    }
  }
}

TEST_CASE("strengths are positive, sum to one, and scaling preserves ranking") {
  Rng rng(13);
  const ComparisonMatrix matrix = random_matrix(rng, 6);
  ScoreVector scores = bradley_terry_scores(matrix);
  double total = 0.0;
  for (const ScoredItem& item : scores.items) {
    CHECK(item.score > 0.0);
    total += item.score;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

  // Pair win probabilities pi/(pi+pj) are scale invariant, so a rescaled
  // vector must induce the identical ranking.
  const std::vector<std::string> before = rank_from_scores(scores);
  for (ScoredItem& item : scores.items) item.score *= 37.5;
  CHECK(rank_from_scores(scores) == before);
}

TEST_CASE("disconnected comparison graph is rejected at epsilon zero") {
  ComparisonMatrix matrix(Principle::VisualClutter, "ads", {"A", "B", "C", "D"});
  matrix.record("A", "B");
  matrix.record("C", "D");
  CHECK_FALSE(matrix.connected());
  BradleyTerryOptions options;
  options.epsilon = 0.0;
  try {
    bradley_terry_scores(matrix, options);
    FAIL("expected DisconnectedGraph");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DisconnectedGraph);
  }
  options.epsilon = 0.01;
  CHECK_NOTHROW(bradley_terry_scores(matrix, options));
}

TEST_CASE("hitting the iteration cap returns a flagged result") {
  Rng rng(5);
  const ComparisonMatrix matrix = random_matrix(rng, 6);
  BradleyTerryOptions options;
  options.max_iterations = 1;
  options.tolerance = 1e-15;
  const ScoreVector scores = bradley_terry_scores(matrix, options);
  CHECK_FALSE(scores.converged);
  CHECK(scores.iterations == 1);
  CHECK(scores.items.size() == 6);
}

TEST_CASE("rank_from_scores sorts descending with id tie-break") {
  ScoreVector scores;
  scores.items = {{"A", 2.0 / 3.0, 0}, {"B", 1.0 / 3.0, 0}, {"C", 0.0, 0}};
  CHECK(rank_from_scores(scores) == std::vector<std::string>{"A", "B", "C"});

  ScoreVector tied;
  tied.items = {{"b", 0.5, 0}, {"a", 0.5, 0}, {"c", 0.5, 0}};
  CHECK(rank_from_scores(tied) == std::vector<std::string>{"a", "b", "c"});

  ScoreVector single;
  single.items = {{"only", 0.9, 0}};
  CHECK(rank_from_scores(single) == std::vector<std::string>{"only"});
}

TEST_CASE("ranks are a permutation of 1..n") {
  Rng rng(71);
  const ComparisonMatrix matrix = random_matrix(rng, 7);
  for (const ScoreVector& scores :
       {win_rate_scores(matrix), bradley_terry_scores(matrix)}) {
    std::vector<bool> seen(scores.items.size() + 1, false);
    for (const ScoredItem& item : scores.items) {
      REQUIRE(item.rank >= 1);
      REQUIRE(item.rank <= static_cast<int>(scores.items.size()));
      CHECK_FALSE(seen[static_cast<std::size_t>(item.rank)]);
      seen[static_cast<std::size_t>(item.rank)] = true;
    }
  }
}

TEST_CASE("relabeling items permutes scores identically") {
  Rng rng(55);
  const int n = 5;
  const ComparisonMatrix original = random_matrix(rng, n);
  // Reverse the lexicographic order with a relabeling map i<k> -> z<n-1-k>.
  auto relabel = [&](const std::string& id) {
    const int k = std::stoi(id.substr(1));
    return "z" + std::to_string(n - 1 - k);
  };
  std::vector<std::string> new_ids;
  for (const std::string& id : original.ids()) new_ids.push_back(relabel(id));
  ComparisonMatrix relabeled(original.principle(), original.category(), new_ids);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      for (int w = 0; w < original.wins(i, j); ++w) {
        relabeled.record(relabel(original.ids()[i]), relabel(original.ids()[j]));
      }
    }
  }
  for (auto method : {ScoreMethod::WinRate, ScoreMethod::BradleyTerry}) {
    const ScoreVector base = method == ScoreMethod::WinRate
                                 ? win_rate_scores(original)
                                 : bradley_terry_scores(original);
    const ScoreVector mapped = method == ScoreMethod::WinRate
                                   ? win_rate_scores(relabeled)
                                   : bradley_terry_scores(relabeled);
    for (const ScoredItem& item : base.items) {
      CHECK(mapped.score_of(relabel(item.id)) == doctest::Approx(item.score).epsilon(1e-12));
    }
  }
}

TEST_CASE("matrix json round trip") {
  Rng rng(17);
  const ComparisonMatrix matrix = random_matrix(rng, 5);
  const ComparisonMatrix parsed = ComparisonMatrix::from_json(matrix.to_json());
  CHECK(parsed.to_json() == matrix.to_json());
}

TEST_SUITE_END();
