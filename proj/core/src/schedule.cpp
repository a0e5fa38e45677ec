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

#include "percept/schedule.hpp"

#include <algorithm>
#include <climits>
#include <cstdint>
#include <numeric>
#include <set>

#include <nlohmann/json.hpp>

#include "percept/errors.hpp"
#include "percept/prng.hpp"

namespace percept {

namespace {

using nlohmann::json;

std::vector<std::string> sorted_unique_ids(const std::vector<std::string>& item_ids) {
  std::vector<std::string> ids = item_ids;
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  if (ids.size() < 2) {
    throw Error(ErrorCode::TooFewItems, "need at least 2 items to form a pair, got " +
                                            std::to_string(ids.size()));
  }
  return ids;
}

// Union-find over item indexes, for the connectivity repair pass.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[a] = b;
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

void sort_canonical(std::vector<PairTask>& tasks) {
  std::sort(tasks.begin(), tasks.end(), [](const PairTask& a, const PairTask& b) {
    return std::tie(a.first, a.second) < std::tie(b.first, b.second);
  });
}

}  // namespace

Schedule full_round_robin(const std::string& category,
                          const std::vector<std::string>& item_ids) {
  const std::vector<std::string> ids = sorted_unique_ids(item_ids);
  Schedule schedule;
  schedule.category = category;
  schedule.mode = ScheduleMode::Full;
  schedule.tasks.reserve(ids.size() * (ids.size() - 1) / 2);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    for (std::size_t j = i + 1; j < ids.size(); ++j) {
      schedule.tasks.push_back({ids[i], ids[j], std::nullopt});
    }
  }
  return schedule;
}

Schedule sampled_pairs(const std::string& category,
                       const std::vector<std::string>& item_ids, int k,
                       std::uint64_t seed) {
  const std::vector<std::string> ids = sorted_unique_ids(item_ids);
  const std::size_t n = ids.size();
  if (k < 1 || static_cast<std::size_t>(k) > n - 1) {
    throw Error(ErrorCode::InfeasibleBudget,
                "k=" + std::to_string(k) + " infeasible for n=" + std::to_string(n) +
                    " (need 1 <= k <= n-1)");
  }

  Rng rng(seed);
  std::set<std::pair<std::size_t, std::size_t>> edges;
  std::vector<int> degree(n, 0);
  auto add_edge = [&](std::size_t a, std::size_t b) {
    if (a == b || !edges.emplace(std::min(a, b), std::max(a, b)).second) return false;
    ++degree[a];
    ++degree[b];
    return true;
  };

  // Greedy near-regular construction: visit items in random order; each item
  // below budget links to the lowest-degree non-neighbours, randomly among
  // ties.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  for (const std::size_t i : order) {
    while (degree[i] < k) {
      int best_degree = INT_MAX;
      std::vector<std::size_t> candidates;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i || edges.count({std::min(i, j), std::max(i, j)})) continue;
        if (degree[j] < best_degree) {
          best_degree = degree[j];
          candidates.clear();
        }
        if (degree[j] == best_degree) candidates.push_back(j);
      }
      if (candidates.empty()) break;  // i is already adjacent to everyone
      add_edge(i, candidates[rng.uniform_below(candidates.size())]);
    }
  }

  // Repair pass: join remaining components with extra edges, lowest-degree
  // endpoints first so the graph stays near-regular.
  DisjointSets components(n);
  for (const auto& [a, b] : edges) components.unite(a, b);
  while (true) {
    std::vector<std::size_t> roots;
    for (std::size_t i = 0; i < n; ++i) {
      if (components.find(i) == i) roots.push_back(i);
    }
    if (roots.size() <= 1) break;
    auto min_degree_member = [&](std::size_t root) {
      std::size_t best = SIZE_MAX;
      for (std::size_t i = 0; i < n; ++i) {
        if (components.find(i) != root) continue;
        if (best == SIZE_MAX || degree[i] < degree[best]) best = i;
      }
      return best;
    };
    const std::size_t a = min_degree_member(roots[0]);
    const std::size_t b = min_degree_member(roots[1]);
    add_edge(a, b);
    components.unite(a, b);
  }

  Schedule schedule;
  schedule.category = category;
  schedule.mode = ScheduleMode::Sampled;
  schedule.budget_k = k;
  schedule.seed = seed;
  schedule.tasks.reserve(edges.size());
  for (const auto& [a, b] : edges) {
    schedule.tasks.push_back({ids[a], ids[b], std::nullopt});
  }
  sort_canonical(schedule.tasks);
  return schedule;
}

Schedule with_order_balancing(const Schedule& schedule) {
  if (schedule.order_balanced) {
    throw Error(ErrorCode::AlreadyBalanced,
                "schedule for category '" + schedule.category + "' is already order-balanced");
  }
  Schedule balanced = schedule;
  balanced.order_balanced = true;
  balanced.tasks.clear();
  balanced.tasks.reserve(schedule.tasks.size() * 2);
  for (const PairTask& task : schedule.tasks) {
    const std::size_t original = balanced.tasks.size();
    balanced.tasks.push_back({task.first, task.second, original + 1});
    balanced.tasks.push_back({task.second, task.first, original});
  }
  return balanced;
}

std::string schedule_to_json(const Schedule& schedule) {
  json doc;
  doc["category"] = schedule.category;
  doc["mode"] = schedule.mode == ScheduleMode::Full ? "full" : "sampled";
  if (schedule.mode == ScheduleMode::Sampled) {
    doc["budget_k"] = schedule.budget_k;
    doc["seed"] = schedule.seed;
  }
  doc["order_balanced"] = schedule.order_balanced;
  json tasks = json::array();
  for (const PairTask& task : schedule.tasks) {
    json entry;
    entry["first"] = task.first;
    entry["second"] = task.second;
    if (task.swap_of) entry["swap_of"] = *task.swap_of;
    tasks.push_back(std::move(entry));
  }
  doc["tasks"] = std::move(tasks);
  return doc.dump(2) + "\n";
}

Schedule schedule_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("schedule json: ") + e.what());
  }
  Schedule schedule;
  try {
    schedule.category = doc.at("category").get<std::string>();
    schedule.mode =
        doc.at("mode").get<std::string>() == "full" ? ScheduleMode::Full : ScheduleMode::Sampled;
    if (schedule.mode == ScheduleMode::Sampled) {
      schedule.budget_k = doc.at("budget_k").get<int>();
      schedule.seed = doc.at("seed").get<std::uint64_t>();
    }
    schedule.order_balanced = doc.at("order_balanced").get<bool>();
    for (const json& entry : doc.at("tasks")) {
      PairTask task;
      task.first = entry.at("first").get<std::string>();
      task.second = entry.at("second").get<std::string>();
      if (entry.contains("swap_of")) task.swap_of = entry.at("swap_of").get<std::size_t>();
      schedule.tasks.push_back(std::move(task));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("schedule json: ") + e.what());
  }
  return schedule;
}

}  // namespace percept
