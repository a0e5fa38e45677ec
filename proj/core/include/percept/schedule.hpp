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

#ifndef PERCEPT_SCHEDULE_HPP_
#define PERCEPT_SCHEDULE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace percept {

struct PairTask {
  std::string first;
  std::string second;
  // Index of the mirror task within the same schedule, set under order
  // balancing; the mirror has (first, second) reversed.
  std::optional<std::size_t> swap_of;
};

enum class ScheduleMode { Full, Sampled };

struct Schedule {
  std::string category;
  ScheduleMode mode = ScheduleMode::Full;
  int budget_k = 0;        // sampled mode only
  std::uint64_t seed = 0;  // sampled mode only
  bool order_balanced = false;
  std::vector<PairTask> tasks;
};

// One task per unordered pair, lexicographically smaller id first, tasks in
// lexicographic (first, second) order. Throws TooFewItems for n < 2.
Schedule full_round_robin(const std::string& category,
                          const std::vector<std::string>& item_ids);

// Sparse schedule: every item appears in at least k tasks and the comparison
// graph is connected. Built as a random k-regular-ish graph (greedy minimum
// degree matching) followed by a connectivity repair pass; deterministic for
// a fixed (item set, k, seed). Throws TooFewItems and InfeasibleBudget
// (k < 1 or k > n-1).
Schedule sampled_pairs(const std::string& category,
                       const std::vector<std::string>& item_ids, int k,
                       std::uint64_t seed);

// Doubles the schedule: each task gains a mirror with reversed order and
// swap_of links both ways. Throws AlreadyBalanced.
Schedule with_order_balancing(const Schedule& schedule);

std::string schedule_to_json(const Schedule& schedule);
Schedule schedule_from_json(const std::string& text);

}  // namespace percept

#endif  // PERCEPT_SCHEDULE_HPP_
