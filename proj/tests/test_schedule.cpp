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

#include <doctest.h>

#include <map>
#include <set>

#include "percept/errors.hpp"
#include "percept/prng.hpp"

using namespace percept;

namespace {

std::vector<std::string> make_ids(int n) {
  std::vector<std::string> ids;
  for (int i = 0; i < n; ++i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "it%03d", i);
    ids.emplace_back(buf);
  }
  return ids;
}

// Independent connectivity oracle: BFS over the task edges.
bool connected_by_traversal(const std::vector<std::string>& ids,
                            const std::vector<PairTask>& tasks) {
  std::map<std::string, std::vector<std::string>> adjacency;
  for (const PairTask& task : tasks) {
    adjacency[task.first].push_back(task.second);
    adjacency[task.second].push_back(task.first);
  }
  std::set<std::string> visited{ids.front()};
  std::vector<std::string> frontier{ids.front()};
  while (!frontier.empty()) {
    const std::string node = frontier.back();
    frontier.pop_back();
    for (const std::string& next : adjacency[node]) {
      if (visited.insert(next).second) frontier.push_back(next);
    }
  }
  return visited.size() == ids.size();
}

std::set<std::pair<std::string, std::string>> unordered_pairs(
    const std::vector<PairTask>& tasks) {
  std::set<std::pair<std::string, std::string>> pairs;
  for (const PairTask& task : tasks) {
    pairs.insert({std::min(task.first, task.second), std::max(task.first, task.second)});
  }
  return pairs;
}

}  // namespace

TEST_SUITE_BEGIN("schedule");

TEST_CASE("full round robin task counts") {
  CHECK(full_round_robin("c", make_ids(4)).tasks.size() == 6);
  CHECK(full_round_robin("c", make_ids(2)).tasks.size() == 1);
  CHECK_THROWS_WITH_AS(full_round_robin("c", make_ids(1)), doctest::Contains("at least 2"),
                       Error);
}

TEST_CASE("full round robin count is n(n-1)/2 for n in 2..50") {
  for (int n = 2; n <= 50; ++n) {
    const Schedule schedule = full_round_robin("c", make_ids(n));
    CHECK(schedule.tasks.size() == static_cast<std::size_t>(n) * (n - 1) / 2);
    CHECK(unordered_pairs(schedule.tasks).size() == schedule.tasks.size());
  }
}

TEST_CASE("full round robin is canonically ordered") {
  const Schedule schedule = full_round_robin("c", {"b", "d", "a", "c"});
  REQUIRE(schedule.tasks.size() == 6);
  CHECK(schedule.tasks[0].first == "a");
  CHECK(schedule.tasks[0].second == "b");
  for (const PairTask& task : schedule.tasks) {
    CHECK(task.first < task.second);
  }
  for (std::size_t i = 1; i < schedule.tasks.size(); ++i) {
    CHECK(std::tie(schedule.tasks[i - 1].first, schedule.tasks[i - 1].second) <
          std::tie(schedule.tasks[i].first, schedule.tasks[i].second));
  }
}

TEST_CASE("sampled with k = n-1 saturates to the full round robin") {
  const auto ids = make_ids(10);
  const Schedule full = full_round_robin("c", ids);
  const Schedule sampled = sampled_pairs("c", ids, 9, 123);
  CHECK(unordered_pairs(sampled.tasks) == unordered_pairs(full.tasks));
}

TEST_CASE("sampled schedules are deterministic for a fixed seed") {
  const auto ids = make_ids(5);
  const Schedule a = sampled_pairs("c", ids, 2, 42);
  const Schedule b = sampled_pairs("c", ids, 2, 42);
  CHECK(schedule_to_json(a) == schedule_to_json(b));
  const Schedule c = sampled_pairs("c", ids, 2, 43);
  CHECK(schedule_to_json(a) != schedule_to_json(c));
}

TEST_CASE("sampled comparison graph is connected (n=6, k=2)") {
  const auto ids = make_ids(6);
  const Schedule schedule = sampled_pairs("c", ids, 2, 7);
  CHECK(connected_by_traversal(ids, schedule.tasks));
}

TEST_CASE("sampled schedules: connectivity, budget, and uniqueness properties") {
  Rng rng(99);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_below(23));
    const int k = 1 + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n - 1)));
    const auto ids = make_ids(n);
    const Schedule schedule = sampled_pairs("c", ids, k, rng.next_u64());

    CHECK(connected_by_traversal(ids, schedule.tasks));
    CHECK(unordered_pairs(schedule.tasks).size() == schedule.tasks.size());
    std::map<std::string, int> appearances;
    for (const PairTask& task : schedule.tasks) {
      ++appearances[task.first];
      ++appearances[task.second];
    }
    for (const std::string& id : ids) {
      CHECK(appearances[id] >= k);
    }
  }
}

TEST_CASE("sampled budget bounds") {
  CHECK_THROWS_WITH_AS(sampled_pairs("c", make_ids(5), 5, 1), doctest::Contains("infeasible"),
                       Error);
  CHECK_THROWS_WITH_AS(sampled_pairs("c", make_ids(5), 0, 1), doctest::Contains("infeasible"),
                       Error);
  CHECK_THROWS_AS(sampled_pairs("c", make_ids(1), 1, 1), Error);
}

TEST_CASE("order balancing doubles the schedule with mirror links") {
  const Schedule base = full_round_robin("c", make_ids(4));
  const Schedule balanced = with_order_balancing(base);
  CHECK(balanced.tasks.size() == 12);
  CHECK(balanced.order_balanced);

  for (std::size_t i = 0; i < balanced.tasks.size(); ++i) {
    const PairTask& task = balanced.tasks[i];
    CHECK(task.first != task.second);
    REQUIRE(task.swap_of.has_value());
    const PairTask& mirror = balanced.tasks[*task.swap_of];
    CHECK(mirror.first == task.second);
    CHECK(mirror.second == task.first);
    // Mirror of mirror is the identity.
    CHECK(*mirror.swap_of == i);
  }
}

TEST_CASE("balancing an already balanced schedule fails") {
  const Schedule balanced = with_order_balancing(full_round_robin("c", make_ids(3)));
  CHECK_THROWS_AS(with_order_balancing(balanced), Error);
  try {
    with_order_balancing(balanced);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AlreadyBalanced);
  }
}

TEST_CASE("schedule json round trip") {
  const Schedule original = with_order_balancing(sampled_pairs("cat", make_ids(7), 3, 17));
  const Schedule parsed = schedule_from_json(schedule_to_json(original));
  CHECK(schedule_to_json(parsed) == schedule_to_json(original));
  CHECK(parsed.category == "cat");
  CHECK(parsed.mode == ScheduleMode::Sampled);
  CHECK(parsed.budget_k == 3);
  CHECK(parsed.seed == 17);
  CHECK(parsed.order_balanced);
}

TEST_SUITE_END();
