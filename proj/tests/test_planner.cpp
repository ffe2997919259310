/*
 * Copyright (C) 2026 The cpsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
*/

#include "oracles.hpp"

#include <cpsim/planner.hpp>

#include <doctest.h>

#include <random>

using namespace cpsim;

namespace {

Costmap random_grid(std::mt19937_64& rng, int w, int h, double density)
{
  Costmap map(w, h, 0.1);
  std::bernoulli_distribution wall(density);
  std::uniform_int_distribution<int> soft(0, 252);
  std::bernoulli_distribution has_cost(0.3);
  for (std::size_t i = 0; i < map.size(); ++i)
  {
    if (wall(rng))
      map.set_cost(i, cost::Lethal);
    else if (has_cost(rng))
      map.set_cost(i, static_cast<std::uint8_t>(soft(rng)));
  }

  return map;
}

bool connected(const std::vector<Cell>& path)
{
  for (std::size_t i = 1; i < path.size(); ++i)
  {
    const int dx = std::abs(path[i].x - path[i - 1].x);
    const int dy = std::abs(path[i].y - path[i - 1].y);
    if (dx > 1 || dy > 1 || dx + dy == 0)
      return false;
  }

  return true;
}

} // anonymous namespace

//==============================================================================
TEST_CASE("edge costs")
{
  Costmap map(3, 3, 0.1);
  map.set_cost(Cell{1, 0}, 50);
  CHECK(edge_cost({0, 0}, {1, 0}, map) == 150);
  CHECK(edge_cost({0, 1}, {1, 1}, map) == 100);
  CHECK(edge_cost({0, 0}, {1, 1}, map) == 141);

  EdgeCostParams heavy;
  heavy.cost_weight = 2;
  CHECK(edge_cost({0, 0}, {1, 0}, map, heavy) == 200);

  map.set_cost(Cell{1, 1}, cost::Inscribed);
  CHECK_FALSE(edge_cost({0, 1}, {1, 1}, map));

  // A diagonal squeezing between two blocked cells is not allowed; one
  // blocked side is.
  map.set_cost(Cell{1, 0}, cost::Lethal);
  map.set_cost(Cell{1, 1}, cost::Free);
  map.set_cost(Cell{0, 1}, cost::Lethal);
  CHECK_FALSE(edge_cost({0, 0}, {1, 1}, map));
  map.set_cost(Cell{0, 1}, cost::Free);
  CHECK(edge_cost({0, 0}, {1, 1}, map) == 141);

  CHECK_THROWS(edge_cost({0, 0}, {2, 0}, map));
  CHECK_THROWS(edge_cost({0, 0}, {0, 0}, map));
}

//==============================================================================
TEST_CASE("octile heuristic")
{
  CHECK(heuristic({0, 0}, {3, 4}) == 523);
  CHECK(heuristic({0, 0}, {0, 0}) == 0);
  CHECK(heuristic({5, 1}, {1, 1}) == 400);
}

//==============================================================================
TEST_CASE("heuristic is consistent on every edge")
{
  const Costmap map(12, 9, 0.1);
  const Cell goal{7, 3};
  for (int y = 0; y < 9; ++y)
  {
    for (int x = 0; x < 12; ++x)
    {
      for (int dy = -1; dy <= 1; ++dy)
      {
        for (int dx = -1; dx <= 1; ++dx)
        {
          const Cell a{x, y};
          const Cell b{x + dx, y + dy};
          if ((dx == 0 && dy == 0) || !map.in_bounds(b))
            continue;

          CHECK(heuristic(a, goal) <= *edge_cost(a, b, map) + heuristic(b, goal));
        }
      }
    }
  }
}

//==============================================================================
TEST_CASE("open 8x8 corner to corner")
{
  const Costmap map(8, 8, 0.1);
  const auto plan = dijkstra_oracle(map, {0, 0}, {7, 7});
  REQUIRE(plan);
  CHECK(plan->cost == 7 * 141);

  const auto result = ara_star(map, {0, 0}, {7, 7});
  CHECK(result.status == AraResult::Status::Solved);
  REQUIRE(result.best());
  CHECK(result.best()->cost == 987);
  CHECK(path_length_cells(result.best()->waypoints) == doctest::Approx(7 * std::sqrt(2.0)));
}

//==============================================================================
TEST_CASE("start equal to goal")
{
  const Costmap map(4, 4, 0.1);
  const auto result = ara_star(map, {1, 1}, {1, 1});
  CHECK(result.status == AraResult::Status::Solved);
  REQUIRE(result.best());
  CHECK(result.best()->waypoints == std::vector<Cell>{{1, 1}});
  CHECK(result.best()->cost == 0);
}

//==============================================================================
TEST_CASE("walled-off goal is infeasible")
{
  Costmap map(7, 7, 0.1);
  for (int i = 0; i < 7; ++i)
    map.set_cost(Cell{3, i}, cost::Lethal);

  CHECK_FALSE(dijkstra_oracle(map, {0, 0}, {6, 6}));
  const auto result = ara_star(map, {0, 0}, {6, 6});
  CHECK(result.status == AraResult::Status::Infeasible);
  CHECK(result.best() == nullptr);
}

//==============================================================================
TEST_CASE("blocked endpoints throw")
{
  Costmap map(4, 4, 0.1);
  map.set_cost(Cell{0, 0}, cost::Inscribed);
  CHECK_THROWS_AS(ara_star(map, {0, 0}, {3, 3}), BlockedEndpointError);
  CHECK_THROWS_AS(ara_star(map, {3, 3}, {0, 0}), BlockedEndpointError);
  CHECK_THROWS_AS(ara_star(map, {3, 3}, {4, 0}), BlockedEndpointError);
}

//==============================================================================
TEST_CASE("expansion budget")
{
  const Costmap map(40, 40, 0.1);
  AraParams params;
  params.max_expansions = 5;
  const auto result = ara_star(map, {0, 0}, {39, 39}, params);
  CHECK(result.status == AraResult::Status::BudgetExhausted);
  CHECK(result.expansions <= 5);
}

//==============================================================================
TEST_CASE("schedule validation")
{
  AraSchedule s;
  s.initial = 0.5;
  CHECK_THROWS(s.validate());
  s = {};
  s.step = 0.0;
  CHECK_THROWS(s.validate());
  s = {};
  s.final = 4.0;
  CHECK_THROWS(s.validate());
}

//==============================================================================
TEST_CASE("dijkstra oracle agrees with Bellman-Ford")
{
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 60; ++trial)
  {
    auto map = random_grid(rng, 12, 10, 0.2);
    map.set_cost(Cell{0, 0}, 0);
    map.set_cost(Cell{11, 9}, 0);
    const auto expected = oracle::shortest_cost(map, {0, 0}, {11, 9});
    const auto plan = dijkstra_oracle(map, {0, 0}, {11, 9});
    REQUIRE(expected.has_value() == plan.has_value());
    if (plan)
    {
      CHECK(plan->cost == *expected);
      CHECK(path_cost(plan->waypoints, map) == plan->cost);
    }
  }
}

//==============================================================================
TEST_CASE("ARA* bounds and final optimality on random grids")
{
  std::mt19937_64 rng(1234);
  std::uniform_int_distribution<int> coord(0, 19);
  for (int trial = 0; trial < 50; ++trial)
  {
    auto map = random_grid(rng, 20, 20, 0.2);
    const Cell start{coord(rng), coord(rng)};
    const Cell goal{coord(rng), coord(rng)};
    map.set_cost(start, 0);
    map.set_cost(goal, 0);

    const auto oracle = dijkstra_oracle(map, start, goal);
    const auto result = ara_star(map, start, goal);
    if (!oracle)
    {
      CHECK(result.status == AraResult::Status::Infeasible);
      continue;
    }

    REQUIRE(result.status == AraResult::Status::Solved);
    Rational last{1'000'000, 1};
    for (const auto& plan : result.plans)
    {
      CHECK(plan.waypoints.front() == start);
      CHECK(plan.waypoints.back() == goal);
      CHECK(connected(plan.waypoints));
      CHECK(path_cost(plan.waypoints, map) == plan.cost);
      // cost <= eps' * oracle, exactly
      CHECK(static_cast<Rational::Wide>(plan.cost) * plan.epsilon_bound.den
        <= static_cast<Rational::Wide>(plan.epsilon_bound.num) * oracle->cost);
      CHECK(plan.epsilon_bound <= last);
      last = plan.epsilon_bound;
    }

    CHECK(result.best()->cost == oracle->cost);
  }
}
