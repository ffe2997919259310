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

#include <cpsim/planner.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <queue>

namespace cpsim {

namespace {

constexpr std::int64_t Unreached = std::numeric_limits<std::int64_t>::max();

constexpr std::array<Cell, 8> Neighbors = {{
  {1, 0}, {0, 1}, {-1, 0}, {0, -1}, {1, 1}, {-1, 1}, {-1, -1}, {1, -1}}};

//==============================================================================
std::int64_t to_milli(double v)
{
  return static_cast<std::int64_t>(std::llround(v * 1000.0));
}

} // anonymous namespace

//==============================================================================
void AraSchedule::validate() const
{
  if (!(final >= 1.0) || !(initial >= final))
    throw std::invalid_argument("ARA* schedule needs initial >= final >= 1");

  if (!(step > 0.0))
    throw std::invalid_argument("ARA* schedule step must be positive");
}

//==============================================================================
std::optional<std::int64_t> edge_cost(
  const Cell& from,
  const Cell& to,
  const Costmap& map,
  const EdgeCostParams& params)
{
  const int dx = to.x - from.x;
  const int dy = to.y - from.y;
  if (std::abs(dx) > 1 || std::abs(dy) > 1 || (dx == 0 && dy == 0))
  {
    throw std::invalid_argument(
      "edge_cost needs adjacent cells, got " + to_string(from) + " -> "
      + to_string(to));
  }

  if (!traversable(map, to))
    return std::nullopt;

  const bool diagonal = dx != 0 && dy != 0;
  if (diagonal && !traversable(map, {from.x + dx, from.y})
    && !traversable(map, {from.x, from.y + dy}))
  {
    return std::nullopt;
  }

  const std::int64_t base =
    diagonal ? EdgeCostParams::Diagonal : EdgeCostParams::CostNeutral;
  return base + params.cost_weight * map.cost(map.index(to));
}

//==============================================================================
std::int64_t heuristic(const Cell& cell, const Cell& goal)
{
  const std::int64_t dx = std::abs(cell.x - goal.x);
  const std::int64_t dy = std::abs(cell.y - goal.y);
  const std::int64_t lo = std::min(dx, dy);
  const std::int64_t hi = std::max(dx, dy);
  return EdgeCostParams::CostNeutral * (hi - lo) + EdgeCostParams::Diagonal * lo;
}

//==============================================================================
std::int64_t path_cost(
  const std::vector<Cell>& waypoints,
  const Costmap& map,
  const EdgeCostParams& params)
{
  std::int64_t total = 0;
  for (std::size_t i = 1; i < waypoints.size(); ++i)
  {
    const auto c = edge_cost(waypoints[i - 1], waypoints[i], map, params);
    if (!c)
    {
      throw std::invalid_argument(
        "no edge between " + to_string(waypoints[i - 1]) + " and "
        + to_string(waypoints[i]));
    }

    total += *c;
  }

  return total;
}

//==============================================================================
double path_length_cells(const std::vector<Cell>& waypoints)
{
  std::size_t straight = 0;
  std::size_t diagonal = 0;
  for (std::size_t i = 1; i < waypoints.size(); ++i)
  {
    if (waypoints[i].x != waypoints[i - 1].x
      && waypoints[i].y != waypoints[i - 1].y)
      ++diagonal;
    else
      ++straight;
  }

  return static_cast<double>(straight)
    + static_cast<double>(diagonal) * std::numbers::sqrt2;
}

namespace {

//==============================================================================
void check_endpoints(const Costmap& map, const Cell& start, const Cell& goal)
{
  if (!traversable(map, start))
    throw BlockedEndpointError("start " + to_string(start) + " is blocked");

  if (!traversable(map, goal))
    throw BlockedEndpointError("goal " + to_string(goal) + " is blocked");
}

//==============================================================================
std::vector<Cell> trace_back(
  const Costmap& map,
  const std::vector<std::int32_t>& parent,
  std::size_t goal)
{
  std::vector<Cell> path;
  for (auto s = static_cast<std::int64_t>(goal); s >= 0; s = parent[s])
    path.push_back(map.cell(static_cast<std::size_t>(s)));

  std::reverse(path.begin(), path.end());
  return path;
}

//==============================================================================
/// Binary min-heap of state indices with decrease-key. Ordering is
/// (key, g, index), all compared as integers.
class OpenList
{
public:
  OpenList(
    std::size_t states,
    const std::vector<std::int64_t>& key,
    const std::vector<std::int64_t>& g)
  : _key(key),
    _g(g),
    _pos(states, -1)
  {
    // Do nothing
  }

  bool empty() const { return _heap.empty(); }
  std::size_t top() const { return _heap.front(); }
  bool contains(std::size_t s) const { return _pos[s] >= 0; }
  const std::vector<std::size_t>& items() const { return _heap; }

  void push_or_update(std::size_t s)
  {
    if (_pos[s] < 0)
    {
      _pos[s] = static_cast<std::int64_t>(_heap.size());
      _heap.push_back(s);
    }

    // Keys only ever decrease while a state sits in OPEN.
    sift_up(static_cast<std::size_t>(_pos[s]));
  }

  std::size_t pop()
  {
    const std::size_t s = _heap.front();
    swap_at(0, _heap.size() - 1);
    _heap.pop_back();
    _pos[s] = -1;
    if (!_heap.empty())
      sift_down(0);

    return s;
  }

  /// Restores heap order after every key changed.
  void rebuild()
  {
    for (std::size_t i = _heap.size() / 2; i-- > 0;)
      sift_down(i);
  }

private:
  bool less(std::size_t a, std::size_t b) const
  {
    if (_key[a] != _key[b])
      return _key[a] < _key[b];

    if (_g[a] != _g[b])
      return _g[a] < _g[b];

    return a < b;
  }

  void swap_at(std::size_t i, std::size_t j)
  {
    std::swap(_heap[i], _heap[j]);
    _pos[_heap[i]] = static_cast<std::int64_t>(i);
    _pos[_heap[j]] = static_cast<std::int64_t>(j);
  }

  void sift_up(std::size_t i)
  {
    while (i > 0)
    {
      const std::size_t p = (i - 1) / 2;
      if (!less(_heap[i], _heap[p]))
        break;

      swap_at(i, p);
      i = p;
    }
  }

  void sift_down(std::size_t i)
  {
    while (true)
    {
      const std::size_t l = 2 * i + 1;
      const std::size_t r = l + 1;
      std::size_t best = i;
      if (l < _heap.size() && less(_heap[l], _heap[best]))
        best = l;

      if (r < _heap.size() && less(_heap[r], _heap[best]))
        best = r;

      if (best == i)
        return;

      swap_at(i, best);
      i = best;
    }
  }

  const std::vector<std::int64_t>& _key;
  const std::vector<std::int64_t>& _g;
  std::vector<std::size_t> _heap;
  std::vector<std::int64_t> _pos;
};

} // anonymous namespace

//==============================================================================
std::optional<Plan> dijkstra_oracle(
  const Costmap& map,
  const Cell& start,
  const Cell& goal,
  const EdgeCostParams& params)
{
  check_endpoints(map, start, goal);

  std::vector<std::int64_t> g(map.size(), Unreached);
  std::vector<std::int32_t> parent(map.size(), -1);
  std::vector<bool> done(map.size(), false);

  using Entry = std::pair<std::int64_t, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;

  const std::size_t s0 = map.index(start);
  const std::size_t target = map.index(goal);
  g[s0] = 0;
  queue.push({0, s0});
  std::size_t expansions = 0;

  while (!queue.empty())
  {
    const auto [d, s] = queue.top();
    queue.pop();
    if (done[s])
      continue;

    done[s] = true;
    if (s == target)
      break;

    ++expansions;
    const Cell c = map.cell(s);
    for (const auto& n : Neighbors)
    {
      const Cell next{c.x + n.x, c.y + n.y};
      if (!map.in_bounds(next))
        continue;

      const auto step = edge_cost(c, next, map, params);
      if (!step)
        continue;

      const std::size_t t = map.index(next);
      if (d + *step < g[t])
      {
        g[t] = d + *step;
        parent[t] = static_cast<std::int32_t>(s);
        queue.push({g[t], t});
      }
    }
  }

  if (g[target] == Unreached)
    return std::nullopt;

  Plan plan;
  plan.waypoints = trace_back(map, parent, target);
  plan.cost = g[target];
  plan.epsilon_bound = {1, 1};
  plan.expansions = expansions;
  return plan;
}

//==============================================================================
AraResult ara_star(
  const Costmap& map,
  const Cell& start,
  const Cell& goal,
  const AraParams& params)
{
  params.schedule.validate();
  check_endpoints(map, start, goal);

  AraResult result;
  if (start == goal)
  {
    result.status = AraResult::Status::Solved;
    result.plans.push_back({{start}, 0, {1, 1}, 0});
    return result;
  }

  const std::size_t n = map.size();
  const std::size_t s0 = map.index(start);
  const std::size_t target = map.index(goal);

  std::vector<std::int64_t> g(n, Unreached);
  std::vector<std::int64_t> key(n, Unreached);
  std::vector<std::int32_t> parent(n, -1);
  std::vector<std::uint32_t> closed_in(n, 0);
  std::vector<bool> in_incons(n, false);
  std::vector<std::size_t> incons;
  OpenList open(n, key, g);

  std::int64_t eps = to_milli(params.schedule.initial);
  const std::int64_t eps_final = to_milli(params.schedule.final);
  const std::int64_t eps_step = std::max<std::int64_t>(1, to_milli(params.schedule.step));
  std::uint32_t iteration = 1;

  const auto h = [&](std::size_t s) { return heuristic(map.cell(s), goal); };
  const auto f = [&](std::size_t s) { return 1000 * g[s] + eps * h(s); };

  g[s0] = 0;
  key[s0] = f(s0);
  open.push_or_update(s0);

  // Returns false if the expansion budget ran out.
  const auto improve_path = [&]() -> bool
  {
    while (!open.empty())
    {
      if (g[target] != Unreached && 1000 * g[target] <= key[open.top()])
        return true;

      if (result.expansions >= params.max_expansions)
        return false;

      const std::size_t s = open.pop();
      closed_in[s] = iteration;
      ++result.expansions;

      const Cell c = map.cell(s);
      for (const auto& d : Neighbors)
      {
        const Cell next{c.x + d.x, c.y + d.y};
        if (!map.in_bounds(next))
          continue;

        const auto step = edge_cost(c, next, map, params.edges);
        if (!step)
          continue;

        const std::size_t t = map.index(next);
        if (g[s] + *step >= g[t])
          continue;

        g[t] = g[s] + *step;
        parent[t] = static_cast<std::int32_t>(s);
        if (closed_in[t] != iteration)
        {
          key[t] = f(t);
          open.push_or_update(t);
        }
        else if (!in_incons[t])
        {
          in_incons[t] = true;
          incons.push_back(t);
        }
      }
    }

    return true;
  };

  // Bound on the suboptimality of g(goal): min(eps, g(goal) / min(g + h)),
  // taken over OPEN and INCONS, never below 1.
  const auto bound = [&]() -> Rational
  {
    std::int64_t lower = Unreached;
    for (const auto s : open.items())
      lower = std::min(lower, g[s] + h(s));

    for (const auto s : incons)
      lower = std::min(lower, g[s] + h(s));

    Rational b{eps, 1000};
    if (lower != Unreached && lower > 0)
    {
      const Rational ratio{g[target], lower};
      if (ratio < b)
        b = ratio;
    }
    else if (lower == Unreached)
    {
      b = {1, 1};
    }

    if (b < Rational{1, 1})
      b = {1, 1};

    return b;
  };

  const auto publish = [&]()
  {
    Plan plan;
    plan.waypoints = trace_back(map, parent, target);
    plan.cost = path_cost(plan.waypoints, map, params.edges);
    plan.epsilon_bound = bound();
    plan.expansions = result.expansions;
    result.plans.push_back(std::move(plan));
  };

  while (true)
  {
    if (!improve_path())
    {
      result.status = AraResult::Status::BudgetExhausted;
      return result;
    }

    if (g[target] == Unreached)
    {
      result.status = AraResult::Status::Infeasible;
      return result;
    }

    publish();
    if (!(Rational{1, 1} < result.plans.back().epsilon_bound)
      || eps <= eps_final)
    {
      break;
    }

    eps = std::max(eps_final, eps - eps_step);
    ++iteration;
    for (const auto s : incons)
    {
      in_incons[s] = false;
      if (!open.contains(s))
        open.push_or_update(s);
    }

    incons.clear();
    for (const auto s : open.items())
      key[s] = f(s);

    open.rebuild();
  }

  result.status = AraResult::Status::Solved;
  return result;
}

} // namespace cpsim
