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

#ifndef CPSIM__PLANNER_HPP
#define CPSIM__PLANNER_HPP

#include <cpsim/costmap.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace cpsim {

//==============================================================================
/// Exact non-negative rational, used for suboptimality bounds so that bound
/// checks never depend on floating point rounding.
struct Rational
{
  std::int64_t num = 1;
  std::int64_t den = 1;

  __extension__ using Wide = __int128;

  double to_double() const { return static_cast<double>(num) / den; }

  /// a/b <= c/d for positive denominators.
  friend bool operator<=(const Rational& a, const Rational& b)
  {
    return static_cast<Wide>(a.num) * b.den
      <= static_cast<Wide>(b.num) * a.den;
  }

  friend bool operator<(const Rational& a, const Rational& b)
  {
    return static_cast<Wide>(a.num) * b.den
      < static_cast<Wide>(b.num) * a.den;
  }
};

//==============================================================================
struct EdgeCostParams
{
  static constexpr std::int64_t CostNeutral = 100;
  static constexpr std::int64_t Diagonal = 141;

  /// Multiplier on the destination cell's cost.
  std::int64_t cost_weight = 1;
};

struct Plan
{
  std::vector<Cell> waypoints;
  std::int64_t cost = 0;
  Rational epsilon_bound;

  /// Cumulative over the whole anytime search, not just this iteration.
  std::size_t expansions = 0;
};

/// Inflation schedule for ARA*. Values are stored in thousandths so that
/// priority keys stay integral.
struct AraSchedule
{
  double initial = 3.0;
  double final = 1.0;
  double step = 0.5;

  /// Throws std::invalid_argument unless initial >= final >= 1 and step > 0.
  void validate() const;
};

struct AraParams
{
  AraSchedule schedule;
  EdgeCostParams edges;

  /// Upper limit on the total number of expansions across all iterations.
  std::size_t max_expansions = 5'000'000;
};

//==============================================================================
class BlockedEndpointError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

//==============================================================================
/// True when the cell can be entered by a plan.
inline bool traversable(const Costmap& map, const Cell& c)
{
  return map.in_bounds(c) && map.cost(map.index(c)) < cost::Inscribed;
}

/// Cost of moving from `from` to the 8-connected neighbour `to`, or nullopt
/// when there is no edge: the target is not traversable, or the move is
/// diagonal and both orthogonal cells next to it are blocked.
std::optional<std::int64_t> edge_cost(
  const Cell& from,
  const Cell& to,
  const Costmap& map,
  const EdgeCostParams& params = {});

/// Octile distance scaled to edge cost units: 100 per straight step and 141
/// per diagonal step. Admissible and consistent for edge_cost.
std::int64_t heuristic(const Cell& cell, const Cell& goal);

/// Sum of edge_cost over consecutive waypoints. Throws std::invalid_argument
/// if two consecutive waypoints are not connected.
std::int64_t path_cost(
  const std::vector<Cell>& waypoints,
  const Costmap& map,
  const EdgeCostParams& params = {});

/// Length of the waypoint polyline in cells (1 per straight step, sqrt(2) per
/// diagonal step).
double path_length_cells(const std::vector<Cell>& waypoints);

//==============================================================================
/// Exact minimum-cost plan by Dijkstra's algorithm, or nullopt when the goal
/// cannot be reached. Throws BlockedEndpointError if start or goal is not
/// traversable.
std::optional<Plan> dijkstra_oracle(
  const Costmap& map,
  const Cell& start,
  const Cell& goal,
  const EdgeCostParams& params = {});

//==============================================================================
struct AraResult
{
  enum class Status
  {
    Solved,
    Infeasible,
    BudgetExhausted
  };

  Status status = Status::Infeasible;

  /// One plan per completed iteration, best (last) at the back. Empty when
  /// infeasible, and possibly empty when the budget ran out.
  std::vector<Plan> plans;

  std::size_t expansions = 0;

  const Plan* best() const { return plans.empty() ? nullptr : &plans.back(); }
};

/// Anytime Repairing A*. Runs weighted A* with decreasing inflation, reusing
/// g-values between iterations through the INCONS list, and publishes one
/// plan per finished iteration with its suboptimality bound. Stops once the
/// final inflation is reached or the bound proves optimality. Throws
/// BlockedEndpointError if start or goal is not traversable.
AraResult ara_star(
  const Costmap& map,
  const Cell& start,
  const Cell& goal,
  const AraParams& params = {});

} // namespace cpsim

#endif // CPSIM__PLANNER_HPP
