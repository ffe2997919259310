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

#ifndef CPSIM__EXECUTIVE_HPP
#define CPSIM__EXECUTIVE_HPP

#include <cpsim/planner.hpp>
#include <cpsim/sensing.hpp>
#include <cpsim/world.hpp>

#include <optional>
#include <string>
#include <vector>

namespace cpsim {

//==============================================================================
/// Planning time is modelled rather than measured so that mission times are
/// reproducible on any machine.
struct TimingModel
{
  double t_per_expansion = 1e-5;
  double planner_overhead = 0.0;

  double planning_time(std::size_t expansions) const
  {
    return static_cast<double>(expansions) * t_per_expansion + planner_overhead;
  }
};

struct ExecutiveParams
{
  InflationParams inflation;
  AraParams planner;
  TimingModel timing;
  double share_latency = 0.0;
  std::size_t tick_limit = 200'000;

  /// Keep a copy of the robot's costmap for every plan (for rendering).
  bool record_costmaps = false;
};

//==============================================================================
struct MissionEvent
{
  enum class Kind
  {
    PlanIssued,
    BlockageDetected,
    Replanned,
    GoalReached,
    Infeasible,
    Truncated
  };

  std::size_t tick = 0;
  double time = 0.0;
  Kind kind = Kind::PlanIssued;
  Cell where;
  std::string detail;
};

std::string_view to_string(MissionEvent::Kind kind);

struct MissionResult
{
  PerceptionMode mode = PerceptionMode::Standalone;
  double distance = 0.0;
  double time = 0.0;
  std::size_t replans = 0;
  bool reached = false;
  bool collided = false;
  bool truncated = false;

  /// Every plan the robot followed, in order. Only the last plan of each
  /// anytime search is kept.
  std::vector<Plan> plans;

  /// For each plan, the index into `trajectory` where it was issued.
  std::vector<std::size_t> plan_starts;

  /// Robot costmap at the time of each plan. Only filled when
  /// ExecutiveParams::record_costmaps is set.
  std::vector<Costmap> plan_costmaps;

  /// Cells the robot actually occupied, starting at the mission start.
  std::vector<Cell> trajectory;

  std::size_t straight_steps = 0;
  std::size_t diagonal_steps = 0;
  std::size_t total_expansions = 0;
  std::vector<MissionEvent> events;
};

//==============================================================================
/// Index (into `waypoints`) of the first waypoint after `from` whose cost is
/// at least Inscribed, or nullopt if the rest of the path is clear. The cell
/// at `from` is where the robot stands and is not checked.
std::optional<std::size_t> check_path_blocked(
  const std::vector<Cell>& waypoints,
  std::size_t from,
  const Costmap& costmap);

/// Runs one robot from mission.start to mission.goal in `world` under the
/// given perception mode. The world must already hold every obstacle of the
/// trial; the robot is added to a private copy. Each tick the robot senses,
/// then either plans (when it has no plan or its plan is blocked) or moves
/// one cell along its plan. Never throws for collisions, infeasibility or
/// the tick limit; those are recorded in the result.
MissionResult run_mission(
  const WorldModel& world,
  const RobotState& robot,
  const Mission& mission,
  PerceptionMode mode,
  const ExecutiveParams& params);

} // namespace cpsim

#endif // CPSIM__EXECUTIVE_HPP
