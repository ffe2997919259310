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

#include <cpsim/executive.hpp>

#include <cmath>
#include <numbers>

namespace cpsim {

//==============================================================================
std::string_view to_string(MissionEvent::Kind kind)
{
  switch (kind)
  {
    case MissionEvent::Kind::PlanIssued: return "plan_issued";
    case MissionEvent::Kind::BlockageDetected: return "blockage_detected";
    case MissionEvent::Kind::Replanned: return "replanned";
    case MissionEvent::Kind::GoalReached: return "goal_reached";
    case MissionEvent::Kind::Infeasible: return "infeasible";
    case MissionEvent::Kind::Truncated: return "truncated";
  }

  return "unknown";
}

//==============================================================================
std::optional<std::size_t> check_path_blocked(
  const std::vector<Cell>& waypoints,
  std::size_t from,
  const Costmap& costmap)
{
  for (std::size_t i = from + 1; i < waypoints.size(); ++i)
  {
    if (costmap.cost(waypoints[i]) >= cost::Inscribed)
      return i;
  }

  return std::nullopt;
}

//==============================================================================
MissionResult run_mission(
  const WorldModel& world,
  const RobotState& robot,
  const Mission& mission,
  PerceptionMode mode,
  const ExecutiveParams& params)
{
  WorldModel w = world;
  RobotState r = robot;
  r.pose = w.cell_center(mission.start);
  r.mode = mode;
  r.collided = false;
  w.add_robot(r);

  const Costmap static_layer = w.static_costmap();
  CentralServer server(static_layer, params.inflation, params.share_latency);
  RobotKnowledge knowledge(mode, static_layer, params.inflation);

  MissionResult result;
  result.mode = mode;
  result.trajectory.push_back(mission.start);

  std::vector<Cell> path;
  std::size_t cursor = 0;
  bool has_plan = false;
  bool finished = false;
  double planning_time = 0.0;

  const auto log = [&](std::size_t tick, MissionEvent::Kind kind, Cell where,
      std::string detail = {})
    {
      result.events.push_back({tick, w.clock(), kind, where, std::move(detail)});
    };

  for (std::size_t tick = 0; tick < params.tick_limit; ++tick)
  {
    // Overhead sensors by ascending aisle id, then the robot.
    if (mode == PerceptionMode::Collaborative)
    {
      std::vector<PerceptionUpdate> updates;
      for (const auto& aisle : w.aisles())
      {
        if (aisle.overhead_sensor)
          updates.push_back(overhead_scan(w, aisle));
      }

      server.apply(updates, w.clock());
      if (const auto snapshot = server.received(w.clock()))
        knowledge.apply_shared(*snapshot);
    }

    const RobotState& self = w.robots().front();
    knowledge.apply_onboard(onboard_scan(w, self));

    const Cell here = w.cell_at(self.pose);
    if (here == mission.goal)
    {
      result.reached = true;
      log(tick, MissionEvent::Kind::GoalReached, here);
      finished = true;
      break;
    }

    std::optional<std::size_t> blocked;
    if (has_plan)
      blocked = check_path_blocked(path, cursor, knowledge.costmap());

    if (!has_plan || blocked)
    {
      if (blocked)
      {
        log(tick, MissionEvent::Kind::BlockageDetected, path[*blocked],
          "waypoint " + std::to_string(*blocked));
      }

      AraResult search;
      try
      {
        search = ara_star(knowledge.costmap(), here, mission.goal, params.planner);
      }
      catch (const BlockedEndpointError& e)
      {
        log(tick, MissionEvent::Kind::Infeasible, here, e.what());
        finished = true;
        break;
      }

      result.total_expansions += search.expansions;
      const double dt = params.timing.planning_time(search.expansions);
      planning_time += dt;
      if (dt > 0.0)
        w.advance(dt);

      const Plan* best = search.best();
      if (best == nullptr)
      {
        log(tick, MissionEvent::Kind::Infeasible, here,
          search.status == AraResult::Status::Infeasible
          ? "no path under current knowledge"
          : "expansion budget exhausted");
        finished = true;
        break;
      }

      result.plans.push_back(*best);
      result.plan_starts.push_back(result.trajectory.size() - 1);
      if (params.record_costmaps)
        result.plan_costmaps.push_back(knowledge.costmap());

      path = best->waypoints;
      cursor = 0;
      has_plan = true;

      if (result.plans.size() > 1)
      {
        ++result.replans;
        log(tick, MissionEvent::Kind::Replanned, here,
          "cost " + std::to_string(best->cost));
      }
      else
      {
        log(tick, MissionEvent::Kind::PlanIssued, here,
          "cost " + std::to_string(best->cost));
      }

      continue;
    }

    const Cell next = path[cursor + 1];
    const bool diagonal = next.x != here.x && next.y != here.y;
    const double step =
      (diagonal ? std::numbers::sqrt2 : 1.0) * w.resolution();
    const Point2 from = w.cell_center(here);
    const Point2 to = w.cell_center(next);
    const Point2 displacement[] = {{to.x - from.x, to.y - from.y}};
    w.advance(step / self.speed, displacement);
    ++cursor;

    if (diagonal)
      ++result.diagonal_steps;
    else
      ++result.straight_steps;

    result.trajectory.push_back(next);
    if (w.robots().front().collided)
    {
      result.collided = true;
      finished = true;
      break;
    }
  }

  if (!finished)
  {
    result.truncated = true;
    log(params.tick_limit, MissionEvent::Kind::Truncated,
      w.cell_at(w.robots().front().pose));
  }

  result.distance = (static_cast<double>(result.straight_steps)
    + static_cast<double>(result.diagonal_steps) * std::numbers::sqrt2)
    * w.resolution();
  result.time = result.distance / robot.speed + planning_time;
  return result;
}

} // namespace cpsim
