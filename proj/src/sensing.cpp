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

#include <cpsim/sensing.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace cpsim {

//==============================================================================
std::vector<double> ray_angles(double heading, const SensorConfig& sensor)
{
  sensor.validate();
  std::vector<double> angles;
  constexpr double tau = 2.0 * std::numbers::pi;
  if (sensor.fov >= tau - 1e-12)
  {
    const auto n =
      static_cast<std::size_t>(std::llround(tau / sensor.angular_resolution));
    for (std::size_t i = 0; i < std::max<std::size_t>(n, 1); ++i)
      angles.push_back(heading + i * sensor.angular_resolution);
  }
  else
  {
    const auto n = static_cast<std::size_t>(
      std::floor(sensor.fov / sensor.angular_resolution + 1e-9));
    const double first = heading - 0.5 * sensor.fov;
    for (std::size_t i = 0; i <= n; ++i)
      angles.push_back(first + i * sensor.angular_resolution);
  }

  return angles;
}

namespace {

constexpr double Infinity = std::numeric_limits<double>::infinity();

//==============================================================================
// Parameter at which a ray leaves the current cell across its x (or y)
// boundary. Coordinates are in cell units.
double next_crossing(int cell, double origin, double direction)
{
  if (direction > 0.0)
    return (static_cast<double>(cell + 1) - origin) / direction;

  if (direction < 0.0)
    return (static_cast<double>(cell) - origin) / direction;

  return Infinity;
}

} // anonymous namespace

//==============================================================================
std::vector<Cell> raycast_visible_cells(
  const WorldModel& world,
  const Point2& pose,
  double heading,
  const SensorConfig& sensor)
{
  const double res = world.resolution();
  const double px = pose.x / res;
  const double py = pose.y / res;
  const double range = sensor.range / res;
  const double range_sq = (range + RadiusTolerance) * (range + RadiusTolerance);
  const Cell own{
    static_cast<int>(std::floor(px)), static_cast<int>(std::floor(py))};

  if (!world.in_bounds(own))
    throw std::out_of_range("sensor pose is outside the world");

  const int w = world.width();
  std::vector<bool> seen(
    static_cast<std::size_t>(w) * static_cast<std::size_t>(world.height()),
    false);
  std::vector<Cell> visible{own};
  seen[static_cast<std::size_t>(own.y) * w + own.x] = true;

  if (world.is_blocking(own) || range <= 0.0)
    return visible;

  for (const double angle : ray_angles(heading, sensor))
  {
    const double dx = std::cos(angle);
    const double dy = std::sin(angle);
    const int step_x = dx > 0.0 ? 1 : (dx < 0.0 ? -1 : 0);
    const int step_y = dy > 0.0 ? 1 : (dy < 0.0 ? -1 : 0);

    int cx = own.x;
    int cy = own.y;
    double t_x = next_crossing(cx, px, dx);
    double t_y = next_crossing(cy, py, dy);

    while (true)
    {
      const double t_enter = std::min(t_x, t_y);
      if (t_enter > range)
        break;

      if (t_x <= t_y)
      {
        cx += step_x;
        t_x = next_crossing(cx, px, dx);
      }

      // A tie crosses the corner: step both axes so neither side cell, which
      // the ray only touches at a point, counts as entered.
      if (t_enter == t_y)
      {
        cy += step_y;
        t_y = next_crossing(cy, py, dy);
      }

      const Cell c{cx, cy};
      if (!world.in_bounds(c))
        break;

      const double ox = cx + 0.5 - px;
      const double oy = cy + 0.5 - py;
      const auto i = static_cast<std::size_t>(cy) * w + cx;
      if (ox * ox + oy * oy <= range_sq && !seen[i])
      {
        seen[i] = true;
        visible.push_back(c);
      }

      if (world.is_blocking(c))
        break;
    }
  }

  std::sort(visible.begin(), visible.end());
  return visible;
}

//==============================================================================
PerceptionUpdate onboard_scan(const WorldModel& world, const RobotState& robot)
{
  PerceptionUpdate update{
    {PerceptionSource::Kind::Onboard, robot.id}, {}, world.clock()};

  // Only cells whose centre lies within range can be visible, so skip the
  // raycast entirely when no obstacle cell is that close.
  const double res = world.resolution();
  const double reach = robot.sensor.range + res;
  bool any_near = false;
  for (const auto& obstacle : world.obstacles())
  {
    for (const auto& c : obstacle.cells)
    {
      const auto p = world.cell_center(c);
      if (std::abs(p.x - robot.pose.x) <= reach
        && std::abs(p.y - robot.pose.y) <= reach)
      {
        any_near = true;
        break;
      }
    }

    if (any_near)
      break;
  }

  if (!any_near)
    return update;

  for (const auto& c :
    raycast_visible_cells(world, robot.pose, robot.heading, robot.sensor))
  {
    if (world.is_obstacle(c))
      update.detected_cells.push_back(c);
  }

  return update;
}

//==============================================================================
PerceptionUpdate overhead_scan(const WorldModel& world, const AisleRegion& aisle)
{
  if (!aisle.overhead_sensor)
  {
    throw std::invalid_argument(
      "aisle " + std::to_string(aisle.id) + " has no overhead sensor");
  }

  PerceptionUpdate update{
    {PerceptionSource::Kind::Overhead, aisle.id}, {}, world.clock()};
  for (const auto& obstacle : world.obstacles())
  {
    for (const auto& c : obstacle.cells)
    {
      if (aisle.rect.contains(c))
        update.detected_cells.push_back(c);
    }
  }

  std::sort(update.detected_cells.begin(), update.detected_cells.end());
  return update;
}

//==============================================================================
LayeredCostmap LayeredCostmap::from_static(
  Costmap static_layer, const InflationParams& params)
{
  Costmap obstacles(
    static_layer.width(), static_layer.height(), static_layer.resolution(),
    static_layer.origin());
  Costmap master = inflate(static_layer, params);
  return {std::move(static_layer), std::move(obstacles), std::move(master)};
}

//==============================================================================
void LayeredCostmap::reinflate(const InflationParams& params)
{
  master = inflate(fuse(static_layer, obstacle_layer), params);
}

//==============================================================================
std::size_t LayeredCostmap::known_obstacle_cells() const
{
  const auto c = obstacle_layer.costs();
  return static_cast<std::size_t>(std::count(c.begin(), c.end(), cost::Lethal));
}

namespace {

//==============================================================================
bool adds_anything(const Costmap& layer, std::span<const Cell> cells)
{
  return std::any_of(
    cells.begin(), cells.end(),
    [&](const Cell& c) { return layer.cost(c) != cost::Lethal; });
}

} // anonymous namespace

//==============================================================================
LayeredCostmap apply_update_sp(
  const LayeredCostmap& robot_map,
  const PerceptionUpdate& update,
  const InflationParams& params)
{
  if (!adds_anything(robot_map.obstacle_layer, update.detected_cells))
    return robot_map;

  LayeredCostmap out = robot_map;
  out.obstacle_layer = mark_lethal(out.obstacle_layer, update.detected_cells);
  out.reinflate(params);
  return out;
}

//==============================================================================
LayeredCostmap apply_update_cp(
  const LayeredCostmap& server_map,
  std::span<const PerceptionUpdate> updates,
  const InflationParams& params)
{
  bool changed = false;
  for (const auto& u : updates)
    changed = changed || adds_anything(server_map.obstacle_layer, u.detected_cells);

  if (!changed)
    return server_map;

  std::vector<Costmap> layers{server_map.obstacle_layer};
  const Costmap blank(
    server_map.obstacle_layer.width(), server_map.obstacle_layer.height(),
    server_map.obstacle_layer.resolution(), server_map.obstacle_layer.origin());
  for (const auto& u : updates)
    layers.push_back(mark_lethal(blank, u.detected_cells));

  LayeredCostmap out = server_map;
  out.obstacle_layer = fuse(layers);
  out.reinflate(params);
  return out;
}

//==============================================================================
CentralServer::CentralServer(
  Costmap static_layer, InflationParams params, double share_latency)
: _params(params),
  _latency(share_latency)
{
  if (!(share_latency >= 0.0))
    throw std::invalid_argument("share_latency must be >= 0");

  // The static map is known to every robot before the trial starts, so the
  // initial snapshot is visible from any time.
  _history.push_back(
    {-Infinity,
      std::make_shared<const LayeredCostmap>(
        LayeredCostmap::from_static(std::move(static_layer), params))});
}

//==============================================================================
void CentralServer::apply(
  std::span<const PerceptionUpdate> updates, double time)
{
  const auto& latest = *_history.back().map;
  auto next = apply_update_cp(latest, updates, _params);
  if (next.obstacle_layer == latest.obstacle_layer)
    return;

  _history.push_back(
    {time, std::make_shared<const LayeredCostmap>(std::move(next))});
}

//==============================================================================
std::shared_ptr<const LayeredCostmap> CentralServer::received(double now) const
{
  for (auto it = _history.rbegin(); it != _history.rend(); ++it)
  {
    if (it->time + _latency <= now)
      return it->map;
  }

  return nullptr;
}

//==============================================================================
std::size_t CentralServer::version_at(double now) const
{
  std::size_t version = 0;
  for (std::size_t i = 0; i < _history.size(); ++i)
  {
    if (_history[i].time + _latency <= now)
      version = i;
  }

  return version;
}

//==============================================================================
RobotKnowledge::RobotKnowledge(
  PerceptionMode mode, Costmap static_layer, InflationParams params)
: _mode(mode),
  _params(params),
  _onboard(
    static_layer.width(), static_layer.height(), static_layer.resolution(),
    static_layer.origin()),
  _shared(_onboard),
  _map(LayeredCostmap::from_static(std::move(static_layer), params))
{
  // Do nothing
}

//==============================================================================
bool RobotKnowledge::apply_onboard(const PerceptionUpdate& update)
{
  if (!adds_anything(_onboard, update.detected_cells))
    return false;

  _onboard = mark_lethal(_onboard, update.detected_cells);
  const bool learned = adds_anything(_map.obstacle_layer, update.detected_cells);
  if (learned)
    rebuild();

  return learned;
}

//==============================================================================
bool RobotKnowledge::apply_shared(const LayeredCostmap& snapshot)
{
  if (_mode == PerceptionMode::Standalone)
    return false;

  if (!_shared.same_grid(snapshot.obstacle_layer))
    throw IncompatibleGridError("shared snapshot does not match robot grid");

  if (snapshot.obstacle_layer == _shared)
    return false;

  const Costmap before = _map.obstacle_layer;
  _shared = snapshot.obstacle_layer;
  const Costmap merged = fuse(_shared, _onboard);
  if (merged == before)
    return false;

  rebuild();
  return true;
}

//==============================================================================
void RobotKnowledge::rebuild()
{
  _map.obstacle_layer = fuse(_shared, _onboard);
  _map.reinflate(_params);
}

} // namespace cpsim
