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

#include <cpsim/world.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace cpsim {

//==============================================================================
std::string_view to_string(PerceptionMode mode)
{
  return mode == PerceptionMode::Standalone ? "SP" : "CP";
}

//==============================================================================
std::vector<Cell> CellRect::cells() const
{
  std::vector<Cell> out;
  for (int y = y0; y <= y1; ++y)
  {
    for (int x = x0; x <= x1; ++x)
      out.push_back({x, y});
  }

  return out;
}

//==============================================================================
void SensorConfig::validate() const
{
  if (!(range >= 0.0))
    throw std::invalid_argument("sensor range must be >= 0");

  if (!(angular_resolution > 0.0) || !(angular_resolution <= fov))
    throw std::invalid_argument("sensor needs 0 < angular_resolution <= fov");

  if (fov > 2.0 * std::numbers::pi + 1e-12)
    throw std::invalid_argument("sensor fov must not exceed 2*pi");
}

//==============================================================================
ParseError::ParseError(
  std::size_t line, std::size_t column, const std::string& what)
: std::runtime_error(
    "line " + std::to_string(line) + ", column " + std::to_string(column)
    + ": " + what),
  _line(line),
  _column(column)
{
  // Do nothing
}

//==============================================================================
std::size_t WorldModel::rack_count() const
{
  return static_cast<std::size_t>(std::count(_rack.begin(), _rack.end(), true));
}

//==============================================================================
const RobotState& WorldModel::robot(int id) const
{
  for (const auto& r : _robots)
  {
    if (r.id == id)
      return r;
  }

  throw std::out_of_range("no robot with id " + std::to_string(id));
}

//==============================================================================
Costmap WorldModel::static_costmap() const
{
  Costmap map(_width, _height, _resolution);
  for (std::size_t i = 0; i < _rack.size(); ++i)
  {
    if (_rack[i])
      map.set_cost(i, cost::Lethal);
  }

  return map;
}

//==============================================================================
Costmap WorldModel::ground_truth_costmap() const
{
  Costmap map = static_costmap();
  for (std::size_t i = 0; i < _obstacle_at.size(); ++i)
  {
    if (_obstacle_at[i] >= 0)
      map.set_cost(i, cost::Lethal);
  }

  return map;
}

//==============================================================================
Point2 WorldModel::cell_center(const Cell& c) const
{
  return {(c.x + 0.5) * _resolution, (c.y + 0.5) * _resolution};
}

//==============================================================================
Cell WorldModel::cell_at(const Point2& p) const
{
  const Cell c{
    static_cast<int>(std::floor(p.x / _resolution)),
    static_cast<int>(std::floor(p.y / _resolution))};
  if (!in_bounds(c))
    throw std::out_of_range("point is outside the world");

  return c;
}

//==============================================================================
int WorldModel::spawn_obstacle(std::span<const Cell> footprint, double time)
{
  if (footprint.empty())
    throw PlacementError("obstacle footprint is empty");

  std::set<Cell> robot_cells;
  for (const auto& r : _robots)
    robot_cells.insert(cell_at(r.pose));

  std::set<Cell> unique;
  for (const auto& c : footprint)
  {
    if (!in_bounds(c))
      throw PlacementError("obstacle cell " + to_string(c) + " is off the map");

    if (is_rack(c))
      throw PlacementError("obstacle cell " + to_string(c) + " is a rack");

    if (is_obstacle(c))
    {
      throw PlacementError(
        "obstacle cell " + to_string(c) + " overlaps obstacle "
        + std::to_string(_obstacle_at[index(c)]));
    }

    if (robot_cells.count(c))
      throw PlacementError("obstacle cell " + to_string(c) + " holds a robot");

    unique.insert(c);
  }

  const int id = _obstacles.empty() ? 0 : _obstacles.back().id + 1;
  Obstacle obstacle{id, {unique.begin(), unique.end()}, time};
  for (const auto& c : obstacle.cells)
    _obstacle_at[index(c)] = id;

  _obstacles.push_back(std::move(obstacle));
  return id;
}

//==============================================================================
void WorldModel::add_robot(RobotState robot)
{
  robot.sensor.validate();
  if (!(robot.speed > 0.0))
    throw PlacementError("robot speed must be positive");

  for (const auto& r : _robots)
  {
    if (r.id == robot.id)
      throw PlacementError("duplicate robot id " + std::to_string(robot.id));
  }

  const Cell c{
    static_cast<int>(std::floor(robot.pose.x / _resolution)),
    static_cast<int>(std::floor(robot.pose.y / _resolution))};
  if (is_blocking(c))
    throw PlacementError("robot placed on blocked cell " + to_string(c));

  _robots.push_back(std::move(robot));
}

//==============================================================================
void WorldModel::advance(double dt, std::span<const Point2> displacements)
{
  if (!(dt > 0.0))
    throw std::invalid_argument("time step must be positive");

  if (displacements.size() != _robots.size())
    throw std::invalid_argument("need exactly one displacement per robot");

  for (std::size_t i = 0; i < _robots.size(); ++i)
  {
    const auto& d = displacements[i];
    const double limit = _robots[i].speed * dt + 1e-9;
    if (std::hypot(d.x, d.y) > limit)
    {
      throw std::invalid_argument(
        "robot " + std::to_string(_robots[i].id) + " moved faster than its speed");
    }
  }

  for (std::size_t i = 0; i < _robots.size(); ++i)
  {
    auto& r = _robots[i];
    const auto& d = displacements[i];
    if (d.x == 0.0 && d.y == 0.0)
      continue;

    r.pose.x += d.x;
    r.pose.y += d.y;
    r.heading = std::atan2(d.y, d.x);

    const Cell c{
      static_cast<int>(std::floor(r.pose.x / _resolution)),
      static_cast<int>(std::floor(r.pose.y / _resolution))};
    if (is_blocking(c))
      r.collided = true;
  }

  _clock += dt;
}

//==============================================================================
void WorldModel::advance(double dt)
{
  if (!(dt > 0.0))
    throw std::invalid_argument("time step must be positive");

  _clock += dt;
}

//==============================================================================
WorldModel load_world(std::string_view map_text, const WorldConfig& config)
{
  if (!(config.resolution > 0.0))
    throw std::invalid_argument("world resolution must be positive");

  std::vector<std::string_view> rows;
  std::size_t start = 0;
  while (start < map_text.size())
  {
    std::size_t end = map_text.find('\n', start);
    if (end == std::string_view::npos)
      end = map_text.size();

    rows.push_back(map_text.substr(start, end - start));
    start = end + 1;
  }

  if (rows.empty() || rows.front().empty())
    throw ParseError(1, 1, "map is empty");

  WorldModel world;
  world._width = static_cast<int>(rows.front().size());
  world._height = static_cast<int>(rows.size());
  world._resolution = config.resolution;
  const auto cells = static_cast<std::size_t>(world._width)
    * static_cast<std::size_t>(world._height);
  world._rack.assign(cells, false);
  world._obstacle_at.assign(cells, -1);

  for (std::size_t y = 0; y < rows.size(); ++y)
  {
    const auto row = rows[y];
    if (row.size() != rows.front().size())
    {
      throw ParseError(
        y + 1, std::min(row.size(), rows.front().size()) + 1,
        "row has " + std::to_string(row.size()) + " cells, expected "
        + std::to_string(rows.front().size()));
    }

    for (std::size_t x = 0; x < row.size(); ++x)
    {
      const char ch = row[x];
      if (ch == '#')
        world._rack[y * row.size() + x] = true;
      else if (ch != '.')
      {
        throw ParseError(
          y + 1, x + 1, std::string("unknown map character '") + ch + "'");
      }
    }
  }

  std::set<int> ids;
  for (const auto& aisle : config.aisles)
  {
    const auto& r = aisle.rect;
    if (r.x0 > r.x1 || r.y0 > r.y1 || !world.in_bounds({r.x0, r.y0})
      || !world.in_bounds({r.x1, r.y1}))
    {
      throw ParseError(
        static_cast<std::size_t>(std::max(r.y0, 0)) + 1,
        static_cast<std::size_t>(std::max(r.x0, 0)) + 1,
        "aisle " + std::to_string(aisle.id) + " rectangle is outside the map");
    }

    if (!ids.insert(aisle.id).second)
    {
      throw ParseError(
        r.y0 + 1, r.x0 + 1, "duplicate aisle id " + std::to_string(aisle.id));
    }

    for (const auto& c : r.cells())
    {
      if (world.is_rack(c))
      {
        throw ParseError(
          c.y + 1, c.x + 1,
          "aisle " + std::to_string(aisle.id) + " overlaps a rack");
      }
    }
  }

  world._aisles = config.aisles;
  std::sort(
    world._aisles.begin(), world._aisles.end(),
    [](const auto& a, const auto& b) { return a.id < b.id; });

  return world;
}

//==============================================================================
std::string read_text_file(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open " + path);

  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace cpsim
