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

#ifndef CPSIM__WORLD_HPP
#define CPSIM__WORLD_HPP

#include <cpsim/costmap.hpp>

#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cpsim {

//==============================================================================
enum class PerceptionMode
{
  Standalone,
  Collaborative
};

std::string_view to_string(PerceptionMode mode);

//==============================================================================
/// Inclusive axis-aligned cell rectangle.
struct CellRect
{
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;

  bool contains(const Cell& c) const
  {
    return x0 <= c.x && c.x <= x1 && y0 <= c.y && c.y <= y1;
  }

  std::vector<Cell> cells() const;

  friend bool operator==(const CellRect&, const CellRect&) = default;
};

//==============================================================================
struct AisleRegion
{
  int id = 0;
  CellRect rect;
  bool overhead_sensor = true;
};

struct Obstacle
{
  int id = 0;
  std::vector<Cell> cells;
  double spawn_time = 0.0;
};

//==============================================================================
struct SensorConfig
{
  double range = 5.0;
  double angular_resolution = 0.5 * std::numbers::pi / 180.0;
  double fov = 2.0 * std::numbers::pi;

  void validate() const;
};

struct RobotState
{
  int id = 0;
  Point2 pose;
  double heading = 0.0;
  double speed = 1.0;
  SensorConfig sensor;
  PerceptionMode mode = PerceptionMode::Standalone;
  bool collided = false;
};

struct Mission
{
  Cell start;
  Cell goal;
};

//==============================================================================
struct WorldConfig
{
  double resolution = 0.1;
  std::vector<AisleRegion> aisles;
};

//==============================================================================
class ParseError : public std::runtime_error
{
public:
  ParseError(std::size_t line, std::size_t column, const std::string& what);

  std::size_t line() const { return _line; }
  std::size_t column() const { return _column; }

private:
  std::size_t _line;
  std::size_t _column;
};

class PlacementError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

//==============================================================================
/// Ground truth for one trial: static rack layout, aisles, obstacles and
/// robots. A world has a single writer; trials never share one.
class WorldModel
{
public:
  int width() const { return _width; }
  int height() const { return _height; }
  double resolution() const { return _resolution; }
  double clock() const { return _clock; }

  bool in_bounds(const Cell& c) const
  {
    return 0 <= c.x && c.x < _width && 0 <= c.y && c.y < _height;
  }

  bool is_rack(const Cell& c) const { return _rack[index(c)]; }
  bool is_obstacle(const Cell& c) const { return _obstacle_at[index(c)] >= 0; }

  /// Rack or obstacle. Out-of-bounds cells count as blocking.
  bool is_blocking(const Cell& c) const
  {
    return !in_bounds(c) || is_rack(c) || is_obstacle(c);
  }

  std::size_t rack_count() const;

  const std::vector<AisleRegion>& aisles() const { return _aisles; }
  const std::vector<Obstacle>& obstacles() const { return _obstacles; }
  const std::vector<RobotState>& robots() const { return _robots; }
  const RobotState& robot(int id) const;

  /// Racks lethal, everything else free. No inflation.
  Costmap static_costmap() const;

  /// Racks and obstacles lethal. No inflation.
  Costmap ground_truth_costmap() const;

  Point2 cell_center(const Cell& c) const;

  /// Throws std::out_of_range if the point is off the grid.
  Cell cell_at(const Point2& p) const;

  /// Appends an obstacle with the next free id. Throws PlacementError if the
  /// footprint is empty, leaves the grid, or overlaps a rack, a robot or
  /// another obstacle.
  int spawn_obstacle(std::span<const Cell> footprint, double time);

  /// Throws PlacementError unless the robot sits on a free cell and its id
  /// is unused.
  void add_robot(RobotState robot);

  /// Moves every robot by its displacement (one entry per robot, in the
  /// order of robots()) and advances the clock. Robots that end up on a
  /// blocking cell are flagged collided. Throws std::invalid_argument for
  /// dt <= 0, a wrong number of displacements, or a displacement longer than
  /// speed * dt.
  void advance(double dt, std::span<const Point2> displacements);

  /// Advances only the clock.
  void advance(double dt);

private:
  friend WorldModel load_world(std::string_view, const WorldConfig&);

  std::size_t index(const Cell& c) const
  {
    return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(_width)
      + static_cast<std::size_t>(c.x);
  }

  int _width = 0;
  int _height = 0;
  double _resolution = 0.1;
  double _clock = 0.0;
  std::vector<bool> _rack;
  std::vector<int> _obstacle_at;
  std::vector<AisleRegion> _aisles;
  std::vector<Obstacle> _obstacles;
  std::vector<RobotState> _robots;
};

/// Parses an ASCII map ('.' free, '#' rack, one row per line, top row first)
/// and attaches the configured aisles. Throws ParseError with a 1-based
/// line/column for ragged rows, unknown characters and invalid aisles.
WorldModel load_world(std::string_view map_text, const WorldConfig& config);

/// Reads a whole text file. Throws std::runtime_error if it cannot be read.
std::string read_text_file(const std::string& path);

} // namespace cpsim

#endif // CPSIM__WORLD_HPP
