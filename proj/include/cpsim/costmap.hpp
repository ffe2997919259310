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

#ifndef CPSIM__COSTMAP_HPP
#define CPSIM__COSTMAP_HPP

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cpsim {

//==============================================================================
/// Integer cell coordinate. Rows run top-to-bottom in the same order as the
/// ASCII map text, so y grows downwards.
struct Cell
{
  int x = 0;
  int y = 0;

  friend auto operator<=>(const Cell&, const Cell&) = default;
};

std::string to_string(const Cell& cell);

//==============================================================================
struct Point2
{
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

//==============================================================================
namespace cost {
constexpr std::uint8_t Free = 0;
constexpr std::uint8_t MaxNonLethal = 252;
constexpr std::uint8_t Inscribed = 253;
constexpr std::uint8_t Lethal = 254;
} // namespace cost

//==============================================================================
class BoundsError : public std::out_of_range
{
public:
  explicit BoundsError(const Cell& cell);

  const Cell& cell() const { return _cell; }

private:
  Cell _cell;
};

class IncompatibleGridError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

//==============================================================================
/// A 2D grid of traversal costs in [0, 254]. Costmaps are treated as values:
/// every operation below returns a fresh snapshot rather than mutating its
/// input, so a snapshot can be handed to a planner on another thread.
class Costmap
{
public:
  Costmap(
    int width,
    int height,
    double resolution,
    Point2 origin = {},
    std::uint8_t fill = cost::Free);

  int width() const { return _width; }
  int height() const { return _height; }
  double resolution() const { return _resolution; }
  const Point2& origin() const { return _origin; }
  std::size_t size() const { return _costs.size(); }

  bool in_bounds(const Cell& cell) const
  {
    return 0 <= cell.x && cell.x < _width && 0 <= cell.y && cell.y < _height;
  }

  std::size_t index(const Cell& cell) const
  {
    return static_cast<std::size_t>(cell.y) * static_cast<std::size_t>(_width)
      + static_cast<std::size_t>(cell.x);
  }

  Cell cell(std::size_t index) const
  {
    return {static_cast<int>(index % static_cast<std::size_t>(_width)),
      static_cast<int>(index / static_cast<std::size_t>(_width))};
  }

  /// Throws BoundsError if the cell is outside the grid.
  std::uint8_t cost(const Cell& cell) const;
  std::uint8_t cost(std::size_t index) const { return _costs[index]; }

  /// Throws BoundsError if the cell is outside the grid.
  void set_cost(const Cell& cell, std::uint8_t value);
  void set_cost(std::size_t index, std::uint8_t value) { _costs[index] = value; }

  std::span<const std::uint8_t> costs() const { return _costs; }

  Point2 cell_center(const Cell& cell) const;
  std::optional<Cell> world_to_cell(const Point2& p) const;

  /// True when width, height, resolution and origin all match.
  bool same_grid(const Costmap& other) const;

  friend bool operator==(const Costmap&, const Costmap&) = default;

private:
  int _width;
  int _height;
  double _resolution;
  Point2 _origin;
  std::vector<std::uint8_t> _costs;
};

//==============================================================================
struct InflationParams
{
  /// Cells whose centre lies within this distance of a lethal cell centre are
  /// marked Inscribed.
  double inscribed_radius = 0.3;

  /// Decay band outer limit.
  double inflation_radius = 0.8;

  /// Exponential decay rate (1/m) inside the band.
  double cost_scaling_factor = 10.0;

  /// Throws std::invalid_argument unless
  /// 0 <= inscribed <= inflation and scaling > 0.
  void validate() const;
};

/// Slack applied when comparing a distance against an inflation radius so
/// that e.g. 3 cells of 0.1 m count as 0.3 m.
constexpr double RadiusTolerance = 1e-9;

/// Distances in meters, one per cell, row-major. +inf where there is no
/// lethal cell at all.
struct DistanceGrid
{
  int width = 0;
  int height = 0;
  std::vector<double> meters;

  double at(const Cell& c) const
  {
    return meters[static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width)
      + static_cast<std::size_t>(c.x)];
  }
};

/// Sets every listed cell to Lethal. Throws BoundsError naming the first
/// out-of-bounds cell; the input map is never modified.
Costmap mark_lethal(const Costmap& map, std::span<const Cell> cells);

/// Exact Euclidean distance from each cell centre to the nearest lethal cell
/// centre.
DistanceGrid distance_transform(const Costmap& map);

/// Cost assigned to a cell at distance `d` (meters) from the nearest lethal
/// cell, ignoring whatever cost the cell had before inflation.
std::uint8_t inflation_cost(double d, const InflationParams& params);

/// Inflates every lethal cell of `map`. Cells beyond the inflation radius
/// keep their cost; inside it a cell never drops below its input cost.
Costmap inflate(const Costmap& map, const InflationParams& params);

/// Cell-wise maximum. Throws IncompatibleGridError if the inputs do not share
/// a grid, or std::invalid_argument if `maps` is empty.
Costmap fuse(std::span<const Costmap> maps);
Costmap fuse(const Costmap& a, const Costmap& b);

/// Every lethal cell in ascending index order.
std::vector<Cell> lethal_cells(const Costmap& map);

} // namespace cpsim

#endif // CPSIM__COSTMAP_HPP
