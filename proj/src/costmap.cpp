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

#include <cpsim/costmap.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace cpsim {

//==============================================================================
std::string to_string(const Cell& cell)
{
  return "(" + std::to_string(cell.x) + ", " + std::to_string(cell.y) + ")";
}

//==============================================================================
BoundsError::BoundsError(const Cell& cell)
: std::out_of_range("cell " + to_string(cell) + " is out of bounds"),
  _cell(cell)
{
  // Do nothing
}

//==============================================================================
Costmap::Costmap(
  int width,
  int height,
  double resolution,
  Point2 origin,
  std::uint8_t fill)
: _width(width),
  _height(height),
  _resolution(resolution),
  _origin(origin)
{
  if (width <= 0 || height <= 0)
    throw std::invalid_argument("costmap dimensions must be positive");

  if (!(resolution > 0.0))
    throw std::invalid_argument("costmap resolution must be positive");

  _costs.assign(
    static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

//==============================================================================
std::uint8_t Costmap::cost(const Cell& cell) const
{
  if (!in_bounds(cell))
    throw BoundsError(cell);

  return _costs[index(cell)];
}

//==============================================================================
void Costmap::set_cost(const Cell& cell, std::uint8_t value)
{
  if (!in_bounds(cell))
    throw BoundsError(cell);

  _costs[index(cell)] = value;
}

//==============================================================================
Point2 Costmap::cell_center(const Cell& cell) const
{
  return {
    _origin.x + (cell.x + 0.5) * _resolution,
    _origin.y + (cell.y + 0.5) * _resolution};
}

//==============================================================================
std::optional<Cell> Costmap::world_to_cell(const Point2& p) const
{
  const double gx = std::floor((p.x - _origin.x) / _resolution);
  const double gy = std::floor((p.y - _origin.y) / _resolution);
  if (gx < 0.0 || gy < 0.0 || gx >= _width || gy >= _height)
    return std::nullopt;

  return Cell{static_cast<int>(gx), static_cast<int>(gy)};
}

//==============================================================================
bool Costmap::same_grid(const Costmap& other) const
{
  return _width == other._width && _height == other._height
    && _resolution == other._resolution && _origin == other._origin;
}

//==============================================================================
void InflationParams::validate() const
{
  if (!(inscribed_radius >= 0.0))
    throw std::invalid_argument("inscribed_radius must be >= 0");

  if (!(inflation_radius >= inscribed_radius))
    throw std::invalid_argument("inflation_radius must be >= inscribed_radius");

  if (!(cost_scaling_factor > 0.0))
    throw std::invalid_argument("cost_scaling_factor must be > 0");
}

//==============================================================================
Costmap mark_lethal(const Costmap& map, std::span<const Cell> cells)
{
  Costmap out = map;
  for (const auto& c : cells)
  {
    if (!map.in_bounds(c))
      throw BoundsError(c);

    out.set_cost(map.index(c), cost::Lethal);
  }

  return out;
}

namespace {

constexpr double Unreached = std::numeric_limits<double>::infinity();

//==============================================================================
// One dimensional squared distance transform over a sampled function, using
// the lower envelope of parabolas. Sites with value +inf are skipped, so a
// line with no finite samples stays at +inf. All sample values are exact
// integers, which keeps the squared distances exact in double precision.
void squared_edt_1d(
  std::vector<double>& f,
  std::vector<int>& v,
  std::vector<double>& z,
  std::vector<double>& out)
{
  const int n = static_cast<int>(f.size());
  int k = -1;
  for (int q = 0; q < n; ++q)
  {
    if (f[q] == Unreached)
      continue;

    while (k >= 0)
    {
      const int p = v[k];
      const double s =
        ((f[q] + double(q) * q) - (f[p] + double(p) * p)) / (2.0 * (q - p));
      if (s <= z[k])
        --k;
      else
      {
        ++k;
        v[k] = q;
        z[k] = s;
        break;
      }
    }

    if (k < 0)
    {
      k = 0;
      v[0] = q;
      z[0] = -Unreached;
    }
  }

  if (k < 0)
  {
    std::fill(out.begin(), out.end(), Unreached);
    return;
  }

  z[k + 1] = Unreached;
  int j = 0;
  for (int q = 0; q < n; ++q)
  {
    while (z[j + 1] < q)
      ++j;

    const double d = q - v[j];
    out[q] = d * d + f[v[j]];
  }
}

} // anonymous namespace

//==============================================================================
DistanceGrid distance_transform(const Costmap& map)
{
  const int w = map.width();
  const int h = map.height();
  const std::size_t stride = static_cast<std::size_t>(w);

  std::vector<double> sq(map.size(), Unreached);
  for (std::size_t i = 0; i < map.size(); ++i)
  {
    if (map.cost(i) == cost::Lethal)
      sq[i] = 0.0;
  }

  const int longest = std::max(w, h);
  std::vector<double> f(longest), out(longest), z(longest + 1);
  std::vector<int> v(longest);

  // Columns
  f.resize(h);
  out.resize(h);
  for (int x = 0; x < w; ++x)
  {
    for (int y = 0; y < h; ++y)
      f[y] = sq[y * stride + x];

    squared_edt_1d(f, v, z, out);
    for (int y = 0; y < h; ++y)
      sq[y * stride + x] = out[y];
  }

  // Rows
  f.resize(w);
  out.resize(w);
  for (int y = 0; y < h; ++y)
  {
    for (int x = 0; x < w; ++x)
      f[x] = sq[y * stride + x];

    squared_edt_1d(f, v, z, out);
    for (int x = 0; x < w; ++x)
      sq[y * stride + x] = out[x];
  }

  DistanceGrid grid{w, h, std::move(sq)};
  for (double& d : grid.meters)
  {
    if (d != Unreached)
      d = std::sqrt(d) * map.resolution();
  }

  return grid;
}

//==============================================================================
std::uint8_t inflation_cost(double d, const InflationParams& params)
{
  if (d == 0.0)
    return cost::Lethal;

  if (d <= params.inscribed_radius + RadiusTolerance)
    return cost::Inscribed;

  if (d <= params.inflation_radius + RadiusTolerance)
  {
    const double decayed = cost::MaxNonLethal
      * std::exp(-params.cost_scaling_factor * (d - params.inscribed_radius));
    return static_cast<std::uint8_t>(std::floor(decayed));
  }

  return cost::Free;
}

//==============================================================================
Costmap inflate(const Costmap& map, const InflationParams& params)
{
  params.validate();
  const DistanceGrid dist = distance_transform(map);

  Costmap out = map;
  for (std::size_t i = 0; i < map.size(); ++i)
  {
    const double d = dist.meters[i];
    if (d > params.inflation_radius + RadiusTolerance)
      continue;

    out.set_cost(i, std::max(map.cost(i), inflation_cost(d, params)));
  }

  return out;
}

//==============================================================================
Costmap fuse(std::span<const Costmap> maps)
{
  if (maps.empty())
    throw std::invalid_argument("fuse requires at least one costmap");

  Costmap out = maps.front();
  for (const auto& m : maps.subspan(1))
  {
    if (!out.same_grid(m))
    {
      throw IncompatibleGridError(
        "cannot fuse costmaps with different dimensions, resolution or origin");
    }

    for (std::size_t i = 0; i < out.size(); ++i)
      out.set_cost(i, std::max(out.cost(i), m.cost(i)));
  }

  return out;
}

//==============================================================================
Costmap fuse(const Costmap& a, const Costmap& b)
{
  const Costmap both[] = {a, b};
  return fuse(both);
}

//==============================================================================
std::vector<Cell> lethal_cells(const Costmap& map)
{
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < map.size(); ++i)
  {
    if (map.cost(i) == cost::Lethal)
      cells.push_back(map.cell(i));
  }

  return cells;
}

} // namespace cpsim
