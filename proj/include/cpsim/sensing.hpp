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

#ifndef CPSIM__SENSING_HPP
#define CPSIM__SENSING_HPP

#include <cpsim/costmap.hpp>
#include <cpsim/world.hpp>

#include <memory>
#include <span>
#include <vector>

namespace cpsim {

//==============================================================================
struct PerceptionSource
{
  enum class Kind
  {
    Onboard,
    Overhead
  };

  Kind kind = Kind::Onboard;

  /// Robot id for onboard sources, aisle id for overhead sources.
  int id = 0;
};

struct PerceptionUpdate
{
  PerceptionSource source;
  std::vector<Cell> detected_cells;
  double time = 0.0;
};

//==============================================================================
/// Angles (radians) of every ray the sensor casts. A full circle gets
/// round(2pi / resolution) rays starting at the heading; a partial fov gets
/// rays from heading - fov/2 to heading + fov/2 inclusive.
std::vector<double> ray_angles(double heading, const SensorConfig& sensor);

/// Cells seen by a 2D lidar at `pose`. Each ray walks the grid cells its
/// segment passes through and stops at the first rack or obstacle cell
/// (included) or once it has travelled `range`. A cell only counts if its
/// centre lies within range. The sensor's own cell is always visible.
/// Result is sorted and unique.
std::vector<Cell> raycast_visible_cells(
  const WorldModel& world,
  const Point2& pose,
  double heading,
  const SensorConfig& sensor);

/// Obstacle cells visible to the robot's onboard lidar. Racks are excluded
/// since the static layer already holds them.
PerceptionUpdate onboard_scan(const WorldModel& world, const RobotState& robot);

/// Every obstacle cell inside the aisle. Overhead sensors have no occlusion.
/// Throws std::invalid_argument if the aisle has no overhead sensor.
PerceptionUpdate overhead_scan(const WorldModel& world, const AisleRegion& aisle);

//==============================================================================
/// Static layer, lethal marks from perception, and the inflated result that
/// planners consume.
struct LayeredCostmap
{
  Costmap static_layer;
  Costmap obstacle_layer;
  Costmap master;

  /// Empty obstacle layer; master is the inflated static layer.
  static LayeredCostmap from_static(
    Costmap static_layer, const InflationParams& params);

  /// Rebuilds master from scratch out of the two raw layers.
  void reinflate(const InflationParams& params);

  std::size_t known_obstacle_cells() const;
};

/// Standalone update: marks the robot's own detections and re-inflates.
LayeredCostmap apply_update_sp(
  const LayeredCostmap& robot_map,
  const PerceptionUpdate& update,
  const InflationParams& params);

/// Central-server update: fuses the lethal marks of every source into the
/// server map and re-inflates.
LayeredCostmap apply_update_cp(
  const LayeredCostmap& server_map,
  std::span<const PerceptionUpdate> updates,
  const InflationParams& params);

//==============================================================================
/// Aggregates overhead detections and publishes snapshots. A robot sees a
/// snapshot once share_latency seconds have passed since it was published.
class CentralServer
{
public:
  CentralServer(
    Costmap static_layer, InflationParams params, double share_latency = 0.0);

  /// Applies one tick worth of updates. A new snapshot is published (stamped
  /// `time`) only when the known obstacle set changed.
  void apply(std::span<const PerceptionUpdate> updates, double time);

  const LayeredCostmap& current() const { return *_history.back().map; }

  /// Newest snapshot whose publish time + latency <= now, or nullptr.
  std::shared_ptr<const LayeredCostmap> received(double now) const;

  /// Increases by one every time a snapshot is published.
  std::size_t version_at(double now) const;

private:
  struct Snapshot
  {
    double time;
    std::shared_ptr<const LayeredCostmap> map;
  };

  InflationParams _params;
  double _latency;
  std::vector<Snapshot> _history;
};

//==============================================================================
/// What one robot believes about the world. Standalone robots only take
/// their own detections; collaborative robots also adopt the obstacle layer
/// of the last server snapshot they received.
class RobotKnowledge
{
public:
  RobotKnowledge(
    PerceptionMode mode, Costmap static_layer, InflationParams params);

  PerceptionMode mode() const { return _mode; }

  /// Returns true if the robot learned anything new.
  bool apply_onboard(const PerceptionUpdate& update);

  /// Ignored in standalone mode. Returns true if the robot learned anything.
  bool apply_shared(const LayeredCostmap& snapshot);

  const Costmap& costmap() const { return _map.master; }
  const LayeredCostmap& layers() const { return _map; }

  bool knows_lethal(const Cell& c) const
  {
    return _map.obstacle_layer.cost(c) == cost::Lethal;
  }

private:
  void rebuild();

  PerceptionMode _mode;
  InflationParams _params;
  Costmap _onboard;
  Costmap _shared;
  LayeredCostmap _map;
};

} // namespace cpsim

#endif // CPSIM__SENSING_HPP
