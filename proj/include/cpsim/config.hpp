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

#ifndef CPSIM__CONFIG_HPP
#define CPSIM__CONFIG_HPP

#include <cpsim/executive.hpp>
#include <cpsim/orchestrator.hpp>
#include <cpsim/world.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cpsim {

//==============================================================================
class ConfigError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

//==============================================================================
struct CleaningConfig
{
  std::vector<cleaning::CleaningRegion> regions;
  std::vector<cleaning::RobotAgent> robots;
  cleaning::OrchestratorParams params;
};

/// Everything one experiment needs. Loaded from an INI-style file with the
/// sections [world] [robot] [sensing] [inflation] [planner] [timing]
/// [experiment] and, optionally, [cleaning].
struct ExperimentConfig
{
  /// Absolute, or relative to the config file's directory.
  std::string map_path;
  WorldConfig world;

  double robot_speed = 1.0;
  SensorConfig sensor;
  ExecutiveParams executive;

  std::size_t trials = 50;
  std::size_t obstacles_per_trial = 2;
  std::uint64_t seed = 1;
  bool run_sp = true;
  bool run_cp = true;
  std::string out_dir = "out";

  /// Side length range (cells) of randomly placed rectangular obstacles.
  int obstacle_min_cells = 8;
  int obstacle_max_cells = 20;

  /// Scripted trials: a fixed mission and fixed obstacles replace sampling.
  std::optional<Mission> mission;
  std::vector<CellRect> fixed_obstacles;

  std::optional<CleaningConfig> cleaning;

  /// Throws ConfigError if any value is out of range.
  void validate() const;
};

/// Parses config text. Unknown sections or keys, malformed values and
/// missing required keys raise ConfigError naming the line.
ExperimentConfig parse_config(std::string_view text, const std::string& base_dir = ".");

/// Reads and parses a config file; relative map paths resolve against the
/// file's directory.
ExperimentConfig load_config(const std::string& path);

} // namespace cpsim

#endif // CPSIM__CONFIG_HPP
