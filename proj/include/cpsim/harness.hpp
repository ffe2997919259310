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

#ifndef CPSIM__HARNESS_HPP
#define CPSIM__HARNESS_HPP

#include <cpsim/config.hpp>
#include <cpsim/executive.hpp>
#include <cpsim/rng.hpp>
#include <cpsim/world.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace cpsim {

//==============================================================================
class MapTooConstrainedError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

//==============================================================================
struct TrialSpec
{
  std::size_t trial_id = 0;
  std::uint64_t seed = 0;
  Mission mission;
  std::vector<CellRect> obstacle_footprints;

  /// Length (m) of the minimum-cost path with every obstacle known.
  double oracle_distance = 0.0;
};

/// Map plus aisles from the config, with no obstacles or robots. Throws
/// ConfigError when the map cannot be read and ParseError when it is invalid.
WorldModel build_world(const ExperimentConfig& config);

/// Costmap the planner would see with perfect knowledge of `footprints`.
Costmap full_knowledge_costmap(
  const WorldModel& world,
  std::span<const CellRect> footprints,
  const InflationParams& inflation);

/// Samples start, goal and obstacles by rejection until the mission is
/// feasible with every obstacle known. Start and goal are uniform over cells
/// that are traversable on the inflated static map; obstacles are uniform
/// rectangles that avoid racks, each other, start and goal. Throws
/// MapTooConstrainedError after 1000 consecutive rejections.
TrialSpec generate_trial(
  Rng& rng,
  const WorldModel& world,
  const ExperimentConfig& config,
  std::size_t trial_id = 0,
  std::uint64_t seed = 0);

/// Trial `trial_id` of the experiment: uses the fixed mission when the
/// config has one, otherwise samples from the stream derived from the root
/// seed and the trial index.
TrialSpec make_trial(
  const WorldModel& world,
  const ExperimentConfig& config,
  std::size_t trial_id);

/// True when every obstacle cell lies in an aisle with an overhead sensor.
bool obstacles_covered(const WorldModel& world, std::span<const CellRect> footprints);

/// Copy of `world` with the trial's obstacles spawned at t = 0.
WorldModel trial_world(const WorldModel& world, const TrialSpec& spec);

//==============================================================================
struct TrialResult
{
  TrialSpec spec;
  bool covered = false;
  std::optional<MissionResult> sp;
  std::optional<MissionResult> cp;
};

/// Runs the selected modes of one trial on identical copies of the world.
TrialResult run_trial(
  const WorldModel& world,
  const ExperimentConfig& config,
  const TrialSpec& spec);

//==============================================================================
struct ModeMeans
{
  double distance = 0.0;
  double time = 0.0;
  double replans = 0.0;
};

struct ExperimentSummary
{
  std::vector<TrialResult> trials;

  std::optional<ModeMeans> sp;
  std::optional<ModeMeans> cp;

  /// Means of per-trial SP - CP differences. Only with both modes.
  std::optional<ModeMeans> delta;

  /// Spearman rank correlation of oracle distance against
  /// dist_sp - dist_cp. NaN when either series is constant.
  std::optional<double> distance_correlation;

  std::size_t collisions = 0;
  std::size_t truncated = 0;
  std::size_t unreached = 0;

  bool failed() const { return collisions > 0 || truncated > 0; }
};

/// Spearman rank correlation with average ranks for ties.
double spearman(std::span<const double> a, std::span<const double> b);

/// Aggregates per-trial results. Sums run in trial order.
ExperimentSummary summarize(std::vector<TrialResult> trials);

/// Generates and runs every trial. Trials are independent and run on up to
/// `parallel` threads; results are always ordered by trial index.
ExperimentSummary run_experiment(
  const ExperimentConfig& config,
  std::size_t parallel = 1);

} // namespace cpsim

#endif // CPSIM__HARNESS_HPP
