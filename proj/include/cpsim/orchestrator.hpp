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

#ifndef CPSIM__ORCHESTRATOR_HPP
#define CPSIM__ORCHESTRATOR_HPP

#include <cpsim/costmap.hpp>

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cpsim {
namespace cleaning {

//==============================================================================
enum class DetectionClass
{
  Human,
  Pet,
  Trash,
  DirtyFloor,
  Clear
};

enum class RegionKind
{
  FlatFloor,
  Staircase
};

enum class RobotKind
{
  /// Robotic vacuum cleaner, flat floors only.
  RVC,
  /// Staircase cleaning robot, staircases only.
  SCR,
  /// Trash picking robot, any region.
  TPR
};

enum class AgentState
{
  Idle,
  Dispatched,
  Cleaning,
  Halted
};

enum class Action
{
  Halt,
  Resume,
  Dispatch,
  Recall
};

enum class HaltScope
{
  Region,
  Global
};

std::string_view to_string(DetectionClass c);
std::string_view to_string(RegionKind k);
std::string_view to_string(RobotKind k);
std::string_view to_string(AgentState s);
std::string_view to_string(Action a);

/// Each parser throws std::invalid_argument on an unknown name.
DetectionClass parse_detection_class(std::string_view s);
RegionKind parse_region_kind(std::string_view s);
RobotKind parse_robot_kind(std::string_view s);
HaltScope parse_halt_scope(std::string_view s);

//==============================================================================
struct DetectionEvent
{
  double time = 0.0;
  int camera_id = 0;
  int region_id = 0;
  DetectionClass cls = DetectionClass::DirtyFloor;

  /// For Clear events: the class that is no longer seen. When unset, the
  /// most recent detection still active in the region is cleared.
  std::optional<DetectionClass> clears;

  std::vector<Cell> cells;
};

struct CleaningRegion
{
  int region_id = 0;
  RegionKind kind = RegionKind::FlatFloor;
  std::vector<Cell> cleanable_cells;
};

struct RobotAgent
{
  int robot_id = 0;
  RobotKind kind = RobotKind::RVC;
  AgentState state = AgentState::Idle;

  /// Region the robot is assigned to, or -1 when idle.
  int region = -1;

  /// State to return to when a halt is lifted.
  AgentState resume_state = AgentState::Idle;

  /// Seconds spent travelling (while Dispatched) or cleaning (while
  /// Cleaning) on the current assignment.
  double progress = 0.0;
};

struct Command
{
  double time = 0.0;
  int robot_id = 0;
  Action action = Action::Halt;

  /// Target region for Dispatch, the affected region otherwise.
  int region = -1;

  friend bool operator==(const Command&, const Command&) = default;
};

struct OrchestratorParams
{
  /// Seconds of uninterrupted cleaning after which a region counts as clean.
  double dwell = 60.0;

  /// Seconds between a dispatch and the robot starting to clean.
  double travel_time = 0.0;

  HaltScope halt_scope = HaltScope::Region;
};

/// Whether the capability rules allow `kind` to work in `region`.
bool capable(RobotKind kind, RegionKind region);

//==============================================================================
struct RegionStatus
{
  bool human = false;
  bool pet = false;
  bool trash = false;
  bool dirty = false;
  bool cleaned = false;
  double cleaned_at = 0.0;

  /// Active detections in the order they arrived, used to resolve Clear
  /// events that do not name a class.
  std::vector<DetectionClass> active;
};

struct RejectedEvent
{
  DetectionEvent event;
  std::string reason;
};

/// Entry of the processing trace: either an event as it was handled, or a
/// command as it was issued.
struct TraceEntry
{
  enum class Kind
  {
    Event,
    Command
  };

  Kind kind = Kind::Event;
  DetectionEvent event;
  bool rejected = false;
  Command command;
};

struct FleetState
{
  double time = 0.0;
  OrchestratorParams params;
  std::vector<CleaningRegion> regions;
  std::vector<RegionStatus> status;
  std::vector<RobotAgent> robots;
  std::vector<RejectedEvent> rejected;

  /// Throws std::invalid_argument if region ids repeat, a region is empty,
  /// or robot ids repeat. Regions and robots are kept sorted by id.
  static FleetState make(
    std::vector<CleaningRegion> regions,
    std::vector<RobotAgent> robots,
    OrchestratorParams params = {});

  /// Index into regions/status, or nullopt.
  std::optional<std::size_t> region_index(int region_id) const;
};

struct Decision
{
  FleetState state;
  std::vector<Command> commands;
  std::vector<TraceEntry> trace;
};

/// Applies the events (sorted by time, none earlier than state.time) in
/// order. After each event the rules are re-evaluated: robots working in a
/// region with a person or pet are halted, halted robots are resumed once it
/// is clear, a trash detection gets the lowest-id idle TPR and holds back
/// floor cleaners, and a region that needs cleaning with no trash pending
/// gets the lowest-id idle capable cleaner. Events naming unknown regions,
/// or clears with nothing to clear, are recorded as rejected.
Decision decide(const FleetState& state, std::span<const DetectionEvent> events);

/// Advances the clock to `time`, accruing travel and cleaning progress, and
/// applies every arrival and dwell completion that falls due on the way.
Decision advance_to(const FleetState& state, double time);

/// Time at which the next arrival or dwell completion is due, if any.
std::optional<double> next_transition(const FleetState& state);

//==============================================================================
struct RegionCoverage
{
  int region_id = 0;
  RegionKind kind = RegionKind::FlatFloor;
  std::size_t cleanable_cells = 0;
  std::size_t cleaned_cells = 0;
  std::optional<double> cleaned_at;

  double coverage() const
  {
    return cleanable_cells == 0
      ? 0.0
      : static_cast<double>(cleaned_cells) / static_cast<double>(cleanable_cells);
  }
};

struct ScenarioResult
{
  std::vector<Command> commands;
  std::vector<TraceEntry> trace;
  std::vector<RejectedEvent> rejected;
  std::vector<RegionCoverage> coverage;
  FleetState final_state;

  /// Cleaned cells over cleanable cells across all regions.
  double total_coverage() const;

  /// Time the last region was cleaned, if any was.
  std::optional<double> makespan() const;
};

/// Replays a scripted event timeline through decide(), interleaving arrival
/// and dwell completions in time order (completions due at the same time as
/// an event are applied first). Runs until no further progress is possible.
ScenarioResult run_scenario(
  std::vector<DetectionEvent> script,
  std::vector<RobotAgent> fleet,
  std::vector<CleaningRegion> regions,
  const OrchestratorParams& params = {});

/// Parses `time class region_id [target]` records, one per line; '#' starts
/// a comment. Throws std::runtime_error naming the line on bad input.
std::vector<DetectionEvent> parse_script(std::string_view text);

/// Command log as CSV with header time,robot_id,action,region.
std::string commands_csv(std::span<const Command> commands);

/// Coverage table as CSV.
std::string coverage_csv(const ScenarioResult& result);

} // namespace cleaning
} // namespace cpsim

#endif // CPSIM__ORCHESTRATOR_HPP
