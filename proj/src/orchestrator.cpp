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

#include <cpsim/orchestrator.hpp>

#include <algorithm>
#include <charconv>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

namespace cpsim {
namespace cleaning {

//==============================================================================
std::string_view to_string(DetectionClass c)
{
  switch (c)
  {
    case DetectionClass::Human: return "human";
    case DetectionClass::Pet: return "pet";
    case DetectionClass::Trash: return "trash";
    case DetectionClass::DirtyFloor: return "dirty_floor";
    case DetectionClass::Clear: return "clear";
  }

  return "unknown";
}

std::string_view to_string(RegionKind k)
{
  return k == RegionKind::FlatFloor ? "flat_floor" : "staircase";
}

std::string_view to_string(RobotKind k)
{
  switch (k)
  {
    case RobotKind::RVC: return "RVC";
    case RobotKind::SCR: return "SCR";
    case RobotKind::TPR: return "TPR";
  }

  return "unknown";
}

std::string_view to_string(AgentState s)
{
  switch (s)
  {
    case AgentState::Idle: return "idle";
    case AgentState::Dispatched: return "dispatched";
    case AgentState::Cleaning: return "cleaning";
    case AgentState::Halted: return "halted";
  }

  return "unknown";
}

std::string_view to_string(Action a)
{
  switch (a)
  {
    case Action::Halt: return "halt";
    case Action::Resume: return "resume";
    case Action::Dispatch: return "dispatch";
    case Action::Recall: return "recall";
  }

  return "unknown";
}

//==============================================================================
DetectionClass parse_detection_class(std::string_view s)
{
  for (const auto c : {DetectionClass::Human, DetectionClass::Pet,
      DetectionClass::Trash, DetectionClass::DirtyFloor, DetectionClass::Clear})
  {
    if (s == to_string(c))
      return c;
  }

  throw std::invalid_argument("unknown detection class '" + std::string(s) + "'");
}

RegionKind parse_region_kind(std::string_view s)
{
  if (s == "flat_floor")
    return RegionKind::FlatFloor;

  if (s == "staircase")
    return RegionKind::Staircase;

  throw std::invalid_argument("unknown region kind '" + std::string(s) + "'");
}

RobotKind parse_robot_kind(std::string_view s)
{
  for (const auto k : {RobotKind::RVC, RobotKind::SCR, RobotKind::TPR})
  {
    if (s == to_string(k))
      return k;
  }

  throw std::invalid_argument("unknown robot kind '" + std::string(s) + "'");
}

HaltScope parse_halt_scope(std::string_view s)
{
  if (s == "region")
    return HaltScope::Region;

  if (s == "global")
    return HaltScope::Global;

  throw std::invalid_argument("unknown halt scope '" + std::string(s) + "'");
}

//==============================================================================
bool capable(RobotKind kind, RegionKind region)
{
  switch (kind)
  {
    case RobotKind::RVC: return region == RegionKind::FlatFloor;
    case RobotKind::SCR: return region == RegionKind::Staircase;
    case RobotKind::TPR: return true;
  }

  return false;
}

//==============================================================================
FleetState FleetState::make(
  std::vector<CleaningRegion> regions,
  std::vector<RobotAgent> robots,
  OrchestratorParams params)
{
  if (!(params.dwell > 0.0) || !(params.travel_time >= 0.0))
    throw std::invalid_argument("dwell must be > 0 and travel_time >= 0");

  std::sort(regions.begin(), regions.end(),
    [](const auto& a, const auto& b) { return a.region_id < b.region_id; });
  std::sort(robots.begin(), robots.end(),
    [](const auto& a, const auto& b) { return a.robot_id < b.robot_id; });

  for (std::size_t i = 0; i < regions.size(); ++i)
  {
    if (regions[i].cleanable_cells.empty())
    {
      throw std::invalid_argument(
        "region " + std::to_string(regions[i].region_id) + " has no cleanable cells");
    }

    if (i > 0 && regions[i].region_id == regions[i - 1].region_id)
    {
      throw std::invalid_argument(
        "duplicate region id " + std::to_string(regions[i].region_id));
    }
  }

  for (std::size_t i = 1; i < robots.size(); ++i)
  {
    if (robots[i].robot_id == robots[i - 1].robot_id)
    {
      throw std::invalid_argument(
        "duplicate robot id " + std::to_string(robots[i].robot_id));
    }
  }

  FleetState s;
  s.params = params;
  s.status.resize(regions.size());
  s.regions = std::move(regions);
  s.robots = std::move(robots);
  for (auto& r : s.robots)
  {
    r.state = AgentState::Idle;
    r.region = -1;
    r.progress = 0.0;
  }

  return s;
}

//==============================================================================
std::optional<std::size_t> FleetState::region_index(int region_id) const
{
  for (std::size_t i = 0; i < regions.size(); ++i)
  {
    if (regions[i].region_id == region_id)
      return i;
  }

  return std::nullopt;
}

namespace {

constexpr double Never = std::numeric_limits<double>::infinity();

//==============================================================================
class Engine
{
public:
  explicit Engine(Decision& d)
  : _s(d.state),
    _commands(d.commands),
    _trace(d.trace)
  {
    // Do nothing
  }

  void handle(const DetectionEvent& e)
  {
    _trace.push_back({TraceEntry::Kind::Event, e, false, {}});
    const auto reject = [&](std::string reason)
      {
        _trace.back().rejected = true;
        _s.rejected.push_back({e, std::move(reason)});
      };

    const auto ri = _s.region_index(e.region_id);
    if (!ri)
    {
      reject("unknown region " + std::to_string(e.region_id));
      return;
    }

    auto& st = _s.status[*ri];
    switch (e.cls)
    {
      case DetectionClass::Human:
        st.human = true;
        break;
      case DetectionClass::Pet:
        st.pet = true;
        break;
      case DetectionClass::Trash:
        st.trash = true;
        break;
      case DetectionClass::DirtyFloor:
        st.dirty = true;
        st.cleaned = false;
        break;
      case DetectionClass::Clear:
      {
        const auto target = e.clears
          ? std::optional<DetectionClass>(*e.clears)
          : (st.active.empty()
            ? std::nullopt
            : std::optional<DetectionClass>(st.active.back()));

        if (!target || !is_active(st, *target))
        {
          reject("nothing to clear in region " + std::to_string(e.region_id));
          return;
        }

        clear(*ri, *target);
        reconcile();
        return;
      }
    }

    std::erase(st.active, e.cls);
    st.active.push_back(e.cls);
    reconcile();
  }

  /// Applies the single earliest due transition if it is due by `until`.
  bool step_towards(double until)
  {
    std::optional<std::size_t> next;
    double when = Never;
    for (std::size_t i = 0; i < _s.robots.size(); ++i)
    {
      const double t = due(_s.robots[i]);
      if (t < when)
      {
        when = t;
        next = i;
      }
    }

    if (!next || when > until)
    {
      accrue(until - _s.time);
      _s.time = until;
      return false;
    }

    accrue(when - _s.time);
    _s.time = when;

    auto& r = _s.robots[*next];
    if (r.state == AgentState::Dispatched)
    {
      r.state = AgentState::Cleaning;
      r.progress = 0.0;
    }
    else
    {
      const auto ri = *_s.region_index(r.region);
      auto& st = _s.status[ri];
      st.dirty = false;
      st.cleaned = true;
      st.cleaned_at = _s.time;
      std::erase(st.active, DetectionClass::DirtyFloor);
      release(r);
    }

    reconcile();
    return true;
  }

private:
  static bool is_active(const RegionStatus& st, DetectionClass c)
  {
    switch (c)
    {
      case DetectionClass::Human: return st.human;
      case DetectionClass::Pet: return st.pet;
      case DetectionClass::Trash: return st.trash;
      case DetectionClass::DirtyFloor: return st.dirty;
      case DetectionClass::Clear: return false;
    }

    return false;
  }

  void clear(std::size_t ri, DetectionClass target)
  {
    auto& st = _s.status[ri];
    std::erase(st.active, target);
    const int region = _s.regions[ri].region_id;
    switch (target)
    {
      case DetectionClass::Human:
        st.human = false;
        break;
      case DetectionClass::Pet:
        st.pet = false;
        break;
      case DetectionClass::Trash:
        // The floor still needs a pass once the trash is gone.
        st.trash = false;
        st.dirty = true;
        st.cleaned = false;
        for (auto& r : _s.robots)
        {
          if (r.kind == RobotKind::TPR && r.region == region)
            release(r);
        }
        break;
      case DetectionClass::DirtyFloor:
        st.dirty = false;
        for (auto& r : _s.robots)
        {
          if (r.kind != RobotKind::TPR && r.region == region)
            release(r);
        }
        break;
      case DetectionClass::Clear:
        break;
    }
  }

  double threshold(const RobotAgent& r) const
  {
    if (r.state == AgentState::Dispatched)
      return _s.params.travel_time;

    if (r.state == AgentState::Cleaning && r.kind != RobotKind::TPR)
      return _s.params.dwell;

    return Never;
  }

  double due(const RobotAgent& r) const
  {
    const double limit = threshold(r);
    if (limit == Never)
      return Never;

    return _s.time + std::max(0.0, limit - r.progress);
  }

  void accrue(double dt)
  {
    if (dt <= 0.0)
      return;

    for (auto& r : _s.robots)
    {
      if (r.state == AgentState::Dispatched || r.state == AgentState::Cleaning)
        r.progress += dt;
    }
  }

  bool occupied(std::size_t ri) const
  {
    const auto busy = [](const RegionStatus& st) { return st.human || st.pet; };
    if (_s.params.halt_scope == HaltScope::Global)
      return std::any_of(_s.status.begin(), _s.status.end(), busy);

    return busy(_s.status[ri]);
  }

  void emit(const RobotAgent& r, Action action, int region)
  {
    const Command c{_s.time, r.robot_id, action, region};
    _commands.push_back(c);
    _trace.push_back({TraceEntry::Kind::Command, {}, false, c});
  }

  void release(RobotAgent& r)
  {
    const int region = r.region;
    r.state = AgentState::Idle;
    r.resume_state = AgentState::Idle;
    r.region = -1;
    r.progress = 0.0;
    emit(r, Action::Recall, region);
  }

  bool has_assigned(int region, bool trash_picker) const
  {
    return std::any_of(_s.robots.begin(), _s.robots.end(),
        [&](const RobotAgent& r)
        {
          return r.region == region && r.state != AgentState::Idle
          && (r.kind == RobotKind::TPR) == trash_picker;
        });
  }

  RobotAgent* idle_robot(bool trash_picker, RegionKind kind)
  {
    for (auto& r : _s.robots)
    {
      if (r.state != AgentState::Idle)
        continue;

      if (trash_picker && r.kind == RobotKind::TPR)
        return &r;

      if (!trash_picker && r.kind != RobotKind::TPR && capable(r.kind, kind))
        return &r;
    }

    return nullptr;
  }

  void dispatch(RobotAgent& r, int region)
  {
    r.region = region;
    r.progress = 0.0;
    r.state = _s.params.travel_time > 0.0
      ? AgentState::Dispatched : AgentState::Cleaning;
    emit(r, Action::Dispatch, region);
  }

  void reconcile()
  {
    for (auto& r : _s.robots)
    {
      if ((r.state == AgentState::Dispatched || r.state == AgentState::Cleaning)
        && occupied(*_s.region_index(r.region)))
      {
        r.resume_state = r.state;
        r.state = AgentState::Halted;
        emit(r, Action::Halt, r.region);
      }
    }

    for (auto& r : _s.robots)
    {
      if (r.state == AgentState::Halted && !occupied(*_s.region_index(r.region)))
      {
        r.state = r.resume_state;
        emit(r, Action::Resume, r.region);
      }
    }

    for (std::size_t ri = 0; ri < _s.regions.size(); ++ri)
    {
      if (occupied(ri))
        continue;

      const auto& region = _s.regions[ri];
      const auto& st = _s.status[ri];
      if (st.trash)
      {
        if (!has_assigned(region.region_id, true))
        {
          if (auto* r = idle_robot(true, region.kind))
            dispatch(*r, region.region_id);
        }
      }
      else if (st.dirty && !has_assigned(region.region_id, false))
      {
        if (auto* r = idle_robot(false, region.kind))
          dispatch(*r, region.region_id);
      }
    }
  }

  FleetState& _s;
  std::vector<Command>& _commands;
  std::vector<TraceEntry>& _trace;
};

//==============================================================================
void sort_commands(std::vector<Command>& commands)
{
  std::stable_sort(commands.begin(), commands.end(),
    [](const Command& a, const Command& b)
    {
      if (a.time != b.time)
        return a.time < b.time;

      return a.robot_id < b.robot_id;
    });
}

} // anonymous namespace

//==============================================================================
Decision decide(const FleetState& state, std::span<const DetectionEvent> events)
{
  Decision d{state, {}, {}};
  Engine engine(d);
  for (const auto& e : events)
  {
    if (e.time < d.state.time)
      throw std::invalid_argument("events must not precede the fleet clock");

    d.state.time = e.time;
    engine.handle(e);
  }

  sort_commands(d.commands);
  return d;
}

//==============================================================================
Decision advance_to(const FleetState& state, double time)
{
  Decision d{state, {}, {}};
  if (time < state.time)
    throw std::invalid_argument("cannot move the fleet clock backwards");

  Engine engine(d);
  while (engine.step_towards(time))
  {
    // Keep applying due transitions
  }

  sort_commands(d.commands);
  return d;
}

//==============================================================================
std::optional<double> next_transition(const FleetState& state)
{
  double best = Never;
  for (const auto& r : state.robots)
  {
    double limit = Never;
    if (r.state == AgentState::Dispatched)
      limit = state.params.travel_time;
    else if (r.state == AgentState::Cleaning && r.kind != RobotKind::TPR)
      limit = state.params.dwell;

    if (limit != Never)
      best = std::min(best, state.time + std::max(0.0, limit - r.progress));
  }

  if (best == Never)
    return std::nullopt;

  return best;
}

//==============================================================================
double ScenarioResult::total_coverage() const
{
  std::size_t cleaned = 0;
  std::size_t total = 0;
  for (const auto& c : coverage)
  {
    cleaned += c.cleaned_cells;
    total += c.cleanable_cells;
  }

  return total == 0 ? 0.0 : static_cast<double>(cleaned) / static_cast<double>(total);
}

//==============================================================================
std::optional<double> ScenarioResult::makespan() const
{
  std::optional<double> last;
  for (const auto& c : coverage)
  {
    if (c.cleaned_at && (!last || *c.cleaned_at > *last))
      last = c.cleaned_at;
  }

  return last;
}

//==============================================================================
ScenarioResult run_scenario(
  std::vector<DetectionEvent> script,
  std::vector<RobotAgent> fleet,
  std::vector<CleaningRegion> regions,
  const OrchestratorParams& params)
{
  std::stable_sort(script.begin(), script.end(),
    [](const auto& a, const auto& b) { return a.time < b.time; });

  ScenarioResult result;
  FleetState state =
    FleetState::make(std::move(regions), std::move(fleet), params);
  if (!script.empty())
    state.time = std::min(state.time, script.front().time);

  const auto absorb = [&](Decision&& d)
    {
      result.commands.insert(
        result.commands.end(), d.commands.begin(), d.commands.end());
      result.trace.insert(result.trace.end(), d.trace.begin(), d.trace.end());
      state = std::move(d.state);
    };

  std::size_t i = 0;
  while (true)
  {
    const double next_event = i < script.size() ? script[i].time : Never;
    const auto next = next_transition(state);
    if (next && *next <= next_event)
    {
      absorb(advance_to(state, *next));
    }
    else if (i < script.size())
    {
      absorb(advance_to(state, next_event));
      absorb(decide(state, std::span(&script[i], 1)));
      ++i;
    }
    else
    {
      break;
    }
  }

  for (std::size_t ri = 0; ri < state.regions.size(); ++ri)
  {
    const auto& region = state.regions[ri];
    const auto& st = state.status[ri];
    RegionCoverage c;
    c.region_id = region.region_id;
    c.kind = region.kind;
    c.cleanable_cells = region.cleanable_cells.size();
    c.cleaned_cells = st.cleaned ? c.cleanable_cells : 0;
    if (st.cleaned)
      c.cleaned_at = st.cleaned_at;

    result.coverage.push_back(c);
  }

  result.rejected = state.rejected;
  result.final_state = std::move(state);
  return result;
}

//==============================================================================
std::vector<DetectionEvent> parse_script(std::string_view text)
{
  std::vector<DetectionEvent> events;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line))
  {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);

    std::istringstream fields(line);
    std::string time, cls, region, target, extra;
    if (!(fields >> time))
      continue;

    const auto fail = [&](const std::string& why)
      {
        return std::runtime_error(
          "script line " + std::to_string(number) + ": " + why);
      };

    if (!(fields >> cls >> region))
      throw fail("expected 'time class region_id [target]'");

    DetectionEvent e;
    try
    {
      std::size_t used = 0;
      e.time = std::stod(time, &used);
      if (used != time.size())
        throw std::invalid_argument(time);

      e.region_id = std::stoi(region, &used);
      if (used != region.size())
        throw std::invalid_argument(region);

      e.cls = parse_detection_class(cls);
      if (fields >> target)
      {
        if (e.cls != DetectionClass::Clear)
          throw std::invalid_argument("only clear events take a target");

        e.clears = parse_detection_class(target);
        if (*e.clears == DetectionClass::Clear)
          throw std::invalid_argument("clear cannot target clear");
      }
    }
    catch (const std::exception& ex)
    {
      throw fail(ex.what());
    }

    if (fields >> extra)
      throw fail("unexpected trailing field '" + extra + "'");

    events.push_back(std::move(e));
  }

  return events;
}

namespace {

std::string format_number(double v)
{
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

} // anonymous namespace

//==============================================================================
std::string commands_csv(std::span<const Command> commands)
{
  std::string out = "time,robot_id,action,region\n";
  for (const auto& c : commands)
  {
    out += format_number(c.time) + "," + std::to_string(c.robot_id) + ","
      + std::string(to_string(c.action)) + "," + std::to_string(c.region) + "\n";
  }

  return out;
}

//==============================================================================
std::string coverage_csv(const ScenarioResult& result)
{
  std::string out =
    "region_id,kind,cleanable_cells,cleaned_cells,coverage,cleaned_at\n";
  for (const auto& c : result.coverage)
  {
    out += std::to_string(c.region_id) + "," + std::string(to_string(c.kind))
      + "," + std::to_string(c.cleanable_cells) + ","
      + std::to_string(c.cleaned_cells) + "," + format_number(c.coverage()) + ","
      + (c.cleaned_at ? format_number(*c.cleaned_at) : std::string()) + "\n";
  }

  return out;
}

} // namespace cleaning
} // namespace cpsim
