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

#include "model_check.hpp"

#include <cpsim/orchestrator.hpp>

#include <doctest.h>

using namespace cpsim;
using namespace cpsim::cleaning;

namespace {

ScenarioResult play(const std::string& script, OrchestratorParams params = {})
{
  return run_scenario(
    parse_script(script), model_check::fleet(), model_check::regions(), params);
}

} // anonymous namespace

//==============================================================================
TEST_CASE("capability table")
{
  CHECK(capable(RobotKind::RVC, RegionKind::FlatFloor));
  CHECK_FALSE(capable(RobotKind::RVC, RegionKind::Staircase));
  CHECK(capable(RobotKind::SCR, RegionKind::Staircase));
  CHECK_FALSE(capable(RobotKind::SCR, RegionKind::FlatFloor));
  CHECK(capable(RobotKind::TPR, RegionKind::FlatFloor));
  CHECK(capable(RobotKind::TPR, RegionKind::Staircase));
}

//==============================================================================
TEST_CASE("names round-trip")
{
  for (const auto c : {DetectionClass::Human, DetectionClass::Pet, DetectionClass::Trash,
      DetectionClass::DirtyFloor, DetectionClass::Clear})
    CHECK(parse_detection_class(to_string(c)) == c);

  CHECK(parse_robot_kind("SCR") == RobotKind::SCR);
  CHECK(parse_region_kind("staircase") == RegionKind::Staircase);
  CHECK(parse_halt_scope("region") == HaltScope::Region);
  CHECK_THROWS(parse_detection_class("cat"));
}

//==============================================================================
TEST_CASE("script parsing")
{
  const auto events = parse_script(
    "# t class region\n"
    "0 dirty_floor 1\n"
    "\n"
    "2.5 clear 1 dirty_floor  # done\n");
  REQUIRE(events.size() == 2);
  CHECK(events[1].time == 2.5);
  CHECK(events[1].cls == DetectionClass::Clear);
  CHECK(events[1].clears == DetectionClass::DirtyFloor);

  CHECK_THROWS(parse_script("0 human\n"));
  CHECK_THROWS(parse_script("x human 1\n"));
  CHECK_THROWS(parse_script("0 human 1 pet\n"));
  CHECK_THROWS(parse_script("0 clear 1 clear\n"));
  CHECK_THROWS(parse_script("0 clear 1 human extra\n"));
}

//==============================================================================
TEST_CASE("empty script")
{
  const auto r = play("");
  CHECK(r.commands.empty());
  CHECK(r.total_coverage() == 0.0);
  CHECK_FALSE(r.makespan());
}

//==============================================================================
TEST_CASE("single dirty floor is cleaned after the dwell time")
{
  const auto r = play("0 dirty_floor 1\n");
  CHECK(commands_csv(r.commands) ==
    "time,robot_id,action,region\n"
    "0,1,dispatch,1\n"
    "60,1,recall,1\n");
  CHECK(r.coverage[0].coverage() == 1.0);
  CHECK(r.coverage[1].coverage() == 0.0);
  CHECK(r.makespan() == 60.0);
}

//==============================================================================
TEST_CASE("golden: a person halts the vacuum, which resumes afterwards")
{
  const auto r = play(
    "0 dirty_floor 1\n"
    "10 human 1\n"
    "20 clear 1 human\n");
  CHECK(commands_csv(r.commands) ==
    "time,robot_id,action,region\n"
    "0,1,dispatch,1\n"
    "10,1,halt,1\n"
    "20,1,resume,1\n"
    "70,1,recall,1\n");
  CHECK(r.coverage[0].cleaned_at == 70.0);
}

//==============================================================================
TEST_CASE("golden: trash and dirt dispatch the trash picker first")
{
  const auto r = play(
    "0 trash 1\n"
    "0 dirty_floor 1\n"
    "30 clear 1 trash\n");
  CHECK(commands_csv(r.commands) ==
    "time,robot_id,action,region\n"
    "0,3,dispatch,1\n"
    "30,1,dispatch,1\n"
    "30,3,recall,1\n"
    "90,1,recall,1\n");
}

//==============================================================================
TEST_CASE("golden: trash cleared on the stairs calls the stair cleaner")
{
  const auto r = play(
    "0 trash 2\n"
    "5 clear 2 trash\n");
  CHECK(commands_csv(r.commands) ==
    "time,robot_id,action,region\n"
    "0,3,dispatch,2\n"
    "5,2,dispatch,2\n"
    "5,3,recall,2\n"
    "65,2,recall,2\n");
}

//==============================================================================
TEST_CASE("a person arriving first defers any dispatch")
{
  const auto r = play(
    "0 human 1\n"
    "1 dirty_floor 1\n"
    "5 clear 1 human\n");
  CHECK(commands_csv(r.commands) ==
    "time,robot_id,action,region\n"
    "5,1,dispatch,1\n"
    "65,1,recall,1\n");
}

//==============================================================================
TEST_CASE("global halt scope stops every region")
{
  OrchestratorParams params;
  params.halt_scope = HaltScope::Global;
  const auto r = play(
    "0 dirty_floor 1\n"
    "0 dirty_floor 2\n"
    "10 pet 2\n"
    "15 clear 2 pet\n", params);
  CHECK(commands_csv(r.commands) ==
    "time,robot_id,action,region\n"
    "0,1,dispatch,1\n"
    "0,2,dispatch,2\n"
    "10,1,halt,1\n"
    "10,2,halt,2\n"
    "15,1,resume,1\n"
    "15,2,resume,2\n"
    "65,1,recall,1\n"
    "65,2,recall,2\n");
}

//==============================================================================
TEST_CASE("travel time and rejected events")
{
  OrchestratorParams params;
  params.travel_time = 5.0;
  const auto r = play(
    "0 dirty_floor 9\n"
    "0 clear 1\n"
    "1 dirty_floor 2\n", params);
  CHECK(r.rejected.size() == 2);
  CHECK(commands_csv(r.commands) ==
    "time,robot_id,action,region\n"
    "1,2,dispatch,2\n"
    "66,2,recall,2\n");
}

//==============================================================================
TEST_CASE("fleet validation")
{
  auto regions = model_check::regions();
  regions.push_back(regions.front());
  CHECK_THROWS(FleetState::make(regions, model_check::fleet()));
  auto fleet = model_check::fleet();
  fleet.push_back(fleet.front());
  CHECK_THROWS(FleetState::make(model_check::regions(), fleet));
  OrchestratorParams params;
  params.dwell = 0.0;
  CHECK_THROWS(FleetState::make(model_check::regions(), model_check::fleet(), params));
}

//==============================================================================
TEST_CASE("model check on sequences of up to three events")
{
  OrchestratorParams params;
  params.dwell = 25.0;
  params.travel_time = 5.0;
  const auto stats = model_check::run(3, params);
  CHECK(stats.sequences == 1111);
  CHECK(stats.violations.empty());
}

//==============================================================================
TEST_CASE("the monitor catches a broken log")
{
  // Hand-built trace with a vacuum dispatched to the stairs.
  ScenarioResult bad;
  TraceEntry e;
  e.kind = TraceEntry::Kind::Command;
  e.command = {0.0, 1, Action::Dispatch, 2};
  bad.trace.push_back(e);
  CHECK(model_check::monitor(bad));

  // And a vacuum left working while a person is present.
  ScenarioResult unsafe;
  e.command = {0.0, 1, Action::Dispatch, 1};
  unsafe.trace.push_back(e);
  TraceEntry h;
  h.kind = TraceEntry::Kind::Event;
  h.event.region_id = 1;
  h.event.cls = DetectionClass::Human;
  unsafe.trace.push_back(h);
  CHECK(model_check::monitor(unsafe));
}

//==============================================================================
TEST_CASE("same script, same log")
{
  const std::string script = "0 trash 1\n3 dirty_floor 2\n4 human 2\n9 clear 2\n12 clear 1\n";
  CHECK(commands_csv(play(script).commands) == commands_csv(play(script).commands));
}
