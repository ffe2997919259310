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

#include <doctest.h>

using namespace cpsim;

namespace {

const char* const Map =
  "......\n"
  ".##...\n"
  ".##...\n"
  "......\n";

} // anonymous namespace

//==============================================================================
TEST_CASE("load a small map")
{
  WorldConfig config;
  config.aisles = {{2, {3, 0, 5, 3}, true}, {1, {0, 3, 5, 3}, false}};
  const auto world = load_world(Map, config);

  CHECK(world.width() == 6);
  CHECK(world.height() == 4);
  CHECK(world.rack_count() == 4);
  CHECK(world.is_rack({1, 1}));
  CHECK_FALSE(world.is_rack({3, 1}));
  CHECK(world.is_blocking({-1, 0}));
  CHECK(world.is_blocking({6, 0}));
  REQUIRE(world.aisles().size() == 2);
  CHECK(world.aisles()[0].id == 1);

  const auto map = world.static_costmap();
  CHECK(map.cost(Cell{2, 2}) == cost::Lethal);
  CHECK(map.cost(Cell{0, 0}) == cost::Free);
}

//==============================================================================
TEST_CASE("final newline is optional")
{
  const auto a = load_world("..#\n...", {});
  const auto b = load_world("..#\n...\n", {});
  CHECK(a.static_costmap() == b.static_costmap());
}

//==============================================================================
TEST_CASE("parse errors carry a position")
{
  try
  {
    load_world("...\n.x.\n", {});
    FAIL("expected a parse error");
  }
  catch (const ParseError& e)
  {
    CHECK(e.line() == 2);
    CHECK(e.column() == 2);
  }

  try
  {
    load_world("...\n..\n", {});
    FAIL("expected a parse error");
  }
  catch (const ParseError& e)
  {
    CHECK(e.line() == 2);
  }

  CHECK_THROWS_AS(load_world("", {}), ParseError);

  WorldConfig overlap;
  overlap.aisles = {{1, {0, 0, 2, 2}, true}};
  try
  {
    load_world(Map, overlap);
    FAIL("expected a parse error");
  }
  catch (const ParseError& e)
  {
    CHECK(e.line() == 2);
    CHECK(e.column() == 2);
  }

  WorldConfig outside;
  outside.aisles = {{1, {0, 0, 9, 0}, true}};
  CHECK_THROWS_AS(load_world(Map, outside), ParseError);

  WorldConfig duplicate;
  duplicate.aisles = {{1, {3, 0, 3, 0}, true}, {1, {4, 0, 4, 0}, true}};
  CHECK_THROWS_AS(load_world(Map, duplicate), ParseError);
}

//==============================================================================
TEST_CASE("obstacle placement rules")
{
  auto world = load_world(Map, {});
  const Cell good[] = {{4, 1}, {4, 2}};
  CHECK(world.spawn_obstacle(good, 0.0) == 0);
  CHECK(world.is_obstacle({4, 2}));
  CHECK(world.ground_truth_costmap().cost(Cell{4, 1}) == cost::Lethal);
  CHECK(world.static_costmap().cost(Cell{4, 1}) == cost::Free);

  const Cell rack[] = {{1, 1}};
  CHECK_THROWS_AS(world.spawn_obstacle(rack, 0.0), PlacementError);
  const Cell twice[] = {{4, 2}};
  CHECK_THROWS_AS(world.spawn_obstacle(twice, 0.0), PlacementError);
  const Cell off[] = {{6, 0}};
  CHECK_THROWS_AS(world.spawn_obstacle(off, 0.0), PlacementError);
  CHECK_THROWS_AS(world.spawn_obstacle({}, 0.0), PlacementError);

  RobotState robot;
  robot.pose = world.cell_center({0, 0});
  world.add_robot(robot);
  const Cell on_robot[] = {{0, 0}};
  CHECK_THROWS_AS(world.spawn_obstacle(on_robot, 0.0), PlacementError);

  const Cell next[] = {{5, 3}};
  CHECK(world.spawn_obstacle(next, 1.0) == 1);
}

//==============================================================================
TEST_CASE("advance moves robots and flags collisions")
{
  auto world = load_world(Map, {});
  RobotState robot;
  robot.speed = 1.0;
  robot.pose = world.cell_center({0, 1});
  world.add_robot(robot);

  const Point2 step[] = {{0.1, 0.0}};
  world.advance(0.1, step);
  CHECK(world.clock() == doctest::Approx(0.1));
  CHECK(world.cell_at(world.robots()[0].pose) == Cell{1, 1});
  CHECK(world.robots()[0].collided);

  const Point2 fast[] = {{1.0, 0.0}};
  CHECK_THROWS(world.advance(0.1, fast));
  CHECK_THROWS(world.advance(0.0, step));
  CHECK_THROWS(world.advance(0.1, std::span<const Point2>{}));

  world.advance(2.0);
  CHECK(world.clock() == doctest::Approx(2.1));
}

//==============================================================================
TEST_CASE("robots cannot start on blocked cells")
{
  auto world = load_world(Map, {});
  RobotState robot;
  robot.pose = world.cell_center({1, 1});
  CHECK_THROWS_AS(world.add_robot(robot), PlacementError);
  robot.pose = world.cell_center({0, 0});
  robot.speed = 0.0;
  CHECK_THROWS_AS(world.add_robot(robot), PlacementError);
}
