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

#include <cpsim/config.hpp>

#include <charconv>
#include <filesystem>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace cpsim {

namespace {

//==============================================================================
std::string_view trim(std::string_view s)
{
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos)
    return {};

  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s)
{
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size())
  {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t'))
      ++i;

    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t')
      ++i;

    if (i > start)
      out.push_back(s.substr(start, i - start));
  }

  return out;
}

//==============================================================================
class Reader
{
public:
  Reader(std::size_t line, std::string_view section, std::string_view key)
  : _line(line),
    _where(std::string(section) + "." + std::string(key))
  {
    // Do nothing
  }

  [[noreturn]] void fail(const std::string& why) const
  {
    throw ConfigError(
      "config line " + std::to_string(_line) + " (" + _where + "): " + why);
  }

  double real(std::string_view v) const
  {
    double out = 0.0;
    const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
    if (r.ec != std::errc() || r.ptr != v.data() + v.size())
      fail("expected a number, got '" + std::string(v) + "'");

    return out;
  }

  template<typename Int>
  Int integer(std::string_view v) const
  {
    Int out = 0;
    const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
    if (r.ec != std::errc() || r.ptr != v.data() + v.size())
      fail("expected an integer, got '" + std::string(v) + "'");

    return out;
  }

  std::vector<std::string_view> fields(std::string_view v, std::size_t min,
    std::size_t max) const
  {
    auto f = split_ws(v);
    if (f.size() < min || f.size() > max)
    {
      fail("expected " + std::to_string(min)
        + (max == min ? "" : "-" + std::to_string(max)) + " fields, got "
        + std::to_string(f.size()));
    }

    return f;
  }

private:
  std::size_t _line;
  std::string _where;
};

const std::map<std::string, std::set<std::string>>& known_keys()
{
  static const std::map<std::string, std::set<std::string>> keys = {
    {"world", {"map", "resolution", "aisle"}},
    {"robot", {"speed", "tick_limit"}},
    {"sensing", {"range", "angular_resolution_deg", "fov_deg", "share_latency"}},
    {"inflation", {"inscribed_radius", "inflation_radius", "cost_scaling_factor"}},
    {"planner", {"eps_initial", "eps_final", "eps_step", "max_expansions",
        "cost_weight"}},
    {"timing", {"t_per_expansion", "planner_overhead"}},
    {"experiment", {"trials", "obstacles_per_trial", "seed", "modes", "out",
        "obstacle_min_cells", "obstacle_max_cells", "mission", "obstacle"}},
    {"cleaning", {"region", "robot", "dwell", "travel_time", "halt_scope"}},
  };
  return keys;
}

const std::set<std::string> repeatable = {
  "world.aisle", "experiment.obstacle", "cleaning.region", "cleaning.robot"};

} // anonymous namespace

//==============================================================================
void ExperimentConfig::validate() const
{
  const auto check = [](bool ok, const std::string& what)
    {
      if (!ok)
        throw ConfigError("invalid config: " + what);
    };

  check(world.resolution > 0.0, "world.resolution must be > 0");
  check(robot_speed > 0.0, "robot.speed must be > 0");
  check(executive.tick_limit > 0, "robot.tick_limit must be > 0");
  check(trials >= 1, "experiment.trials must be >= 1");
  check(run_sp || run_cp, "experiment.modes selects no mode");
  check(obstacle_min_cells >= 1 && obstacle_max_cells >= obstacle_min_cells,
    "obstacle size range must satisfy 1 <= min <= max");
  check(executive.share_latency >= 0.0, "sensing.share_latency must be >= 0");
  check(executive.timing.t_per_expansion >= 0.0
    && executive.timing.planner_overhead >= 0.0, "timing values must be >= 0");
  check(executive.planner.edges.cost_weight >= 1, "planner.cost_weight must be >= 1");
  check(!(!fixed_obstacles.empty() && !mission),
    "experiment.obstacle requires experiment.mission");

  try
  {
    sensor.validate();
    executive.inflation.validate();
    executive.planner.schedule.validate();
  }
  catch (const std::invalid_argument& e)
  {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
}

//==============================================================================
ExperimentConfig parse_config(std::string_view text, const std::string& base_dir)
{
  ExperimentConfig cfg;
  std::string section;
  std::set<std::string> seen;
  std::set<std::string> sections_seen;

  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t number = 0;
  while (std::getline(in, raw))
  {
    ++number;
    std::string_view line = raw;
    if (const auto c = line.find_first_of("#;"); c != std::string_view::npos)
      line = line.substr(0, c);

    line = trim(line);
    if (line.empty())
      continue;

    if (line.front() == '[')
    {
      if (line.back() != ']')
        throw ConfigError("config line " + std::to_string(number) + ": bad section header");

      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (!known_keys().count(section))
      {
        throw ConfigError(
          "config line " + std::to_string(number) + ": unknown section [" + section + "]");
      }

      if (!sections_seen.insert(section).second)
      {
        throw ConfigError(
          "config line " + std::to_string(number) + ": repeated section [" + section + "]");
      }

      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("config line " + std::to_string(number) + ": expected key = value");

    if (section.empty())
      throw ConfigError("config line " + std::to_string(number) + ": key outside a section");

    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    const Reader r(number, section, key);
    if (!known_keys().at(section).count(key))
      r.fail("unknown key");

    const std::string full = section + "." + key;
    if (!repeatable.count(full) && !seen.insert(full).second)
      r.fail("key given twice");

    if (value.empty())
      r.fail("empty value");

    auto& ex = cfg.executive;
    if (full == "world.map")
    {
      std::filesystem::path p{std::string(value)};
      if (p.is_relative())
        p = std::filesystem::path(base_dir) / p;

      cfg.map_path = p.lexically_normal().string();
    }
    else if (full == "world.resolution")
      cfg.world.resolution = r.real(value);
    else if (full == "world.aisle")
    {
      const auto f = r.fields(value, 5, 6);
      AisleRegion a;
      a.id = r.integer<int>(f[0]);
      a.rect = {r.integer<int>(f[1]), r.integer<int>(f[2]),
        r.integer<int>(f[3]), r.integer<int>(f[4])};
      if (f.size() == 6)
      {
        if (f[5] == "overhead")
          a.overhead_sensor = true;
        else if (f[5] == "none")
          a.overhead_sensor = false;
        else
          r.fail("aisle sensor must be 'overhead' or 'none'");
      }

      cfg.world.aisles.push_back(a);
    }
    else if (full == "robot.speed")
      cfg.robot_speed = r.real(value);
    else if (full == "robot.tick_limit")
      ex.tick_limit = r.integer<std::size_t>(value);
    else if (full == "sensing.range")
      cfg.sensor.range = r.real(value);
    else if (full == "sensing.angular_resolution_deg")
      cfg.sensor.angular_resolution = r.real(value) * std::numbers::pi / 180.0;
    else if (full == "sensing.fov_deg")
      cfg.sensor.fov = r.real(value) * std::numbers::pi / 180.0;
    else if (full == "sensing.share_latency")
      ex.share_latency = r.real(value);
    else if (full == "inflation.inscribed_radius")
      ex.inflation.inscribed_radius = r.real(value);
    else if (full == "inflation.inflation_radius")
      ex.inflation.inflation_radius = r.real(value);
    else if (full == "inflation.cost_scaling_factor")
      ex.inflation.cost_scaling_factor = r.real(value);
    else if (full == "planner.eps_initial")
      ex.planner.schedule.initial = r.real(value);
    else if (full == "planner.eps_final")
      ex.planner.schedule.final = r.real(value);
    else if (full == "planner.eps_step")
      ex.planner.schedule.step = r.real(value);
    else if (full == "planner.max_expansions")
      ex.planner.max_expansions = r.integer<std::size_t>(value);
    else if (full == "planner.cost_weight")
      ex.planner.edges.cost_weight = r.integer<std::int64_t>(value);
    else if (full == "timing.t_per_expansion")
      ex.timing.t_per_expansion = r.real(value);
    else if (full == "timing.planner_overhead")
      ex.timing.planner_overhead = r.real(value);
    else if (full == "experiment.trials")
      cfg.trials = r.integer<std::size_t>(value);
    else if (full == "experiment.obstacles_per_trial")
      cfg.obstacles_per_trial = r.integer<std::size_t>(value);
    else if (full == "experiment.seed")
      cfg.seed = r.integer<std::uint64_t>(value);
    else if (full == "experiment.modes")
    {
      if (value == "sp")
        cfg.run_sp = true, cfg.run_cp = false;
      else if (value == "cp")
        cfg.run_sp = false, cfg.run_cp = true;
      else if (value == "both")
        cfg.run_sp = true, cfg.run_cp = true;
      else
        r.fail("modes must be sp, cp or both");
    }
    else if (full == "experiment.out")
      cfg.out_dir = std::string(value);
    else if (full == "experiment.obstacle_min_cells")
      cfg.obstacle_min_cells = r.integer<int>(value);
    else if (full == "experiment.obstacle_max_cells")
      cfg.obstacle_max_cells = r.integer<int>(value);
    else if (full == "experiment.mission")
    {
      const auto f = r.fields(value, 4, 4);
      cfg.mission = Mission{
        {r.integer<int>(f[0]), r.integer<int>(f[1])},
        {r.integer<int>(f[2]), r.integer<int>(f[3])}};
    }
    else if (full == "experiment.obstacle")
    {
      const auto f = r.fields(value, 4, 4);
      cfg.fixed_obstacles.push_back({r.integer<int>(f[0]), r.integer<int>(f[1]),
        r.integer<int>(f[2]), r.integer<int>(f[3])});
    }
    else
    {
      if (!cfg.cleaning)
        cfg.cleaning.emplace();

      auto& cl = *cfg.cleaning;
      if (full == "cleaning.region")
      {
        const auto f = r.fields(value, 6, 6);
        cleaning::CleaningRegion region;
        region.region_id = r.integer<int>(f[0]);
        try
        {
          region.kind = cleaning::parse_region_kind(f[1]);
        }
        catch (const std::invalid_argument& e)
        {
          r.fail(e.what());
        }

        const CellRect rect{r.integer<int>(f[2]), r.integer<int>(f[3]),
          r.integer<int>(f[4]), r.integer<int>(f[5])};
        region.cleanable_cells = rect.cells();
        cl.regions.push_back(std::move(region));
      }
      else if (full == "cleaning.robot")
      {
        const auto f = r.fields(value, 2, 2);
        cleaning::RobotAgent robot;
        robot.robot_id = r.integer<int>(f[0]);
        try
        {
          robot.kind = cleaning::parse_robot_kind(f[1]);
        }
        catch (const std::invalid_argument& e)
        {
          r.fail(e.what());
        }

        cl.robots.push_back(robot);
      }
      else if (full == "cleaning.dwell")
        cl.params.dwell = r.real(value);
      else if (full == "cleaning.travel_time")
        cl.params.travel_time = r.real(value);
      else if (full == "cleaning.halt_scope")
      {
        try
        {
          cl.params.halt_scope = cleaning::parse_halt_scope(value);
        }
        catch (const std::invalid_argument& e)
        {
          r.fail(e.what());
        }
      }
    }
  }

  cfg.validate();
  return cfg;
}

//==============================================================================
ExperimentConfig load_config(const std::string& path)
{
  std::string text;
  try
  {
    text = read_text_file(path);
  }
  catch (const std::runtime_error& e)
  {
    throw ConfigError(e.what());
  }

  const auto dir = std::filesystem::path(path).parent_path();
  return parse_config(text, dir.empty() ? "." : dir.string());
}

} // namespace cpsim
