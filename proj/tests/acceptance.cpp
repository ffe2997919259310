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

// Acceptance gate: runs every criterion and prints one PASS/FAIL line each.
// Exit status is non-zero if any criterion fails.

#include "model_check.hpp"
#include "oracles.hpp"

#include <cpsim/config.hpp>
#include <cpsim/harness.hpp>
#include <cpsim/report.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

using namespace cpsim;

namespace {

struct Outcome
{
  bool pass = true;
  std::string detail;
};

std::string config_path(const char* name)
{
  return std::string(CPSIM_DATA_DIR) + "/configs/" + name;
}

std::string num(double v)
{
  std::ostringstream out;
  out.precision(4);
  out << v;
  return out.str();
}

//==============================================================================
Outcome planner_optimality()
{
  std::mt19937_64 rng(20240501);
  std::bernoulli_distribution wall(0.2);
  std::bernoulli_distribution soft(0.3);
  std::uniform_int_distribution<int> soft_cost(1, 252);
  std::uniform_int_distribution<int> coord(0, 19);

  std::size_t solved = 0, infeasible = 0, plans = 0;
  for (int trial = 0; trial < 200; ++trial)
  {
    Costmap map(20, 20, 0.1);
    for (std::size_t i = 0; i < map.size(); ++i)
    {
      if (wall(rng))
        map.set_cost(i, cost::Lethal);
      else if (soft(rng))
        map.set_cost(i, static_cast<std::uint8_t>(soft_cost(rng)));
    }

    const Cell start{coord(rng), coord(rng)};
    const Cell goal{coord(rng), coord(rng)};
    map.set_cost(start, cost::Free);
    map.set_cost(goal, cost::Free);

    const auto oracle = dijkstra_oracle(map, start, goal);
    const auto result = ara_star(map, start, goal);
    if (!oracle)
    {
      if (result.status != AraResult::Status::Infeasible)
        return {false, "grid " + std::to_string(trial) + ": oracle infeasible, ARA* not"};

      ++infeasible;
      continue;
    }

    if (result.status != AraResult::Status::Solved)
      return {false, "grid " + std::to_string(trial) + ": ARA* did not solve"};

    Rational last{std::numeric_limits<std::int64_t>::max(), 1};
    for (const auto& plan : result.plans)
    {
      const auto lhs = static_cast<Rational::Wide>(plan.cost) * plan.epsilon_bound.den;
      const auto rhs = static_cast<Rational::Wide>(plan.epsilon_bound.num) * oracle->cost;
      if (lhs > rhs)
        return {false, "grid " + std::to_string(trial) + ": cost above eps' * optimum"};

      if (!(plan.epsilon_bound <= last))
        return {false, "grid " + std::to_string(trial) + ": eps' increased"};

      if (path_cost(plan.waypoints, map) != plan.cost)
        return {false, "grid " + std::to_string(trial) + ": reported cost mismatch"};

      last = plan.epsilon_bound;
      ++plans;
    }

    if (result.best()->cost != oracle->cost)
    {
      return {false, "grid " + std::to_string(trial) + ": final cost "
        + std::to_string(result.best()->cost) + " vs optimum "
        + std::to_string(oracle->cost)};
    }

    ++solved;
  }

  return {true, std::to_string(solved) + " solved, " + std::to_string(infeasible)
    + " infeasible, " + std::to_string(plans) + " plans checked"};
}

//==============================================================================
Outcome inflation_exactness()
{
  std::size_t cells = 0;
  for (std::uint64_t seed = 0; seed < 500; ++seed)
  {
    std::mt19937_64 rng(seed);
    const int w = std::uniform_int_distribution<int>(1, 32)(rng);
    const int h = std::uniform_int_distribution<int>(1, 32)(rng);
    const int lethal = std::uniform_int_distribution<int>(0, 10)(rng);

    InflationParams params;
    params.inscribed_radius = std::uniform_real_distribution<double>(0.05, 0.5)(rng);
    params.inflation_radius =
      params.inscribed_radius + std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    params.cost_scaling_factor = std::uniform_real_distribution<double>(0.5, 20.0)(rng);

    Costmap map(w, h, 0.1);
    std::uniform_int_distribution<int> px(0, w - 1), py(0, h - 1);
    for (int i = 0; i < lethal; ++i)
      map.set_cost(Cell{px(rng), py(rng)}, cost::Lethal);

    for (int i = 0; i < 3; ++i)
    {
      const Cell c{px(rng), py(rng)};
      if (map.cost(c) != cost::Lethal)
        map.set_cost(c, static_cast<std::uint8_t>(std::uniform_int_distribution<int>(1, 252)(rng)));
    }

    const auto fast = distance_transform(map);
    const auto slow = oracle::distances(map);
    for (std::size_t i = 0; i < slow.size(); ++i)
    {
      const bool both_inf = std::isinf(slow[i]) && std::isinf(fast.meters[i]);
      if (!both_inf && !(std::abs(slow[i] - fast.meters[i]) <= 1e-9))
        return {false, "seed " + std::to_string(seed) + ": distance mismatch"};
    }

    const auto got = inflate(map, params);
    const auto want = oracle::inflate(map, params);
    for (std::size_t i = 0; i < want.size(); ++i)
    {
      if (got.cost(i) != want.cost(i))
      {
        return {false, "seed " + std::to_string(seed) + ": cost mismatch at "
          + to_string(map.cell(i))};
      }
    }

    cells += map.size();
  }

  return {true, "500 grids, " + std::to_string(cells) + " cells identical"};
}

//==============================================================================
struct Shared
{
  std::size_t collisions = 0;
  std::size_t truncated = 0;
  std::optional<ExperimentSummary> experiment;
};

Outcome scripted_scenario(Shared& shared)
{
  const auto config = load_config(config_path("detour.ini"));
  const auto world = build_world(config);
  const auto trial = run_trial(world, config, make_trial(world, config, 0));
  const auto& sp = *trial.sp;
  const auto& cp = *trial.cp;
  shared.collisions += (sp.collided ? 1 : 0) + (cp.collided ? 1 : 0);
  shared.truncated += (sp.truncated ? 1 : 0) + (cp.truncated ? 1 : 0);

  const bool pass = trial.covered && sp.reached && cp.reached
    && sp.plans.size() == 3 && sp.replans == 2
    && cp.plans.size() == 1 && cp.replans == 0
    && cp.distance < sp.distance && cp.time < sp.time;

  return {pass, "SP " + std::to_string(sp.plans.size()) + " plans/"
    + std::to_string(sp.replans) + " replans, " + num(sp.distance) + " m, "
    + num(sp.time) + " s; CP " + std::to_string(cp.plans.size()) + " plans/"
    + std::to_string(cp.replans) + " replans, " + num(cp.distance) + " m, "
    + num(cp.time) + " s"};
}

//==============================================================================
Outcome experiment_direction(Shared& shared)
{
  const auto config = load_config(config_path("default.ini"));
  shared.experiment = run_experiment(config);
  const auto& s = *shared.experiment;
  shared.collisions += s.collisions;
  shared.truncated += s.truncated;

  std::size_t covered = 0;
  for (const auto& t : s.trials)
  {
    if (!t.covered)
      continue;

    ++covered;
    if (t.cp->replans > t.sp->replans)
    {
      return {false, "trial " + std::to_string(t.spec.trial_id)
        + ": covered obstacles but CP replanned more than SP"};
    }
  }

  const auto& d = *s.delta;
  const bool pass = s.trials.size() == 50 && d.distance > 0.0 && d.time > 0.0
    && d.replans > 0.0;
  return {pass, "mean SP-CP: distance " + num(d.distance) + " m, time "
    + num(d.time) + " s, replans " + num(d.replans) + "; "
    + std::to_string(covered) + " fully covered trials"};
}

//==============================================================================
Outcome distance_correlation(const Shared& shared)
{
  if (!shared.experiment || !shared.experiment->distance_correlation)
    return {false, "experiment did not run"};

  const double rho = *shared.experiment->distance_correlation;
  return {rho > 0.0, "spearman " + num(rho)};
}

//==============================================================================
std::map<std::string, std::string> read_dir(const std::filesystem::path& dir)
{
  std::map<std::string, std::string> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
  {
    std::ifstream in(entry.path(), std::ios::binary);
    std::ostringstream text;
    text << in.rdbuf();
    files[entry.path().filename().string()] = text.str();
  }

  return files;
}

Outcome safety_and_determinism(Shared& shared)
{
  const auto tmp = std::filesystem::temp_directory_path() / "cpsim_acceptance";
  std::filesystem::remove_all(tmp);

  const auto config = load_config(config_path("default.ini"));
  write_report(*shared.experiment, tmp / "a");
  const auto again = run_experiment(config, 2);
  shared.collisions += again.collisions;
  shared.truncated += again.truncated;
  write_report(again, tmp / "b");

  auto detour = load_config(config_path("detour.ini"));
  detour.executive.record_costmaps = true;
  const auto world = build_world(detour);
  for (const char* name : {"a", "b"})
  {
    const auto trial = run_trial(world, detour, make_trial(world, detour, 0));
    write_text_file(tmp / name / "detour.svg", render_trial_svg(world, trial));
  }

  const auto a = read_dir(tmp / "a");
  const auto b = read_dir(tmp / "b");
  std::filesystem::remove_all(tmp);

  const bool identical = a == b && a.size() == 6;
  const bool safe = shared.collisions == 0 && shared.truncated == 0;
  return {identical && safe, std::to_string(shared.collisions) + " collisions, "
    + std::to_string(shared.truncated) + " truncated, output directories "
    + (identical ? "byte-identical" : "differ")};
}

//==============================================================================
Outcome orchestrator_properties()
{
  using namespace cleaning;

  OrchestratorParams params;
  params.dwell = 25.0;
  params.travel_time = 5.0;
  const auto stats = model_check::run(5, params);
  if (!stats.violations.empty())
    return {false, stats.violations.front()};

  OrchestratorParams global = params;
  global.halt_scope = HaltScope::Global;
  const auto global_stats = model_check::run(4, global);
  if (!global_stats.violations.empty())
    return {false, "global scope: " + global_stats.violations.front()};

  const auto play = [](const std::string& script)
    {
      return commands_csv(run_scenario(parse_script(script), model_check::fleet(),
        model_check::regions()).commands);
    };

  const bool goldens =
    play("0 dirty_floor 1\n10 human 1\n20 clear 1 human\n")
      == "time,robot_id,action,region\n0,1,dispatch,1\n10,1,halt,1\n20,1,resume,1\n70,1,recall,1\n"
    && play("0 trash 1\n0 dirty_floor 1\n30 clear 1 trash\n")
      == "time,robot_id,action,region\n0,3,dispatch,1\n30,1,dispatch,1\n30,3,recall,1\n90,1,recall,1\n"
    && play("0 trash 2\n5 clear 2 trash\n")
      == "time,robot_id,action,region\n0,3,dispatch,2\n5,2,dispatch,2\n5,3,recall,2\n65,2,recall,2\n";

  return {goldens, std::to_string(stats.sequences) + " sequences, "
    + std::to_string(stats.commands) + " commands, no violations; golden logs "
    + (goldens ? "match" : "differ")};
}

} // anonymous namespace

//==============================================================================
int main()
{
  Shared shared;
  struct Criterion
  {
    int id;
    const char* name;
    double limit;
    std::function<Outcome()> run;
  };

  const Criterion criteria[] = {
    {1, "planner optimality", 10.0, planner_optimality},
    {2, "inflation exactness", 5.0, inflation_exactness},
    {3, "scripted three-aisle scenario", 2.0, [&] { return scripted_scenario(shared); }},
    {4, "SP vs CP experiment direction", 60.0, [&] { return experiment_direction(shared); }},
    {5, "distance correlation", 60.0, [&] { return distance_correlation(shared); }},
    {6, "safety and determinism", 120.0, [&] { return safety_and_determinism(shared); }},
    {7, "orchestrator properties", 10.0, orchestrator_properties},
  };

  bool all = true;
  for (const auto& c : criteria)
  {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try
    {
      outcome = c.run();
    }
    catch (const std::exception& e)
    {
      outcome = {false, std::string("exception: ") + e.what()};
    }

    const double seconds = std::chrono::duration<double>(
      std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds < c.limit;
    const bool pass = outcome.pass && in_time;
    all = all && pass;

    std::cout << "criterion " << c.id << ": " << (pass ? "PASS" : "FAIL") << "  "
              << c.name << " (" << outcome.detail << "; " << num(seconds) << " s, limit "
              << num(c.limit) << " s" << (in_time ? "" : ", TOO SLOW") << ")" << std::endl;
  }

  return all ? 0 : 1;
}
