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

#include <cpsim/harness.hpp>
#include <cpsim/log.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>

namespace cpsim {

//==============================================================================
LogLevel log_level()
{
  static const LogLevel level = []
    {
      const char* env = std::getenv("CP_SIM_LOG");
      const std::string_view v = env ? env : "";
      if (v == "debug")
        return LogLevel::Debug;

      if (v == "info")
        return LogLevel::Info;

      return LogLevel::Error;
    }();

  return level;
}

//==============================================================================
void log(LogLevel level, std::string_view message)
{
  if (static_cast<int>(level) > static_cast<int>(log_level()))
    return;

  static std::mutex mutex;
  const std::lock_guard<std::mutex> lock(mutex);
  static constexpr std::string_view names[] = {"error", "info", "debug"};
  std::cerr << "[" << names[static_cast<int>(level)] << "] " << message << "\n";
}

//==============================================================================
WorldModel build_world(const ExperimentConfig& config)
{
  if (config.map_path.empty())
    throw ConfigError("config has no world.map");

  std::string text;
  try
  {
    text = read_text_file(config.map_path);
  }
  catch (const std::runtime_error& e)
  {
    throw ConfigError(e.what());
  }

  return load_world(text, config.world);
}

//==============================================================================
Costmap full_knowledge_costmap(
  const WorldModel& world,
  std::span<const CellRect> footprints,
  const InflationParams& inflation)
{
  Costmap map = world.static_costmap();
  for (const auto& f : footprints)
    map = mark_lethal(map, f.cells());

  return inflate(map, inflation);
}

namespace {

constexpr std::size_t MaxRejections = 1000;

} // anonymous namespace

//==============================================================================
TrialSpec generate_trial(
  Rng& rng,
  const WorldModel& world,
  const ExperimentConfig& config,
  std::size_t trial_id,
  std::uint64_t seed)
{
  const Costmap free_space =
    inflate(world.static_costmap(), config.executive.inflation);
  const auto w = static_cast<std::uint64_t>(world.width());
  const auto h = static_cast<std::uint64_t>(world.height());

  std::size_t rejections = 0;
  const auto reject = [&]()
    {
      if (++rejections >= MaxRejections)
      {
        throw MapTooConstrainedError(
          "gave up on trial " + std::to_string(trial_id) + " after "
          + std::to_string(MaxRejections) + " rejected samples");
      }
    };

  const auto accept = [&]() { rejections = 0; };

  const auto sample_cell = [&]() -> Cell
    {
      const auto i = rng.below(w * h);
      return {static_cast<int>(i % w), static_cast<int>(i / w)};
    };

  while (true)
  {
    TrialSpec spec;
    spec.trial_id = trial_id;
    spec.seed = seed;

    Cell start = sample_cell();
    while (!traversable(free_space, start))
    {
      reject();
      start = sample_cell();
    }

    Cell goal = sample_cell();
    while (goal == start || !traversable(free_space, goal))
    {
      reject();
      goal = sample_cell();
    }

    accept();
    spec.mission = {start, goal};

    std::vector<bool> taken(static_cast<std::size_t>(w * h), false);
    while (spec.obstacle_footprints.size() < config.obstacles_per_trial)
    {
      const int fw = rng.between(config.obstacle_min_cells, config.obstacle_max_cells);
      const int fh = rng.between(config.obstacle_min_cells, config.obstacle_max_cells);
      if (fw > world.width() || fh > world.height())
      {
        reject();
        continue;
      }

      const int x0 = rng.between(0, world.width() - fw);
      const int y0 = rng.between(0, world.height() - fh);
      const CellRect rect{x0, y0, x0 + fw - 1, y0 + fh - 1};

      bool ok = !rect.contains(start) && !rect.contains(goal);
      for (int y = rect.y0; ok && y <= rect.y1; ++y)
      {
        for (int x = rect.x0; ok && x <= rect.x1; ++x)
        {
          ok = !world.is_rack({x, y}) && !taken[static_cast<std::size_t>(y) * w + x];
        }
      }

      if (!ok)
      {
        reject();
        continue;
      }

      for (const auto& c : rect.cells())
        taken[static_cast<std::size_t>(c.y) * w + c.x] = true;

      accept();
      spec.obstacle_footprints.push_back(rect);
    }

    const Costmap known = full_knowledge_costmap(
      world, spec.obstacle_footprints, config.executive.inflation);
    if (!traversable(known, start) || !traversable(known, goal))
    {
      reject();
      continue;
    }

    const auto oracle =
      dijkstra_oracle(known, start, goal, config.executive.planner.edges);
    if (!oracle)
    {
      reject();
      continue;
    }

    spec.oracle_distance = path_length_cells(oracle->waypoints) * world.resolution();
    return spec;
  }
}

//==============================================================================
TrialSpec make_trial(
  const WorldModel& world,
  const ExperimentConfig& config,
  std::size_t trial_id)
{
  const std::uint64_t seed = derive_seed(config.seed, trial_id);
  if (!config.mission)
  {
    Rng rng(seed);
    return generate_trial(rng, world, config, trial_id, seed);
  }

  TrialSpec spec;
  spec.trial_id = trial_id;
  spec.seed = seed;
  spec.mission = *config.mission;
  spec.obstacle_footprints = config.fixed_obstacles;

  const Costmap known = full_knowledge_costmap(
    world, spec.obstacle_footprints, config.executive.inflation);
  std::optional<Plan> oracle;
  try
  {
    oracle = dijkstra_oracle(
      known, spec.mission.start, spec.mission.goal, config.executive.planner.edges);
  }
  catch (const BlockedEndpointError& e)
  {
    throw ConfigError(std::string("scripted mission: ") + e.what());
  }

  if (!oracle)
    throw ConfigError("scripted mission is infeasible with every obstacle known");

  spec.oracle_distance = path_length_cells(oracle->waypoints) * world.resolution();
  return spec;
}

//==============================================================================
bool obstacles_covered(const WorldModel& world, std::span<const CellRect> footprints)
{
  for (const auto& f : footprints)
  {
    for (const auto& c : f.cells())
    {
      const bool seen = std::any_of(world.aisles().begin(), world.aisles().end(),
          [&](const AisleRegion& a) { return a.overhead_sensor && a.rect.contains(c); });
      if (!seen)
        return false;
    }
  }

  return true;
}

//==============================================================================
WorldModel trial_world(const WorldModel& world, const TrialSpec& spec)
{
  WorldModel w = world;
  for (const auto& f : spec.obstacle_footprints)
  {
    const auto cells = f.cells();
    w.spawn_obstacle(cells, 0.0);
  }

  return w;
}

//==============================================================================
TrialResult run_trial(
  const WorldModel& world,
  const ExperimentConfig& config,
  const TrialSpec& spec)
{
  const WorldModel w = trial_world(world, spec);
  TrialResult result;
  result.spec = spec;
  result.covered = obstacles_covered(w, spec.obstacle_footprints);

  RobotState robot;
  robot.id = 0;
  robot.speed = config.robot_speed;
  robot.sensor = config.sensor;

  const auto run = [&](PerceptionMode mode)
    {
      auto r = run_mission(w, robot, spec.mission, mode, config.executive);
      if (log_level() == LogLevel::Debug)
      {
        for (const auto& e : r.events)
        {
          log(LogLevel::Debug,
            "trial " + std::to_string(spec.trial_id) + " "
            + std::string(to_string(mode)) + " tick " + std::to_string(e.tick)
            + " " + std::string(to_string(e.kind)) + " at " + to_string(e.where)
            + (e.detail.empty() ? "" : " " + e.detail));
        }
      }

      if (r.collided || r.truncated)
      {
        log(LogLevel::Error,
          "trial " + std::to_string(spec.trial_id) + " "
          + std::string(to_string(mode))
          + (r.collided ? " collided" : " hit the tick limit"));
      }

      return r;
    };

  if (config.run_sp)
    result.sp = run(PerceptionMode::Standalone);

  if (config.run_cp)
    result.cp = run(PerceptionMode::Collaborative);

  return result;
}

//==============================================================================
double spearman(std::span<const double> a, std::span<const double> b)
{
  if (a.size() != b.size())
    throw std::invalid_argument("spearman needs series of equal length");

  const auto ranks = [](std::span<const double> v)
    {
      std::vector<std::size_t> order(v.size());
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
        [&](std::size_t i, std::size_t j) { return v[i] < v[j]; });

      std::vector<double> r(v.size());
      std::size_t i = 0;
      while (i < order.size())
      {
        std::size_t j = i;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]])
          ++j;

        const double average = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k)
          r[order[k]] = average;

        i = j + 1;
      }

      return r;
    };

  const auto ra = ranks(a);
  const auto rb = ranks(b);
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
  const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i)
  {
    cov += (ra[i] - ma) * (rb[i] - mb);
    va += (ra[i] - ma) * (ra[i] - ma);
    vb += (rb[i] - mb) * (rb[i] - mb);
  }

  if (va == 0.0 || vb == 0.0)
    return std::numeric_limits<double>::quiet_NaN();

  return cov / std::sqrt(va * vb);
}

//==============================================================================
ExperimentSummary summarize(std::vector<TrialResult> trials)
{
  ExperimentSummary s;
  s.trials = std::move(trials);
  const double n = static_cast<double>(s.trials.size());

  const auto means = [&](auto member) -> std::optional<ModeMeans>
    {
      ModeMeans m;
      for (const auto& t : s.trials)
      {
        const auto& r = t.*member;
        if (!r)
          return std::nullopt;

        m.distance += r->distance;
        m.time += r->time;
        m.replans += static_cast<double>(r->replans);
      }

      m.distance /= n;
      m.time /= n;
      m.replans /= n;
      return m;
    };

  s.sp = means(&TrialResult::sp);
  s.cp = means(&TrialResult::cp);

  for (const auto& t : s.trials)
  {
    for (const auto* r : {&t.sp, &t.cp})
    {
      if (!*r)
        continue;

      s.collisions += (*r)->collided ? 1 : 0;
      s.truncated += (*r)->truncated ? 1 : 0;
      s.unreached += (*r)->reached ? 0 : 1;
    }
  }

  if (s.sp && s.cp)
  {
    ModeMeans d;
    std::vector<double> oracle, gap;
    for (const auto& t : s.trials)
    {
      d.distance += t.sp->distance - t.cp->distance;
      d.time += t.sp->time - t.cp->time;
      d.replans +=
        static_cast<double>(t.sp->replans) - static_cast<double>(t.cp->replans);
      oracle.push_back(t.spec.oracle_distance);
      gap.push_back(t.sp->distance - t.cp->distance);
    }

    d.distance /= n;
    d.time /= n;
    d.replans /= n;
    s.delta = d;
    s.distance_correlation = spearman(oracle, gap);
  }

  return s;
}

//==============================================================================
ExperimentSummary run_experiment(
  const ExperimentConfig& config,
  std::size_t parallel)
{
  config.validate();
  const WorldModel world = build_world(config);

  std::vector<TrialResult> results(config.trials);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  const auto worker = [&]()
    {
      while (true)
      {
        const std::size_t i = next.fetch_add(1);
        if (i >= config.trials)
          return;

        try
        {
          const TrialSpec spec = make_trial(world, config, i);
          results[i] = run_trial(world, config, spec);
          log(LogLevel::Info, "trial " + std::to_string(i) + " done");
        }
        catch (...)
        {
          const std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure)
            failure = std::current_exception();

          next = config.trials;
          return;
        }
      }
    };

  const std::size_t threads = std::clamp<std::size_t>(parallel, 1, config.trials);
  if (threads == 1)
  {
    worker();
  }
  else
  {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t)
      pool.emplace_back(worker);

    for (auto& t : pool)
      t.join();
  }

  if (failure)
    std::rethrow_exception(failure);

  return summarize(std::move(results));
}

} // namespace cpsim
