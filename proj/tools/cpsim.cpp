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
#include <cpsim/harness.hpp>
#include <cpsim/orchestrator.hpp>
#include <cpsim/report.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace {

constexpr int ExitOk = 0;
constexpr int ExitUsage = 1;
constexpr int ExitRuntime = 2;

//==============================================================================
void apply_mode(cpsim::ExperimentConfig& config, const std::string& mode)
{
  config.run_sp = mode == "sp" || mode == "both";
  config.run_cp = mode == "cp" || mode == "both";
}

//==============================================================================
int simulate(
  const std::string& config_path,
  std::optional<std::uint64_t> seed,
  std::optional<std::size_t> trials,
  const std::string& mode,
  const std::string& out,
  std::size_t parallel)
{
  auto config = cpsim::load_config(config_path);
  if (seed)
    config.seed = *seed;

  if (trials)
    config.trials = *trials;

  if (!mode.empty())
    apply_mode(config, mode);

  if (!out.empty())
    config.out_dir = out;

  const auto summary = cpsim::run_experiment(config, parallel);
  cpsim::write_report(summary, config.out_dir);
  std::cout << cpsim::summary_text(summary);
  return summary.failed() ? ExitRuntime : ExitOk;
}

//==============================================================================
int replay(const std::string& config_path, std::size_t trial, const std::string& render)
{
  auto config = cpsim::load_config(config_path);
  config.validate();
  config.executive.record_costmaps = true;

  const auto world = cpsim::build_world(config);
  const auto spec = cpsim::make_trial(world, config, trial);
  const auto result = cpsim::run_trial(world, config, spec);
  cpsim::write_text_file(render, cpsim::render_trial_svg(world, result));

  bool failed = false;
  for (const auto* r : {&result.sp, &result.cp})
  {
    if (!*r)
      continue;

    const auto& m = **r;
    std::cout << cpsim::to_string(m.mode) << " plans " << m.plans.size()
              << " replans " << m.replans
              << " distance_m " << cpsim::format_double(m.distance)
              << " time_s " << cpsim::format_double(m.time)
              << " reached " << (m.reached ? 1 : 0) << "\n";
    failed = failed || m.collided || m.truncated;
  }

  return failed ? ExitRuntime : ExitOk;
}

//==============================================================================
int validate(const std::string& config_path)
{
  const auto config = cpsim::load_config(config_path);
  config.validate();
  const auto world = cpsim::build_world(config);
  const auto spec = cpsim::make_trial(world, config, 0);
  std::cout << "ok: " << world.width() << "x" << world.height() << " cells, "
            << world.aisles().size() << " aisles, trial 0 oracle distance "
            << cpsim::format_double(spec.oracle_distance) << " m\n";
  return ExitOk;
}

//==============================================================================
int orchestrate(
  const std::string& config_path,
  const std::string& script_path,
  const std::string& out)
{
  const auto config = cpsim::load_config(config_path);
  if (!config.cleaning)
    throw cpsim::ConfigError(config_path + " has no [cleaning] section");

  const auto script = cpsim::cleaning::parse_script(cpsim::read_text_file(script_path));
  const auto result = cpsim::cleaning::run_scenario(
    script, config.cleaning->robots, config.cleaning->regions, config.cleaning->params);

  const auto commands = cpsim::cleaning::commands_csv(result.commands);
  if (out.empty())
  {
    std::cout << commands;
  }
  else
  {
    std::filesystem::create_directories(out);
    cpsim::write_text_file(std::filesystem::path(out) / "commands.csv", commands);
    cpsim::write_text_file(std::filesystem::path(out) / "coverage.csv",
      cpsim::cleaning::coverage_csv(result));
  }

  for (const auto& r : result.rejected)
  {
    std::cerr << "rejected event at t=" << cpsim::format_double(r.event.time)
              << ": " << r.reason << "\n";
  }

  return ExitOk;
}

} // anonymous namespace

//==============================================================================
int main(int argc, char** argv)
{
  CLI::App app{"Warehouse robot perception simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string mode;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::size_t parallel = 1;
  std::size_t trial = 0;
  std::string render;
  std::string script;

  auto* sim = app.add_subcommand("simulate", "Run the SP/CP experiment");
  sim->add_option("--config", config_path, "Config file")->required();
  sim->add_option("--seed", seed, "Root seed");
  sim->add_option("--trials", trials, "Number of trials");
  sim->add_option("--mode", mode, "Perception modes to run")
    ->check(CLI::IsMember({"sp", "cp", "both"}));
  sim->add_option("--out", out, "Output directory");
  sim->add_option("--parallel", parallel, "Worker threads")
    ->check(CLI::PositiveNumber);

  auto* rep = app.add_subcommand("replay", "Render one trial");
  rep->add_option("--config", config_path, "Config file")->required();
  rep->add_option("--trial", trial, "Trial index")->required();
  rep->add_option("--render", render, "Output SVG file")->required();

  auto* val = app.add_subcommand("validate", "Parse a config and check feasibility");
  val->add_option("--config", config_path, "Config file")->required();

  auto* orch = app.add_subcommand("orchestrate", "Run a cleaning-fleet script");
  orch->add_option("--config", config_path, "Config file with a [cleaning] section")
    ->required();
  orch->add_option("--script", script, "Detection script")->required();
  orch->add_option("--out", out, "Output directory (default: stdout)");

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError& e)
  {
    const int code = app.exit(e);
    return code == 0 ? ExitOk : ExitUsage;
  }

  try
  {
    if (sim->parsed())
      return simulate(config_path, seed, trials, mode, out, parallel);

    if (rep->parsed())
      return replay(config_path, trial, render);

    if (val->parsed())
      return validate(config_path);

    return orchestrate(config_path, script, out);
  }
  catch (const cpsim::ConfigError& e)
  {
    std::cerr << "config error: " << e.what() << "\n";
    return ExitUsage;
  }
  catch (const cpsim::ParseError& e)
  {
    std::cerr << "parse error: " << e.what() << "\n";
    return ExitUsage;
  }
  catch (const cpsim::MapTooConstrainedError& e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return ExitUsage;
  }
  catch (const std::exception& e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return ExitRuntime;
  }
}
