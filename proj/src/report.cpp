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

#include <cpsim/report.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace cpsim {

//==============================================================================
std::string format_double(double value)
{
  if (std::isnan(value))
    return "nan";

  char buffer[64];
  const auto r = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, r.ptr);
}

namespace {

//==============================================================================
std::string fixed(double value, int digits = 2)
{
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*f", digits, value);
  return buffer;
}

//==============================================================================
template<typename T>
std::string opt_field(const std::optional<MissionResult>& r, T get)
{
  return r ? get(*r) : std::string();
}

} // anonymous namespace

//==============================================================================
std::string trials_csv(const ExperimentSummary& summary)
{
  std::ostringstream out;
  out << "trial_id,seed,start_x,start_y,goal_x,goal_y,oracle_dist_m,"
         "dist_sp_m,dist_cp_m,time_sp_s,time_cp_s,replans_sp,replans_cp,"
         "reached_sp,reached_cp\n";

  const auto dist = [](const MissionResult& r) { return format_double(r.distance); };
  const auto time = [](const MissionResult& r) { return format_double(r.time); };
  const auto replans = [](const MissionResult& r) { return std::to_string(r.replans); };
  const auto reached = [](const MissionResult& r) { return std::string(r.reached ? "1" : "0"); };

  for (const auto& t : summary.trials)
  {
    const auto& m = t.spec.mission;
    out << t.spec.trial_id << ',' << t.spec.seed << ','
        << m.start.x << ',' << m.start.y << ',' << m.goal.x << ',' << m.goal.y << ','
        << format_double(t.spec.oracle_distance) << ','
        << opt_field(t.sp, dist) << ',' << opt_field(t.cp, dist) << ','
        << opt_field(t.sp, time) << ',' << opt_field(t.cp, time) << ','
        << opt_field(t.sp, replans) << ',' << opt_field(t.cp, replans) << ','
        << opt_field(t.sp, reached) << ',' << opt_field(t.cp, reached) << '\n';
  }

  return out.str();
}

//==============================================================================
std::string summary_text(const ExperimentSummary& summary)
{
  std::ostringstream out;
  out << "trials " << summary.trials.size() << "\n";

  std::size_t covered = 0;
  for (const auto& t : summary.trials)
    covered += t.covered ? 1 : 0;

  out << "trials_fully_covered " << covered << "\n";

  const auto means = [&](const char* name, const std::optional<ModeMeans>& m)
    {
      if (!m)
        return;

      out << name << "_mean_distance_m " << format_double(m->distance) << "\n"
          << name << "_mean_time_s " << format_double(m->time) << "\n"
          << name << "_mean_replans " << format_double(m->replans) << "\n";
    };

  means("sp", summary.sp);
  means("cp", summary.cp);
  means("delta", summary.delta);

  if (summary.distance_correlation)
  {
    out << "spearman_oracle_distance_vs_distance_gap "
        << format_double(*summary.distance_correlation) << "\n";
  }

  out << "collisions " << summary.collisions << "\n"
      << "truncated " << summary.truncated << "\n"
      << "unreached " << summary.unreached << "\n";
  return out.str();
}

//==============================================================================
std::string chart_svg(const ExperimentSummary& summary, ChartMetric metric)
{
  const auto value = [&](const MissionResult& r)
    {
      switch (metric)
      {
        case ChartMetric::Distance: return r.distance;
        case ChartMetric::Time: return r.time;
        case ChartMetric::Replans: return static_cast<double>(r.replans);
      }

      return 0.0;
    };

  const char* title = metric == ChartMetric::Distance ? "Distance travelled (m)"
    : metric == ChartMetric::Time ? "Mission time (s)" : "Replans";

  double top = 0.0;
  for (const auto& t : summary.trials)
  {
    if (t.sp)
      top = std::max(top, value(*t.sp));

    if (t.cp)
      top = std::max(top, value(*t.cp));
  }

  if (top <= 0.0)
    top = 1.0;

  top *= 1.1;

  const double left = 60.0, right = 20.0, upper = 40.0, lower = 40.0;
  const double plot_h = 300.0, bar_w = 6.0, pair_w = 18.0;
  const std::size_t n = summary.trials.size();
  const double plot_w = std::max(200.0, pair_w * static_cast<double>(n));
  const double width = left + plot_w + right;
  const double height = upper + plot_h + lower;
  const auto y_of = [&](double v) { return upper + plot_h - v / top * plot_h; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(width)
      << "\" height=\"" << fixed(height) << "\" font-family=\"sans-serif\" font-size=\"10\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << fixed(left) << "\" y=\"20\" font-size=\"13\">" << title << "</text>\n"
      << "<rect x=\"" << fixed(width - 150) << "\" y=\"10\" width=\"10\" height=\"10\" fill=\"#d62728\"/>"
      << "<text x=\"" << fixed(width - 136) << "\" y=\"19\">SP</text>\n"
      << "<rect x=\"" << fixed(width - 100) << "\" y=\"10\" width=\"10\" height=\"10\" fill=\"#1f77b4\"/>"
      << "<text x=\"" << fixed(width - 86) << "\" y=\"19\">CP</text>\n";

  for (int i = 0; i <= 5; ++i)
  {
    const double v = top * i / 5.0;
    const double y = y_of(v);
    out << "<line x1=\"" << fixed(left) << "\" y1=\"" << fixed(y) << "\" x2=\""
        << fixed(left + plot_w) << "\" y2=\"" << fixed(y) << "\" stroke=\"#dddddd\"/>"
        << "<text x=\"" << fixed(left - 4) << "\" y=\"" << fixed(y + 3)
        << "\" text-anchor=\"end\">" << fixed(v) << "</text>\n";
  }

  for (std::size_t i = 0; i < n; ++i)
  {
    const auto& t = summary.trials[i];
    const double x = left + pair_w * static_cast<double>(i) + 2.0;
    const auto bar = [&](const std::optional<MissionResult>& r, double dx, const char* colour)
      {
        if (!r)
          return;

        const double y = y_of(value(*r));
        out << "<rect x=\"" << fixed(x + dx) << "\" y=\"" << fixed(y) << "\" width=\""
            << fixed(bar_w) << "\" height=\"" << fixed(upper + plot_h - y)
            << "\" fill=\"" << colour << "\"/>\n";
      };

    bar(t.sp, 0.0, "#d62728");
    bar(t.cp, bar_w, "#1f77b4");
    if (i % 5 == 0)
    {
      out << "<text x=\"" << fixed(x + bar_w) << "\" y=\"" << fixed(upper + plot_h + 14)
          << "\" text-anchor=\"middle\">" << t.spec.trial_id << "</text>\n";
    }
  }

  out << "<line x1=\"" << fixed(left) << "\" y1=\"" << fixed(upper + plot_h) << "\" x2=\""
      << fixed(left + plot_w) << "\" y2=\"" << fixed(upper + plot_h) << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << fixed(left + plot_w / 2) << "\" y=\"" << fixed(height - 6)
      << "\" text-anchor=\"middle\">trial</text>\n"
      << "</svg>\n";
  return out.str();
}

//==============================================================================
void write_text_file(const std::filesystem::path& path, const std::string& text)
{
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file)
    throw std::runtime_error("cannot write " + path.string());

  file << text;
  if (!file)
    throw std::runtime_error("failed writing " + path.string());
}

//==============================================================================
void write_report(const ExperimentSummary& summary, const std::filesystem::path& out_dir)
{
  std::filesystem::create_directories(out_dir);
  write_text_file(out_dir / "trials.csv", trials_csv(summary));
  write_text_file(out_dir / "summary.txt", summary_text(summary));
  write_text_file(out_dir / "distance.svg", chart_svg(summary, ChartMetric::Distance));
  write_text_file(out_dir / "time.svg", chart_svg(summary, ChartMetric::Time));
  write_text_file(out_dir / "replans.svg", chart_svg(summary, ChartMetric::Replans));
}

namespace {

//==============================================================================
const char* cost_colour(std::uint8_t c)
{
  if (c == cost::Lethal)
    return "#ff00ff";

  if (c == cost::Inscribed)
    return "#00ffff";

  if (c > cost::Free)
    return "#1a237e";

  return "#000000";
}

//==============================================================================
void render_panel(
  std::ostringstream& out,
  const std::string& label,
  const Costmap& map,
  const TrialResult& trial,
  const MissionResult& result,
  std::size_t plan,
  double ox,
  double oy,
  int scale)
{
  out << "<g transform=\"translate(" << fixed(ox) << "," << fixed(oy) << ")\">\n"
      << "<text x=\"0\" y=\"-6\" font-size=\"13\">" << label << "</text>\n";

  for (int y = 0; y < map.height(); ++y)
  {
    int x = 0;
    while (x < map.width())
    {
      const char* colour = cost_colour(map.cost(Cell{x, y}));
      int end = x + 1;
      while (end < map.width() && cost_colour(map.cost(Cell{end, y})) == colour)
        ++end;

      out << "<rect x=\"" << x * scale << "\" y=\"" << y * scale << "\" width=\""
          << (end - x) * scale << "\" height=\"" << scale << "\" fill=\""
          << colour << "\"/>\n";
      x = end;
    }
  }

  for (const auto& f : trial.spec.obstacle_footprints)
  {
    out << "<rect x=\"" << f.x0 * scale << "\" y=\"" << f.y0 * scale << "\" width=\""
        << (f.x1 - f.x0 + 1) * scale << "\" height=\"" << (f.y1 - f.y0 + 1) * scale
        << "\" fill=\"none\" stroke=\"#ffeb3b\" stroke-dasharray=\"3,2\"/>\n";
  }

  const auto polyline = [&](auto begin, auto end, const char* colour, double w)
    {
      out << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\""
          << fixed(w) << "\" points=\"";
      for (auto it = begin; it != end; ++it)
      {
        out << fixed((it->x + 0.5) * scale) << "," << fixed((it->y + 0.5) * scale) << " ";
      }

      out << "\"/>\n";
    };

  const auto& waypoints = result.plans[plan].waypoints;
  polyline(waypoints.begin(), waypoints.end(), "#4caf50", 1.0);

  const std::size_t from = result.plan_starts[plan];
  const std::size_t to = plan + 1 < result.plan_starts.size()
    ? result.plan_starts[plan + 1] + 1 : result.trajectory.size();
  polyline(result.trajectory.begin() + static_cast<std::ptrdiff_t>(from),
    result.trajectory.begin() + static_cast<std::ptrdiff_t>(to), "#ff5722", 2.0);

  const auto& m = trial.spec.mission;
  out << "<circle cx=\"" << fixed((m.start.x + 0.5) * scale) << "\" cy=\""
      << fixed((m.start.y + 0.5) * scale) << "\" r=\"" << 2 * scale << "\" fill=\"#ffffff\"/>\n"
      << "<circle cx=\"" << fixed((m.goal.x + 0.5) * scale) << "\" cy=\""
      << fixed((m.goal.y + 0.5) * scale) << "\" r=\"" << 2 * scale << "\" fill=\"#ffeb3b\"/>\n"
      << "</g>\n";
}

} // anonymous namespace

//==============================================================================
std::string render_trial_svg(const WorldModel& world, const TrialResult& trial)
{
  struct Panel
  {
    std::string label;
    const MissionResult* result;
    std::size_t plan;
  };

  std::vector<Panel> panels;
  for (const auto* r : {&trial.sp, &trial.cp})
  {
    if (!*r)
      continue;

    const MissionResult& m = **r;
    if (m.plan_costmaps.size() != m.plans.size())
      throw std::invalid_argument("mission was run without recorded costmaps");

    for (std::size_t i = 0; i < m.plans.size(); ++i)
    {
      panels.push_back({std::string(to_string(m.mode)) + " plan " + std::to_string(i + 1)
        + " of " + std::to_string(m.plans.size()), &m, i});
    }
  }

  const int scale = std::max(1, 800 / std::max(1, world.width()));
  const double margin = 24.0;
  const double panel_w = world.width() * scale;
  const double panel_h = world.height() * scale;
  const double width = panel_w + 2 * margin;
  const double height =
    static_cast<double>(panels.size()) * (panel_h + margin) + margin;

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(width)
      << "\" height=\"" << fixed(height)
      << "\" font-family=\"sans-serif\" shape-rendering=\"crispEdges\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  for (std::size_t i = 0; i < panels.size(); ++i)
  {
    const auto& p = panels[i];
    render_panel(out, p.label, p.result->plan_costmaps[p.plan], trial, *p.result,
      p.plan, margin, margin + static_cast<double>(i) * (panel_h + margin), scale);
  }

  out << "</svg>\n";
  return out.str();
}

} // namespace cpsim
