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

#ifndef CPSIM__REPORT_HPP
#define CPSIM__REPORT_HPP

#include <cpsim/harness.hpp>

#include <filesystem>
#include <string>

namespace cpsim {

/// Shortest decimal string that parses back to exactly `value`.
/// NaN is written as "nan".
std::string format_double(double value);

/// Per-trial table with a header row. Columns are fixed.
std::string trials_csv(const ExperimentSummary& summary);

/// Human-readable aggregate metrics.
std::string summary_text(const ExperimentSummary& summary);

enum class ChartMetric
{
  Distance,
  Time,
  Replans
};

/// Paired per-trial bar chart (SP next to CP) as an SVG document.
std::string chart_svg(const ExperimentSummary& summary, ChartMetric metric);

/// Writes trials.csv, summary.txt, distance.svg, time.svg and replans.svg
/// into `out_dir`, creating it if needed.
void write_report(const ExperimentSummary& summary, const std::filesystem::path& out_dir);

/// Costmap and executed path of each plan of a trial, as an SVG document.
/// One panel per SP plan followed by one panel per CP plan. The mission
/// results must have been run with record_costmaps set.
std::string render_trial_svg(const WorldModel& world, const TrialResult& trial);

/// Writes `text` to `path`, throwing std::runtime_error on failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);

} // namespace cpsim

#endif // CPSIM__REPORT_HPP
