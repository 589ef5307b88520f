// Copyright 2026 The essecon Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "essecon/io.hpp"
#include "essecon/rolling_engine.hpp"

namespace essecon {

struct ScenarioRun {
  std::string label;  // unique within an experiment, used as a directory name
  double alpha = 0.0;
  int horizon = 0;
  std::optional<std::uint64_t> seed;  // set when a forecast model was used
  SimulationReport report;
};

struct ExperimentOutput {
  Experiment experiment = Experiment::Single;
  /// For forecast-study the first run is the perfect-forecast reference.
  std::vector<ScenarioRun> runs;
};

using ProgressFn = std::function<void(const std::string&)>;

/// Runs the experiment selected in config.run on the given series.
/// single: one run at the configured horizon and capital cost.
/// alpha-sweep: one perfect-forecast run per alpha_grid entry.
/// horizon-sweep: one perfect-forecast run per horizon_grid entry.
/// forecast-study: a perfect-forecast reference plus one run per seed.
ExperimentOutput run_experiment(const Config& config, std::span<const SlotExogenous> series,
                                const ProgressFn& progress = {});

/// Writes summary.json, plotdata/*.csv and one ledger per run. For a single
/// run the layout is that of emit_report.
void write_experiment(const ExperimentOutput& output, const std::filesystem::path& dir);

/// The document written to summary.json.
std::string experiment_summary_json(const ExperimentOutput& output);

/// Config shipped with the synthetic fixture week: the stock units at
/// alpha = 100, horizon 4, and storage starting empty (SOC at its floor).
Config fixture_config(const std::string& series_path = "fixture_week.csv");

/// Specs with every unit's capital cost set to alpha.
std::vector<EssSpec> with_capital_cost(std::span<const EssSpec> specs, double alpha);

}  // namespace essecon
