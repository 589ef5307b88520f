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

// Report writers shared by io.cpp and experiments.cpp. Not installed.

#pragma once

#include <filesystem>
#include <fstream>
#include <ostream>

#include "essecon/rolling_engine.hpp"
#include "json.hpp"

namespace essecon {

/// v rounded to the report precision.
double round_report(double v);

/// Totals, baseline, attributable profit and solver counters of one run.
nlohmann::ordered_json totals_json(const SimulationReport& report);

void write_ledger_csv(std::ostream& out, const SimulationReport& report);
void write_schedule_csv(std::ostream& out, const SimulationReport& report);

/// Opens path for binary writing, creating parent directories.
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace essecon
