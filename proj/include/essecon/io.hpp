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
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "essecon/core_domain.hpp"
#include "essecon/miqp_solver.hpp"
#include "essecon/rolling_engine.hpp"

namespace essecon {

/// Malformed input file. row is the 1-based data row (0 for the header or
/// for config errors); column is the CSV column or config key.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, long row = 0, std::string column = {})
      : std::runtime_error(what), row_(row), column_(std::move(column)) {}
  long row() const { return row_; }
  const std::string& column() const { return column_; }

 private:
  long row_;
  std::string column_;
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(ValidationReport report)
      : std::runtime_error(report.to_string()), report_(std::move(report)) {}
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Time series CSV. Header required; columns may appear in any order:
//   slot, demand_kw, pv_kw, price_purchase, price_sale, rmccp, rmpcp,
//   perf_score, mileage_ratio, reg_up_flag, sr_price
// price_sale may be omitted and is then sale_price_ratio * price_purchase.
std::vector<SlotExogenous> parse_timeseries_csv(std::istream& in, const MarketSpec& market);
std::vector<SlotExogenous> load_timeseries_csv(const std::filesystem::path& path,
                                               const MarketSpec& market);
void write_timeseries_csv(std::ostream& out, const std::vector<SlotExogenous>& series);
void write_timeseries_csv(const std::filesystem::path& path,
                          const std::vector<SlotExogenous>& series);

enum class Experiment { Single, AlphaSweep, HorizonSweep, ForecastStudy };
const char* to_string(Experiment e);
Experiment parse_experiment(const std::string& name);

struct RunConfig {
  std::string series_path;   // relative paths resolve against the config file
  std::string output_dir = "out";
  Experiment experiment = Experiment::Single;
  int horizon = 4;
  std::vector<double> initial_soc{0.5};
  bool use_forecast = false;  // single runs only
  std::vector<double> alpha_grid{50, 100, 150, 200, 250, 300, 350, 400, 450};
  std::vector<int> horizon_grid{1, 2, 4, 6};
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
};

struct Config {
  std::vector<EssSpec> specs;
  MarketSpec market;
  SolverConfig solver;
  ForecastModel forecast = ForecastModel::default_schedule();
  RunConfig run;
};

/// Sectioned key-value config ([ess.N], [aging], [market], [solver],
/// [forecast], [run]). In strict mode an unknown section or key is an error;
/// otherwise it is ignored.
Config parse_config(std::istream& in, bool strict, const std::filesystem::path& base_dir = {});
Config load_config(const std::filesystem::path& path, bool strict);

/// Two units with the stock parameters, defaults everywhere else.
Config default_config();
void write_config(std::ostream& out, const Config& config);

/// Writes ledger.csv, summary.json and plotdata/schedule.csv into dir.
void emit_report(const SimulationReport& report, const std::filesystem::path& dir);

/// Numbers in reports carry this many significant digits.
inline constexpr int kReportDigits = 9;
std::string format_number(double v);

}  // namespace essecon
