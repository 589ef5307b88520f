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

#include "essecon/experiments.hpp"

#include "report_json.hpp"

namespace essecon {

namespace fs = std::filesystem;

std::vector<EssSpec> with_capital_cost(std::span<const EssSpec> specs, double alpha) {
  std::vector<EssSpec> out(specs.begin(), specs.end());
  for (auto& s : out) s.unit_capital_cost = alpha;
  return out;
}

Config fixture_config(const std::string& series_path) {
  Config c = default_config();
  c.run.series_path = series_path;
  c.run.initial_soc = {0.2};
  return c;
}

namespace {

SimulationOptions base_options(const Config& c) {
  SimulationOptions o;
  o.horizon = c.run.horizon;
  o.initial_soc = c.run.initial_soc;
  return o;
}

ScenarioRun simulate(std::string label, double alpha, std::span<const EssSpec> specs,
                     std::span<const SlotExogenous> series, const Config& c,
                     const SimulationOptions& o, const ProgressFn& progress) {
  if (progress) progress(label);
  ScenarioRun run;
  run.label = std::move(label);
  run.alpha = alpha;
  run.horizon = o.horizon;
  if (o.forecast) run.seed = o.forecast->seed;
  try {
    run.report = run_simulation(series, specs, c.market, o, c.solver);
  } catch (const std::exception& e) {
    throw std::runtime_error("scenario " + run.label + ": " + e.what());
  }
  return run;
}

}  // namespace

ExperimentOutput run_experiment(const Config& c, std::span<const SlotExogenous> series,
                                const ProgressFn& progress) {
  if (c.specs.empty()) throw std::invalid_argument("run_experiment: no storage units configured");
  ExperimentOutput out;
  out.experiment = c.run.experiment;
  const double base_alpha = c.specs.front().unit_capital_cost;

  switch (c.run.experiment) {
    case Experiment::Single: {
      auto o = base_options(c);
      if (c.run.use_forecast) o.forecast = c.forecast;
      out.runs.push_back(simulate("single", base_alpha, c.specs, series, c, o, progress));
      break;
    }
    case Experiment::AlphaSweep: {
      for (double alpha : c.run.alpha_grid) {
        const auto specs = with_capital_cost(c.specs, alpha);
        out.runs.push_back(simulate("alpha_" + format_number(alpha), alpha, specs, series, c,
                                    base_options(c), progress));
      }
      break;
    }
    case Experiment::HorizonSweep: {
      for (int h : c.run.horizon_grid) {
        auto o = base_options(c);
        o.horizon = h;
        out.runs.push_back(
            simulate("H_" + std::to_string(h), base_alpha, c.specs, series, c, o, progress));
      }
      break;
    }
    case Experiment::ForecastStudy: {
      out.runs.push_back(
          simulate("perfect", base_alpha, c.specs, series, c, base_options(c), progress));
      for (auto seed : c.run.seeds) {
        auto o = base_options(c);
        o.forecast = c.forecast;
        o.forecast->seed = seed;
        out.runs.push_back(simulate("seed_" + std::to_string(seed), base_alpha, c.specs, series,
                                    c, o, progress));
      }
      break;
    }
  }
  return out;
}

std::string experiment_summary_json(const ExperimentOutput& out) {
  nlohmann::ordered_json j;
  j["experiment"] = to_string(out.experiment);
  if (out.experiment == Experiment::Single) {
    j.update(totals_json(out.runs.front().report));
    return j.dump(2) + "\n";
  }
  auto runs = nlohmann::ordered_json::array();
  const double reference =
      out.experiment == Experiment::ForecastStudy ? out.runs.front().report.net_profit : 0.0;
  for (const auto& r : out.runs) {
    nlohmann::ordered_json e;
    e["label"] = r.label;
    e["alpha"] = round_report(r.alpha);
    e["horizon"] = r.horizon;
    if (r.seed) e["seed"] = *r.seed;
    e.update(totals_json(r.report));
    if (out.experiment == Experiment::ForecastStudy && r.seed)
      e["difference_vs_perfect"] = round_report(r.report.net_profit - reference);
    runs.push_back(std::move(e));
  }
  j["runs"] = std::move(runs);
  return j.dump(2) + "\n";
}

void write_experiment(const ExperimentOutput& out, const fs::path& dir) {
  if (out.runs.empty()) throw std::invalid_argument("write_experiment: no runs");
  if (out.experiment == Experiment::Single) {
    emit_report(out.runs.front().report, dir);
    return;
  }
  for (const auto& r : out.runs) {
    auto f = open_output(dir / "runs" / r.label / "ledger.csv");
    write_ledger_csv(f, r.report);
    if (!f) throw IoError("write failed: " + (dir / "runs" / r.label / "ledger.csv").string());
  }

  const char* plot_name = out.experiment == Experiment::AlphaSweep     ? "alpha_sweep.csv"
                          : out.experiment == Experiment::HorizonSweep ? "horizon_sweep.csv"
                                                                       : "forecast_study.csv";
  auto plot = open_output(dir / "plotdata" / plot_name);
  if (out.experiment == Experiment::ForecastStudy) {
    const double reference = out.runs.front().report.net_profit;
    plot << "seed,net_profit,reference_profit,difference,relative_difference\n";
    for (const auto& r : out.runs) {
      if (!r.seed) continue;
      const double diff = r.report.net_profit - reference;
      plot << *r.seed << ',' << format_number(r.report.net_profit) << ','
           << format_number(reference) << ',' << format_number(diff) << ','
           << format_number(reference != 0.0 ? diff / reference : 0.0) << '\n';
    }
  } else {
    plot << (out.experiment == Experiment::AlphaSweep ? "alpha" : "horizon")
         << ",net_profit,baseline_profit,ess_attributable_profit,R_sc,R_fr,R_sr,R_br,aging_cost\n";
    for (const auto& r : out.runs) {
      const auto& rep = r.report;
      plot << (out.experiment == Experiment::AlphaSweep ? format_number(r.alpha)
                                                         : std::to_string(r.horizon))
           << ',' << format_number(rep.net_profit) << ',' << format_number(rep.baseline_profit)
           << ',' << format_number(rep.ess_attributable_profit) << ','
           << format_number(rep.totals.r_sc) << ',' << format_number(rep.totals.r_fr) << ','
           << format_number(rep.totals.r_sr) << ',' << format_number(rep.totals.r_br) << ','
           << format_number(rep.totals.aging_cost) << '\n';
    }
  }
  if (!plot) throw IoError("write failed: " + (dir / "plotdata" / plot_name).string());

  auto summary = open_output(dir / "summary.json");
  summary << experiment_summary_json(out);
  if (!summary) throw IoError("write failed: " + (dir / "summary.json").string());
}

}  // namespace essecon
