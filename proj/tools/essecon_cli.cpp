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

// Command-line front end. Talks to the library only through the C API.

#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "essecon/essecon.h"

namespace {

using Session = std::unique_ptr<essecon_session, decltype(&essecon_session_destroy)>;

int report(essecon_session* s, essecon_status st, const char* what) {
  if (st == ESSECON_OK) return 0;
  std::fprintf(stderr, "essecon: %s failed (%s): %s\n", what, essecon_status_string(st),
               s ? essecon_last_error(s) : "");
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rolling-horizon scheduling and economics of customer-sited storage"};
  app.set_version_flag("--version", std::string(essecon_version()));

  std::string config_path, series_path, experiment, out_dir = "out";
  std::uint64_t seed = 0;
  int horizon = 0;
  bool strict = false;
  app.add_option("--config", config_path, "Sectioned key-value config file");
  app.add_option("--series", series_path, "Time series CSV (overrides the config)");
  app.add_option("--experiment", experiment,
                 "single | alpha-sweep | horizon-sweep | forecast-study");
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();
  auto* seed_opt = app.add_option("--seed", seed, "Forecast seed (replaces the seed list)");
  app.add_option("--horizon", horizon, "Look-ahead horizon in slots")->check(CLI::PositiveNumber);
  app.add_flag("--strict", strict, "Reject unknown config sections and keys");

  auto* gen = app.add_subcommand("gen-fixture", "Write the synthetic fixture week and its config");
  std::string gen_csv = "data/fixture_week.csv", gen_cfg = "data/default.ini";
  std::uint64_t gen_seed = 20160512;
  gen->add_option("--csv", gen_csv, "CSV path")->capture_default_str();
  gen->add_option("--ini", gen_cfg, "Config path")->capture_default_str();
  gen->add_option("--seed", gen_seed, "Generator seed")->capture_default_str();

  auto* dump = app.add_subcommand("dump", "Write one horizon problem in the debug text format");
  int dump_t = 0;
  std::string dump_path = "problem.txt";
  dump->add_option("-t,--time", dump_t, "Decision time (slot index)")->capture_default_str();
  dump->add_option("-o,--output", dump_path, "Output file")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  if (*gen) {
    const auto st = essecon_generate_fixture(gen_csv.c_str(), gen_cfg.c_str(), gen_seed);
    if (st != ESSECON_OK) {
      std::fprintf(stderr, "essecon: gen-fixture failed (%s)\n", essecon_status_string(st));
      return 1;
    }
    std::printf("wrote %s and %s\n", gen_csv.c_str(), gen_cfg.c_str());
    return 0;
  }

  essecon_session* raw = nullptr;
  if (essecon_session_create(&raw) != ESSECON_OK) {
    std::fprintf(stderr, "essecon: cannot create session\n");
    return 1;
  }
  Session session(raw, &essecon_session_destroy);
  essecon_session* s = session.get();

  if (!config_path.empty() &&
      report(s, essecon_load_config(s, config_path.c_str(), strict ? 1 : 0), "loading config"))
    return 1;
  if (!series_path.empty() &&
      report(s, essecon_load_series(s, series_path.c_str()), "loading series"))
    return 1;
  if (!experiment.empty() &&
      report(s, essecon_set_experiment(s, experiment.c_str()), "selecting experiment"))
    return 1;
  if (*seed_opt && report(s, essecon_set_seed(s, seed), "setting seed")) return 1;
  if (horizon > 0 && report(s, essecon_set_horizon(s, horizon), "setting horizon")) return 1;

  if (*dump) {
    if (report(s, essecon_dump_problem(s, dump_t, dump_path.c_str()), "dump")) return 1;
    std::printf("wrote %s\n", dump_path.c_str());
    return 0;
  }

  if (report(s, essecon_run(s, out_dir.c_str()), "run")) return 1;
  const char* summary = nullptr;
  if (report(s, essecon_result_summary(s, &summary), "summary")) return 1;
  std::fputs(summary, stdout);
  return 0;
}
