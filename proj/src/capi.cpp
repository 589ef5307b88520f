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

#include "essecon/essecon.h"

#include <fstream>
#include <new>
#include <optional>
#include <string>

#include "essecon/experiments.hpp"
#include "essecon/fixture.hpp"
#include "essecon/io.hpp"

struct essecon_session {
  essecon::Config config = essecon::default_config();
  std::vector<essecon::SlotExogenous> series;
  std::optional<essecon::ExperimentOutput> result;
  std::string summary;
  std::string error;
};

namespace {

using essecon::Config;

essecon_status fail(essecon_session* s, essecon_status code, const std::string& msg) {
  if (s) s->error = msg;
  return code;
}

/// Maps exceptions thrown by the core onto status codes.
template <typename F>
essecon_status guarded(essecon_session* s, F&& body) {
  try {
    body();
    if (s) s->error.clear();
    return ESSECON_OK;
  } catch (const essecon::ParseError& e) {
    return fail(s, ESSECON_ERR_PARSE, e.what());
  } catch (const essecon::ValidationError& e) {
    return fail(s, ESSECON_ERR_VALIDATION, e.what());
  } catch (const essecon::IoError& e) {
    return fail(s, ESSECON_ERR_IO, e.what());
  } catch (const essecon::SimulationError& e) {
    return fail(s, ESSECON_ERR_SOLVER, e.what());
  } catch (const essecon::SolverError& e) {
    return fail(s, ESSECON_ERR_SOLVER, e.what());
  } catch (const essecon::NumericalError& e) {
    return fail(s, ESSECON_ERR_SOLVER, e.what());
  } catch (const essecon::BuildError& e) {
    return fail(s, ESSECON_ERR_VALIDATION, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(s, ESSECON_ERR_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(s, ESSECON_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(s, ESSECON_ERR_INTERNAL, e.what());
  }
}

}  // namespace

extern "C" {

const char* essecon_version(void) { return "0.1.0"; }

const char* essecon_status_string(essecon_status status) {
  switch (status) {
    case ESSECON_OK: return "ok";
    case ESSECON_ERR_ARGUMENT: return "invalid argument";
    case ESSECON_ERR_IO: return "i/o error";
    case ESSECON_ERR_PARSE: return "parse error";
    case ESSECON_ERR_VALIDATION: return "validation error";
    case ESSECON_ERR_SOLVER: return "solver error";
    case ESSECON_ERR_STATE: return "invalid state";
    case ESSECON_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

essecon_status essecon_session_create(essecon_session** out) {
  if (!out) return ESSECON_ERR_ARGUMENT;
  *out = new (std::nothrow) essecon_session();
  return *out ? ESSECON_OK : ESSECON_ERR_INTERNAL;
}

void essecon_session_destroy(essecon_session* session) { delete session; }

const char* essecon_last_error(const essecon_session* session) {
  return session ? session->error.c_str() : "null session";
}

essecon_status essecon_load_config(essecon_session* s, const char* path, int strict) {
  if (!s || !path) return fail(s, ESSECON_ERR_ARGUMENT, "null argument");
  return guarded(s, [&] {
    Config cfg = essecon::load_config(path, strict != 0);
    std::vector<essecon::SlotExogenous> series;
    if (!cfg.run.series_path.empty())
      series = essecon::load_timeseries_csv(cfg.run.series_path, cfg.market);
    s->config = std::move(cfg);
    if (!series.empty()) s->series = std::move(series);
    s->result.reset();
  });
}

essecon_status essecon_load_series(essecon_session* s, const char* path) {
  if (!s || !path) return fail(s, ESSECON_ERR_ARGUMENT, "null argument");
  return guarded(s, [&] {
    s->series = essecon::load_timeseries_csv(path, s->config.market);
    s->config.run.series_path = path;
    s->result.reset();
  });
}

essecon_status essecon_series_length(const essecon_session* s, size_t* out) {
  if (!s || !out) return ESSECON_ERR_ARGUMENT;
  *out = s->series.size();
  return ESSECON_OK;
}

essecon_status essecon_set_experiment(essecon_session* s, const char* name) {
  if (!s || !name) return fail(s, ESSECON_ERR_ARGUMENT, "null argument");
  try {
    s->config.run.experiment = essecon::parse_experiment(name);
  } catch (const essecon::ParseError& e) {
    return fail(s, ESSECON_ERR_ARGUMENT, e.what());
  }
  s->error.clear();
  return ESSECON_OK;
}

essecon_status essecon_set_seed(essecon_session* s, uint64_t seed) {
  if (!s) return ESSECON_ERR_ARGUMENT;
  s->config.run.seeds = {seed};
  s->config.forecast.seed = seed;
  return ESSECON_OK;
}

essecon_status essecon_set_horizon(essecon_session* s, int horizon) {
  if (!s) return ESSECON_ERR_ARGUMENT;
  if (horizon < 1) return fail(s, ESSECON_ERR_ARGUMENT, "horizon must be >= 1");
  s->config.run.horizon = horizon;
  return ESSECON_OK;
}

essecon_status essecon_run(essecon_session* s, const char* out_dir) {
  if (!s) return ESSECON_ERR_ARGUMENT;
  if (s->series.empty()) return fail(s, ESSECON_ERR_STATE, "no time series loaded");
  s->result.reset();
  return guarded(s, [&] {
    auto output = essecon::run_experiment(s->config, s->series);
    if (out_dir) essecon::write_experiment(output, out_dir);
    s->result = std::move(output);
  });
}

essecon_status essecon_result_run_count(const essecon_session* s, size_t* out) {
  if (!s || !out) return ESSECON_ERR_ARGUMENT;
  if (!s->result) return ESSECON_ERR_STATE;
  *out = s->result->runs.size();
  return ESSECON_OK;
}

essecon_status essecon_result_total(const essecon_session* s, size_t run_index,
                                    essecon_total which, double* out) {
  if (!s || !out) return ESSECON_ERR_ARGUMENT;
  if (!s->result) return ESSECON_ERR_STATE;
  if (run_index >= s->result->runs.size()) return ESSECON_ERR_ARGUMENT;
  const auto& r = s->result->runs[run_index].report;
  switch (which) {
    case ESSECON_R_SC: *out = r.totals.r_sc; break;
    case ESSECON_R_FR: *out = r.totals.r_fr; break;
    case ESSECON_R_SR: *out = r.totals.r_sr; break;
    case ESSECON_R_BR: *out = r.totals.r_br; break;
    case ESSECON_AGING_COST: *out = r.totals.aging_cost; break;
    case ESSECON_NET_PROFIT: *out = r.net_profit; break;
    case ESSECON_BASELINE_PROFIT: *out = r.baseline_profit; break;
    case ESSECON_ESS_ATTRIBUTABLE_PROFIT: *out = r.ess_attributable_profit; break;
    default: return ESSECON_ERR_ARGUMENT;
  }
  return ESSECON_OK;
}

essecon_status essecon_result_summary(essecon_session* s, const char** out) {
  if (!s || !out) return fail(s, ESSECON_ERR_ARGUMENT, "null argument");
  if (!s->result) return fail(s, ESSECON_ERR_STATE, "no result available");
  return guarded(s, [&] {
    s->summary = essecon::experiment_summary_json(*s->result);
    *out = s->summary.c_str();
  });
}

essecon_status essecon_generate_fixture(const char* csv_path, const char* config_path,
                                        uint64_t seed) {
  return guarded(nullptr, [&] {
    essecon::FixtureOptions opts;
    opts.seed = seed;
    const auto series = essecon::generate_fixture(opts);
    if (csv_path) essecon::write_timeseries_csv(csv_path, series);
    if (config_path) {
      std::string rel = "fixture_week.csv";
      if (csv_path) {
        const std::filesystem::path cfg_dir = std::filesystem::path(config_path).parent_path();
        rel = std::filesystem::path(csv_path).lexically_relative(cfg_dir.empty() ? "." : cfg_dir)
                  .string();
        if (rel.empty()) rel = csv_path;
      }
      std::ofstream out(config_path, std::ios::binary);
      if (!out) throw essecon::IoError(std::string("cannot write ") + config_path);
      essecon::write_config(out, essecon::fixture_config(rel));
      if (!out) throw essecon::IoError(std::string("write failed: ") + config_path);
    }
  });
}

essecon_status essecon_dump_problem(essecon_session* s, int t, const char* path) {
  if (!s || !path) return fail(s, ESSECON_ERR_ARGUMENT, "null argument");
  if (s->series.empty()) return fail(s, ESSECON_ERR_STATE, "no time series loaded");
  const int n = static_cast<int>(s->series.size());
  if (t < 0 || t >= n) return fail(s, ESSECON_ERR_ARGUMENT, "decision time out of range");
  return guarded(s, [&] {
    const auto& c = s->config;
    const int len = std::min(c.run.horizon, n - t);
    essecon::SocState state;
    state.soc = c.run.initial_soc.size() == 1
                    ? std::vector<double>(c.specs.size(), c.run.initial_soc.front())
                    : c.run.initial_soc;
    const auto instance = essecon::build_problem(
        t, std::span(s->series).subspan(static_cast<std::size_t>(t), static_cast<std::size_t>(len)),
        state, c.specs, c.market);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw essecon::IoError(std::string("cannot write ") + path);
    essecon::write_problem_text(instance, out);
  });
}

}  // extern "C"
