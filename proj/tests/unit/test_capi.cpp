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

// Exercises the library through the C interface only.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "essecon/essecon.h"

namespace fs = std::filesystem;

namespace {

struct Session {
  essecon_session* s = nullptr;
  Session() { REQUIRE(essecon_session_create(&s) == ESSECON_OK); }
  ~Session() { essecon_session_destroy(s); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path d = fs::current_path() / ("capi_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

// Fixture files with the series cut to its first rows so runs stay short.
fs::path short_fixture(const std::string& name, int rows) {
  const auto d = scratch(name);
  const auto csv = (d / "fixture_week.csv").string(), ini = (d / "run.ini").string();
  REQUIRE(essecon_generate_fixture(csv.c_str(), ini.c_str(), 20160512) == ESSECON_OK);
  std::istringstream in(slurp(csv));
  std::ofstream out(csv, std::ios::trunc);
  std::string line;
  for (int k = 0; k <= rows && std::getline(in, line); ++k) out << line << '\n';
  return d;
}

}  // namespace

TEST_CASE("version and status strings") {
  CHECK(std::string(essecon_version()).size() > 0);
  for (int c = ESSECON_OK; c <= ESSECON_ERR_INTERNAL; ++c)
    CHECK(std::string(essecon_status_string(static_cast<essecon_status>(c))).size() > 0);
}

TEST_CASE("null arguments are rejected") {
  CHECK(essecon_session_create(nullptr) == ESSECON_ERR_ARGUMENT);
  essecon_session_destroy(nullptr);
  Session s;
  size_t n = 0;
  double v = 0.0;
  const char* text = nullptr;
  CHECK(essecon_load_config(nullptr, "x.ini", 1) == ESSECON_ERR_ARGUMENT);
  CHECK(essecon_load_config(s.s, nullptr, 1) == ESSECON_ERR_ARGUMENT);
  CHECK(essecon_load_series(s.s, nullptr) == ESSECON_ERR_ARGUMENT);
  CHECK(essecon_series_length(s.s, nullptr) == ESSECON_ERR_ARGUMENT);
  CHECK(essecon_set_experiment(s.s, nullptr) == ESSECON_ERR_ARGUMENT);
  CHECK(essecon_result_run_count(nullptr, &n) == ESSECON_ERR_ARGUMENT);
  CHECK(essecon_result_total(s.s, 0, ESSECON_NET_PROFIT, nullptr) == ESSECON_ERR_ARGUMENT);
  CHECK(essecon_result_summary(s.s, nullptr) == ESSECON_ERR_ARGUMENT);
  CHECK(essecon_dump_problem(s.s, 0, nullptr) == ESSECON_ERR_ARGUMENT);
  CHECK(essecon_set_horizon(s.s, 0) == ESSECON_ERR_ARGUMENT);
  CHECK(essecon_result_total(s.s, 0, ESSECON_NET_PROFIT, &v) == ESSECON_ERR_STATE);
  CHECK(essecon_result_summary(s.s, &text) == ESSECON_ERR_STATE);
}

TEST_CASE("calls out of order report a state error") {
  Session s;
  size_t n = 99;
  CHECK(essecon_series_length(s.s, &n) == ESSECON_OK);
  CHECK(n == 0);
  CHECK(essecon_run(s.s, nullptr) == ESSECON_ERR_STATE);
  CHECK(std::string(essecon_last_error(s.s)).find("series") != std::string::npos);
  CHECK(essecon_result_run_count(s.s, &n) == ESSECON_ERR_STATE);
  CHECK(essecon_dump_problem(s.s, 0, "p.txt") == ESSECON_ERR_STATE);
}

TEST_CASE("file and parse errors carry messages") {
  Session s;
  CHECK(essecon_load_series(s.s, "/nonexistent/week.csv") == ESSECON_ERR_IO);
  CHECK(std::string(essecon_last_error(s.s)).size() > 0);
  CHECK(essecon_load_config(s.s, "/nonexistent/run.ini", 1) == ESSECON_ERR_IO);

  const auto d = scratch("errors");
  {
    std::ofstream bad(d / "bad.csv");
    bad << "slot,demand_kw,pv_kw,price_purchase,price_sale,rmccp,rmpcp,perf_score,"
           "mileage_ratio,reg_up_flag,sr_price\n"
           "0,100,0,0.2,0.12,0.02,0.004,0.9,2,7,0.01\n";
    std::ofstream typo(d / "typo.ini");
    typo << "[market]\nslot_hour = 1\n";
  }
  CHECK(essecon_load_series(s.s, (d / "bad.csv").string().c_str()) == ESSECON_ERR_PARSE);
  CHECK(std::string(essecon_last_error(s.s)).find("row 1") != std::string::npos);
  CHECK(essecon_load_config(s.s, (d / "typo.ini").string().c_str(), 1) == ESSECON_ERR_PARSE);
  CHECK(essecon_load_config(s.s, (d / "typo.ini").string().c_str(), 0) == ESSECON_OK);
  CHECK(std::string(essecon_last_error(s.s)).empty());
  CHECK(essecon_set_experiment(s.s, "sweep") == ESSECON_ERR_ARGUMENT);
  CHECK(essecon_set_experiment(s.s, "alpha-sweep") == ESSECON_OK);
  fs::remove_all(d);
}

TEST_CASE("generated fixture loads as a full week") {
  const auto d = scratch("week");
  const auto csv = (d / "fixture_week.csv").string(), ini = (d / "run.ini").string();
  REQUIRE(essecon_generate_fixture(csv.c_str(), ini.c_str(), 20160512) == ESSECON_OK);
  Session s;
  REQUIRE(essecon_load_config(s.s, ini.c_str(), 1) == ESSECON_OK);
  size_t n = 0;
  REQUIRE(essecon_series_length(s.s, &n) == ESSECON_OK);
  CHECK(n == 168);
  fs::remove_all(d);
}

TEST_CASE("single run totals and report files") {
  const auto d = short_fixture("single", 12);
  Session s;
  REQUIRE(essecon_load_config(s.s, (d / "run.ini").string().c_str(), 1) == ESSECON_OK);
  REQUIRE(essecon_set_horizon(s.s, 3) == ESSECON_OK);
  const auto out = (d / "out").string();
  REQUIRE(essecon_run(s.s, out.c_str()) == ESSECON_OK);

  size_t runs = 0;
  REQUIRE(essecon_result_run_count(s.s, &runs) == ESSECON_OK);
  CHECK(runs == 1);
  double t[8];
  for (int k = 0; k < 8; ++k)
    REQUIRE(essecon_result_total(s.s, 0, static_cast<essecon_total>(k), &t[k]) == ESSECON_OK);
  const double net = t[ESSECON_R_SC] + t[ESSECON_R_FR] + t[ESSECON_R_SR] + t[ESSECON_R_BR] -
                     t[ESSECON_AGING_COST];
  CHECK(std::abs(net - t[ESSECON_NET_PROFIT]) <= 1e-9 * std::abs(net));
  CHECK(t[ESSECON_ESS_ATTRIBUTABLE_PROFIT] ==
        t[ESSECON_NET_PROFIT] - t[ESSECON_BASELINE_PROFIT]);
  double v = 0.0;
  CHECK(essecon_result_total(s.s, 1, ESSECON_NET_PROFIT, &v) == ESSECON_ERR_ARGUMENT);
  CHECK(essecon_result_total(s.s, 0, static_cast<essecon_total>(42), &v) ==
        ESSECON_ERR_ARGUMENT);

  const char* summary = nullptr;
  REQUIRE(essecon_result_summary(s.s, &summary) == ESSECON_OK);
  REQUIRE(summary != nullptr);
  CHECK(std::string(summary).find("\"ess_attributable_profit\"") != std::string::npos);
  CHECK(fs::exists(fs::path(out) / "ledger.csv"));
  CHECK(slurp(fs::path(out) / "summary.json") == summary);
  fs::remove_all(d);
}

TEST_CASE("same seed gives byte-identical files") {
  const auto d = short_fixture("determinism", 10);
  std::string files[2][2];
  for (int k = 0; k < 2; ++k) {
    Session s;
    REQUIRE(essecon_load_config(s.s, (d / "run.ini").string().c_str(), 1) == ESSECON_OK);
    REQUIRE(essecon_set_experiment(s.s, "forecast-study") == ESSECON_OK);
    REQUIRE(essecon_set_seed(s.s, 17) == ESSECON_OK);
    REQUIRE(essecon_set_horizon(s.s, 3) == ESSECON_OK);
    const auto out = d / ("out" + std::to_string(k));
    REQUIRE(essecon_run(s.s, out.string().c_str()) == ESSECON_OK);
    size_t runs = 0;
    REQUIRE(essecon_result_run_count(s.s, &runs) == ESSECON_OK);
    CHECK(runs == 2);
    files[k][0] = slurp(out / "summary.json");
    files[k][1] = slurp(out / "runs" / "seed_17" / "ledger.csv");
  }
  CHECK(files[0][0].size() > 0);
  CHECK(files[0][1].size() > 0);
  CHECK(files[0][0] == files[1][0]);
  CHECK(files[0][1] == files[1][1]);
  fs::remove_all(d);
}

TEST_CASE("problem dump") {
  const auto d = short_fixture("dump", 6);
  Session s;
  REQUIRE(essecon_load_config(s.s, (d / "run.ini").string().c_str(), 1) == ESSECON_OK);
  REQUIRE(essecon_set_horizon(s.s, 2) == ESSECON_OK);
  const auto path = (d / "p.txt").string();
  REQUIRE(essecon_dump_problem(s.s, 1, path.c_str()) == ESSECON_OK);
  const auto text = slurp(path);
  CHECK(text.find("# decision_time 1 horizon 2") == 0);
  CHECK(text.find("binary mode[0,1]") != std::string::npos);
  CHECK(text.find("epigraph") != std::string::npos);
  CHECK(essecon_dump_problem(s.s, 6, path.c_str()) == ESSECON_ERR_ARGUMENT);
  fs::remove_all(d);
}
