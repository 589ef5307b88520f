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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "essecon/fixture.hpp"
#include "essecon/miqp_solver.hpp"
#include "essecon/problem_builder.hpp"
#include "support/scenarios.hpp"

using namespace essecon;

namespace {

std::vector<EssSpec> stock_units() { return {table_one_type1(), table_one_type2()}; }

ProblemInstance fixture_instance(int t, int horizon, std::vector<double> soc = {0.5, 0.5}) {
  static const auto series = generate_fixture();
  return build_problem(t, std::span(series).subspan(t, horizon), SocState{std::move(soc)},
                       stock_units(), MarketSpec{});
}

LpModel relaxation_model(const ProblemInstance& p) {
  LpModel m;
  for (const auto& c : p.columns) {
    m.cost.push_back(0.0);
    m.col_lower.push_back(c.lower);
    m.col_upper.push_back(c.upper);
  }
  m.rows = p.rows;
  return m;
}

double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

double services_net(const ProblemInstance& p, const std::vector<double>& x) {
  const auto decisions = recover_service_split(p, x);
  double total = 0.0;
  for (std::size_t k = 0; k < decisions.size(); ++k)
    total += slot_services(decisions[k], p.horizon_data[k], p.specs, p.market).net();
  return total;
}

// Interval of z allowed by the four McCormick rows at fixed v and p^sr.
std::pair<double, double> mccormick_interval(double v, double p, double pmax) {
  EssColumns c;
  c.mccormick = 0;
  c.reserve = 1;
  c.mode = 2;
  LpModel m;
  m.cost = {1.0, 0.0, 0.0};
  m.col_lower = {-kInf, p, v};
  m.col_upper = {kInf, p, v};
  m.rows = mccormick_rows(c, pmax);
  const auto lo = solve_lp(m);
  m.cost[0] = -1.0;
  const auto hi = solve_lp(m);
  REQUIRE(lo.status == LpStatus::Optimal);
  REQUIRE(hi.status == LpStatus::Optimal);
  return {lo.values[0], hi.values[0]};
}

}  // namespace

TEST_CASE("two units over four slots: column and row inventory") {
  const auto p = fixture_instance(0, 4);
  CHECK(p.num_continuous() == 72);
  CHECK(p.binaries.size() == 16);
  CHECK(p.num_columns() == 88);
  CHECK(p.epigraphs.size() == 2 * 4 * 3);
  int soc_rows = 0;
  for (const auto& r : p.rows) soc_rows += r.name.rfind("soc_", 0) == 0;
  CHECK(soc_rows == 2 * 2 * 4);
  for (int b : p.binaries) {
    CHECK(p.columns[b].binary);
    CHECK(p.columns[b].lower == 0.0);
    CHECK(p.columns[b].upper == 1.0);
  }
  CHECK(p.column("mode[1,3]") == p.slots[3].ess[1].mode);
  CHECK(p.column("renewable_export[2]") == p.slots[2].renewable_export);
  CHECK_THROWS_AS(p.column("nope"), std::out_of_range);
}

TEST_CASE("decision time offsets the column names") {
  const auto p = fixture_instance(10, 2);
  CHECK(p.decision_time == 10);
  CHECK(p.column("charge_total[0,11]") == p.slots[1].ess[0].charge);
}

TEST_CASE("upward regulation slot forbids regulation charging") {
  SlotExogenous x;
  x.demand = 100.0;
  x.renewable = 0.0;
  x.price_purchase = 0.1;
  x.price_sale = 0.06;
  x.price_rmccp = 0.03;
  x.price_rmpcp = 0.01;
  x.reg_up_flag = 1;
  const std::vector<EssSpec> specs{table_one_type1()};
  const std::vector<SlotExogenous> h{x};
  const auto p = build_problem(0, h, SocState{{0.5}}, specs, MarketSpec{});
  auto m = relaxation_model(p);
  m.cost[p.slots[0].ess[0].charge_regulation] = -1.0;
  const auto s = solve_lp(m);
  REQUIRE(s.status == LpStatus::Optimal);
  CHECK(s.values[p.slots[0].ess[0].charge_regulation] == 0.0);
  CHECK(s.objective == 0.0);
}

TEST_CASE("an unreachable reserve minimum keeps reserve participation at zero") {
  MarketSpec market;
  market.reserve_min_power = 74.0 + 113.0 + 1.0;
  const auto series = generate_fixture();
  const auto specs = stock_units();
  const auto p = build_problem(0, std::span(series).subspan(0, 2), SocState{{0.5, 0.5}}, specs,
                               market);
  for (int k = 0; k < 2; ++k) {
    auto m = relaxation_model(p);
    m.cost[p.slots[k].reserve_participate] = -1.0;
    const auto s = solve_lp(m);
    REQUIRE(s.status == LpStatus::Optimal);
    CHECK(s.values[p.slots[k].reserve_participate] == doctest::Approx(0.0));
  }
  const auto r = solve(p);
  REQUIRE(r.status == SolveStatus::Optimal);
  for (const auto& d : r.decisions) CHECK(d.reserve_participate == 0);
}

TEST_CASE("McCormick rows pin z at binary v and bound it at v = 0.5") {
  const auto [a0, b0] = mccormick_interval(0.0, 50.0, 74.0);
  CHECK(a0 == 0.0);
  CHECK(b0 == 0.0);
  const auto [a1, b1] = mccormick_interval(1.0, 50.0, 74.0);
  CHECK(a1 == doctest::Approx(50.0).epsilon(1e-12));
  CHECK(b1 == doctest::Approx(50.0).epsilon(1e-12));
  const auto [ah, bh] = mccormick_interval(0.5, 50.0, 74.0);
  CHECK(ah == doctest::Approx(13.0).epsilon(1e-12));
  CHECK(bh == doctest::Approx(37.0).epsilon(1e-12));
  EssColumns c;
  c.mccormick = 0;
  c.reserve = 1;
  c.mode = 2;
  CHECK(mccormick_rows(c, 74.0).size() == 4);
}

TEST_CASE("invalid inputs are rejected") {
  const auto series = generate_fixture();
  const auto specs = stock_units();
  const auto two = std::span(series).subspan(0, 2);
  CHECK_THROWS_AS(build_problem(0, {}, SocState{{0.5, 0.5}}, specs, MarketSpec{}), BuildError);
  CHECK_THROWS_AS(build_problem(0, two, SocState{{0.5}}, specs, MarketSpec{}), BuildError);
  CHECK_THROWS_AS(build_problem(0, two, SocState{{0.1, 0.5}}, specs, MarketSpec{}), BuildError);
  auto bad = std::vector<SlotExogenous>(two.begin(), two.end());
  bad[1].demand = -1.0;
  CHECK_THROWS_AS(build_problem(0, bad, SocState{{0.5, 0.5}}, specs, MarketSpec{}), BuildError);
}

TEST_CASE("consolidated objective equals the revenue sum at random feasible points") {
  std::mt19937_64 rng(404);
  int instances = 0;
  for (int k = 0; k < 12; ++k) {
    const auto r = testsupport::random_instance(rng, 1 + k % 2, 1 + k % 4);
    const auto points = testsupport::random_feasible_points(r.instance, rng, 100);
    REQUIRE_FALSE(points.empty());
    ++instances;
    for (const auto& x : points) {
      const auto feas = check_feasibility(r.instance, x);
      REQUIRE(feas.linear <= 1e-7);
      REQUIRE(feas.epigraph <= 1e-9);
      CHECK(rel_diff(services_net(r.instance, x), -r.instance.objective_value(x)) <= 1e-9);
    }
  }
  CHECK(instances == 12);
}

TEST_CASE("the doubled renewable-charging coefficient reproduces the energy revenues") {
  std::mt19937_64 rng(17);
  int checked = 0;
  while (checked < 20) {
    auto r = testsupport::random_instance(rng, 2, 1);
    if (r.horizon[0].renewable <= 1.0) continue;
    auto points = testsupport::random_feasible_points(r.instance, rng, 1);
    REQUIRE_FALSE(points.empty());
    auto x = points[0];
    const auto& p = r.instance;
    const auto& sc = p.slots[0];
    double pre_c = 0.0;
    for (const auto& c : sc.ess) pre_c += x[c.charge_renewable];
    if (pre_c <= 1e-6) continue;
    const auto d = recover_service_split(p, x)[0];
    const auto s = slot_services(d, p.horizon_data[0], p.specs, p.market);
    // Energy part of the objective: every term except reserve and aging.
    double energy = 0.0;
    for (std::size_t j = 0; j < p.columns.size(); ++j) energy -= p.columns[j].objective * x[j];
    for (const auto& c : sc.ess) {
      energy += p.columns[c.reserve].objective * x[c.reserve];
      energy += p.columns[c.aging].objective * x[c.aging];
    }
    CHECK(rel_diff(s.r_sc + s.r_fr + s.r_br, energy) <= 1e-9);
    const double cp = p.horizon_data[0].price_purchase;
    for (const auto& c : sc.ess) CHECK(p.columns[c.charge_renewable].objective == -2.0 * cp);
    ++checked;
  }
}

TEST_CASE("an idle schedule earns only self-consumption") {
  SlotExogenous x;
  x.demand = 300.0;
  x.renewable = 120.0;
  x.price_purchase = 0.2;
  x.price_sale = 0.12;
  x.price_rmccp = 0.03;
  x.price_reserve = 0.01;
  DispatchDecision d;
  d.ess.resize(2);
  d.renewable_selfuse = 120.0;
  const auto s = slot_services(d, x, stock_units(), MarketSpec{});
  CHECK(s.r_fr == 0.0);
  CHECK(s.r_sr == 0.0);
  CHECK(s.r_br == 0.0);
  CHECK(s.aging_cost == 0.0);
  CHECK(s.r_sc == doctest::Approx(24.0).epsilon(1e-15));
  CHECK(s.net() == s.r_sc);
}

TEST_CASE("recover_service_split applies the charge and discharge identities") {
  const auto p = fixture_instance(12, 1);
  std::vector<double> x(p.num_columns(), 0.0);
  const auto& c0 = p.slots[0].ess[0];
  const auto& c1 = p.slots[0].ess[1];
  x[c0.charge] = 40.0;
  x[c0.charge_renewable] = 25.0;
  x[c0.charge_regulation] = 15.0;
  x[c0.mode] = 1.0;
  x[c1.discharge] = 30.0;
  x[c1.discharge_regulation] = 10.0;
  const auto d = recover_service_split(p, x);
  REQUIRE(d.size() == 1);
  CHECK(d[0].ess[0].charge_future == 0.0);
  CHECK(d[0].ess[0].mode_flag == 1);
  CHECK(d[0].ess[1].discharge_bill == 20.0);
  CHECK(d[0].ess[1].mode_flag == 0);

  x[c0.charge] = 30.0;  // below p^re,c + p^fr,c
  CHECK_THROWS_AS(recover_service_split(p, x), NumericalError);
  CHECK_THROWS_AS(recover_service_split(p, std::vector<double>(3, 0.0)), std::invalid_argument);
}

TEST_CASE("fixture solve: recovered split reproduces the aggregate rates") {
  const auto p = fixture_instance(30, 4, {0.4, 0.7});
  const auto r = solve(p);
  REQUIRE(r.status == SolveStatus::Optimal);
  REQUIRE(r.decisions.size() == 4);
  for (std::size_t k = 0; k < r.decisions.size(); ++k) {
    for (std::size_t i = 0; i < 2; ++i) {
      const auto& e = r.decisions[k].ess[i];
      const auto& c = p.slots[k].ess[i];
      CHECK(e.charge_future >= 0.0);
      CHECK(e.discharge_bill >= 0.0);
      CHECK(std::abs(e.charge_future + e.charge_from_renewable + e.charge_for_regulation -
                     r.primal[c.charge]) <= 1e-12 * std::max(1.0, r.primal[c.charge]));
      CHECK(std::abs(e.discharge_bill + e.discharge_for_regulation - r.primal[c.discharge]) <=
            1e-12 * std::max(1.0, r.primal[c.discharge]));
    }
  }
}

TEST_CASE("objective decomposition sums to the optimal objective") {
  std::mt19937_64 rng(8);
  for (int k = 0; k < 8; ++k) {
    const auto r = testsupport::random_instance(rng, 1 + k % 2, 1 + k % 3);
    const auto res = solve(r.instance);
    REQUIRE(res.status == SolveStatus::Optimal);
    const auto t = objective_decomposition(res, r.instance);
    CHECK(std::abs(t.net() + res.objective) <= 1e-7 * std::max(1.0, std::abs(res.objective)));
  }
  SolveResult infeasible;
  CHECK_THROWS_AS(objective_decomposition(infeasible, fixture_instance(0, 1)),
                  std::invalid_argument);
}

TEST_CASE("substituting z = v * p^sr by enumeration gives the same optimum") {
  std::mt19937_64 rng(55);
  for (int k = 0; k < 6; ++k) {
    const auto r = testsupport::random_instance(rng, 1 + k % 2, 1 + k % 2);
    const auto& p = r.instance;
    const auto ref = solve(p);
    REQUIRE(ref.status == SolveStatus::Optimal);

    std::vector<int> modes;
    for (const auto& sc : p.slots)
      for (const auto& c : sc.ess) modes.push_back(c.mode);
    double best = kInf;
    for (unsigned mask = 0; mask < (1u << modes.size()); ++mask) {
      ProblemInstance q = p;
      std::erase_if(q.rows,
                    [](const LinearRow& row) { return row.name.rfind("mccormick", 0) == 0; });
      std::size_t m = 0;
      for (const auto& sc : q.slots) {
        for (const auto& c : sc.ess) {
          const double v = (mask >> m++) & 1u;
          q.columns[c.mode].lower = q.columns[c.mode].upper = v;
          if (v == 0.0) {
            q.columns[c.mccormick].upper = 0.0;
          } else {
            q.rows.push_back({{{c.mccormick, 1.0}, {c.reserve, -1.0}}, Sense::Equal, 0.0, "z"});
          }
        }
      }
      const auto res = brute_force_oracle(q);
      if (res.status == SolveStatus::Optimal) best = std::min(best, res.objective);
    }
    CHECK(rel_diff(best, ref.objective) <= 1e-6);
  }
}

TEST_CASE("debug text dump names every column and row") {
  const auto p = fixture_instance(5, 2);
  std::ostringstream out;
  write_problem_text(p, out);
  const auto text = out.str();
  CHECK(text.rfind("# decision_time 5 horizon 2\n", 0) == 0);
  CHECK(text.find("binary mode[0,5]") != std::string::npos);
  CHECK(text.find("column aging_zeta[1,6]") != std::string::npos);
  CHECK(text.find("row renewable_balance[6] :") != std::string::npos);
  CHECK(text.find("epigraph k2 :") != std::string::npos);
  std::size_t lines = 0;
  for (char ch : text) lines += ch == '\n';
  CHECK(lines == 1 + p.columns.size() + p.rows.size() + p.epigraphs.size());
}
