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

#include <functional>
#include <random>

#include "essecon/core_domain.hpp"
#include "essecon/fixture.hpp"

using namespace essecon;

namespace {

DispatchDecision one_unit(double pc, double pd) {
  DispatchDecision d;
  d.ess.resize(1);
  d.ess[0].charge_total = pc;
  d.ess[0].discharge_total = pd;
  d.ess[0].mode_flag = pc > 0.0 ? 1 : 0;
  return d;
}

bool has_violation(const ValidationReport& r, const std::string& invariant, long index) {
  for (const auto& v : r.violations) {
    if (v.invariant == invariant && v.index == index) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("soc_update charges a type-1 unit") {
  const std::vector<EssSpec> specs{table_one_type1()};
  const auto next = soc_update({{0.5}}, one_unit(102.0, 0.0), specs, 1.0);
  CHECK(next.soc[0] == doctest::Approx(0.674250).epsilon(1e-12));
}

TEST_CASE("soc_update discharges a type-2 unit") {
  const std::vector<EssSpec> specs{table_one_type2()};
  const auto next = soc_update({{0.9}}, one_unit(0.0, 113.0), specs, 1.0);
  CHECK(std::abs(next.soc[0] - 0.725617) <= 1e-6);
}

TEST_CASE("soc_update with zero power is the identity") {
  const std::vector<EssSpec> specs{table_one_type1()};
  CHECK(soc_update({{0.37}}, one_unit(0.0, 0.0), specs, 1.0).soc[0] == 0.37);
}

TEST_CASE("soc_update does not clamp") {
  const std::vector<EssSpec> specs{table_one_type1()};
  const auto next = soc_update({{0.9}}, one_unit(102.0, 0.0), specs, 2.0);
  CHECK(next.soc[0] > 1.0);
}

TEST_CASE("soc_update rejects mismatched unit counts") {
  const std::vector<EssSpec> specs{table_one_type1(), table_one_type2()};
  CHECK_THROWS_AS(soc_update({{0.5}}, one_unit(0.0, 0.0), specs, 1.0), DomainError);
}

TEST_CASE("soc_update is linear in the rates") {
  const std::vector<EssSpec> specs{table_one_type2()};
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double s = 0.2 + 0.7 * u(rng);
    const double pc = 148.0 * u(rng), pd = 113.0 * u(rng), lambda = u(rng);
    const double full = soc_update({{s}}, one_unit(pc, pd), specs, 1.0).soc[0] - s;
    const double part =
        soc_update({{s}}, one_unit(lambda * pc, lambda * pd), specs, 1.0).soc[0] - s;
    CHECK(part == doctest::Approx(lambda * full).epsilon(1e-9));
  }
}

TEST_CASE("a charge-discharge round trip loses energy") {
  for (const auto& spec : {table_one_type1(), table_one_type2()}) {
    const std::vector<EssSpec> specs{spec};
    const double drawn = 50.0;  // kWh drawn from the grid
    const double up = soc_update({{0.5}}, one_unit(drawn, 0.0), specs, 1.0).soc[0];
    // Discharge exactly back to 0.5.
    const double delivered = (up - 0.5) * spec.energy_capacity * spec.eff_discharge;
    CHECK(soc_update({{up}}, one_unit(0.0, delivered), specs, 1.0).soc[0] ==
          doctest::Approx(0.5).epsilon(1e-12));
    CHECK(delivered == doctest::Approx(spec.eff_charge * spec.eff_discharge * drawn));
    CHECK(delivered < drawn);
  }
}

TEST_CASE("regulation_power follows the direction flag") {
  DispatchDecision d;
  d.ess.resize(2);
  d.ess[0].charge_for_regulation = 10.0;
  d.ess[0].discharge_for_regulation = 3.0;
  d.ess[1].charge_for_regulation = 5.0;
  d.ess[1].discharge_for_regulation = 7.0;
  SlotExogenous x;
  x.reg_up_flag = 1;
  CHECK(regulation_power(d, x) == 10.0);
  x.reg_up_flag = 0;
  CHECK(regulation_power(d, x) == 15.0);
}

TEST_CASE("stock units carry the tabulated parameters") {
  const auto a = table_one_type1();
  CHECK(a.energy_capacity == 480.0);
  CHECK(a.charge_rate_max == 102.0);
  CHECK(a.discharge_rate_max == 74.0);
  CHECK(a.eff_charge == 0.82);
  CHECK(a.eff_discharge == 0.88);
  CHECK(a.soc_min == 0.2);
  CHECK(a.soc_max == 0.9);
  CHECK(a.module_count == doctest::Approx(480.0 / 0.0081).epsilon(1e-15));
  const auto b = table_one_type2();
  CHECK(b.energy_capacity == 720.0);
  CHECK(b.charge_rate_max == 148.0);
  CHECK(b.discharge_rate_max == 113.0);
  CHECK(b.eff_charge == 0.85);
  CHECK(b.eff_discharge == 0.90);
  CHECK(b.charge_cost_fraction == 0.5);
}

TEST_CASE("validate_inputs accepts the stock units and the fixture") {
  const std::vector<EssSpec> specs{table_one_type1(), table_one_type2()};
  const auto series = generate_fixture();
  const auto r = validate_inputs(specs, MarketSpec{}, series);
  CHECK(r.ok());
  CHECK(r.to_string() == "pass");
}

TEST_CASE("validate_inputs reports reversed SOC bounds") {
  auto s = table_one_type1();
  s.soc_min = 0.9;
  s.soc_max = 0.2;
  const std::vector<EssSpec> specs{s};
  const auto r = validate_inputs(specs, MarketSpec{}, {});
  REQUIRE_FALSE(r.ok());
  CHECK(has_violation(r, "soc_min < soc_max", 0));
}

TEST_CASE("validate_inputs names the slot with negative demand") {
  auto series = generate_fixture();
  series[7].demand = -5.0;
  const std::vector<EssSpec> specs{table_one_type1()};
  const auto r = validate_inputs(specs, MarketSpec{}, series);
  REQUIRE(r.violations.size() == 1);
  CHECK(r.violations[0].index == 7);
  CHECK(r.violations[0].location == "slot 7");
  CHECK(r.to_string().find("slot 7") != std::string::npos);
}

TEST_CASE("every single-field mutation that breaks an invariant is rejected") {
  const auto base_series = generate_fixture();
  const std::vector<EssSpec> base_specs{table_one_type1(), table_one_type2()};

  using SpecMut = std::function<void(EssSpec&)>;
  const std::vector<SpecMut> spec_mutations{
      [](EssSpec& s) { s.soc_min = 0.0; },
      [](EssSpec& s) { s.soc_max = 1.0; },
      [](EssSpec& s) { s.soc_min = 0.95; },
      [](EssSpec& s) { s.energy_capacity = 0.0; },
      [](EssSpec& s) { s.charge_rate_max = -1.0; },
      [](EssSpec& s) { s.discharge_rate_max = -1.0; },
      [](EssSpec& s) { s.eff_charge = 1.5; },
      [](EssSpec& s) { s.eff_discharge = 0.0; },
      [](EssSpec& s) { s.unit_capital_cost = -1.0; },
      [](EssSpec& s) { s.charge_cost_fraction = 1.5; },
      [](EssSpec& s) { s.module_count = 1.0; },
      [](EssSpec& s) { s.aging_segments.segments.clear(); },
      [](EssSpec& s) { s.aging_segments.segments[0].quadratic = -1e-6; },
  };
  for (std::size_t k = 0; k < spec_mutations.size(); ++k) {
    CAPTURE(k);
    auto specs = base_specs;
    spec_mutations[k](specs[1]);
    const auto r = validate_inputs(specs, MarketSpec{}, base_series);
    REQUIRE_FALSE(r.ok());
    CHECK(r.violations.front().index == 1);
  }

  using MarketMut = std::function<void(MarketSpec&)>;
  const std::vector<MarketMut> market_mutations{
      [](MarketSpec& m) { m.slot_hours = 0.0; },
      [](MarketSpec& m) { m.reg_min_power = -1.0; },
      [](MarketSpec& m) { m.reserve_min_power = -1.0; },
      [](MarketSpec& m) { m.reserve_min_duration = -1.0; },
      [](MarketSpec& m) { m.export_power_max = -1.0; },
      [](MarketSpec& m) { m.sale_price_ratio = -0.1; },
  };
  for (std::size_t k = 0; k < market_mutations.size(); ++k) {
    CAPTURE(k);
    MarketSpec m;
    market_mutations[k](m);
    CHECK_FALSE(validate_inputs(base_specs, m, base_series).ok());
  }

  using SlotMut = std::function<void(SlotExogenous&)>;
  const std::vector<SlotMut> slot_mutations{
      [](SlotExogenous& x) { x.demand = -1.0; },
      [](SlotExogenous& x) { x.renewable = -1.0; },
      [](SlotExogenous& x) { x.price_purchase = -0.1; },
      [](SlotExogenous& x) { x.price_sale = -0.1; },
      [](SlotExogenous& x) { x.price_sale = x.price_purchase + 0.01; },
      [](SlotExogenous& x) { x.price_rmccp = -0.1; },
      [](SlotExogenous& x) { x.price_rmpcp = -0.1; },
      [](SlotExogenous& x) { x.perf_score = 1.2; },
      [](SlotExogenous& x) { x.mileage_ratio = -1.0; },
      [](SlotExogenous& x) { x.reg_up_flag = 2; },
      [](SlotExogenous& x) { x.price_reserve = -0.1; },
      [](SlotExogenous& x) { x.demand = std::nan(""); },
  };
  for (std::size_t k = 0; k < slot_mutations.size(); ++k) {
    CAPTURE(k);
    auto series = base_series;
    slot_mutations[k](series[42]);
    const auto r = validate_inputs(base_specs, MarketSpec{}, series);
    REQUIRE_FALSE(r.ok());
    CHECK(r.violations.front().index == 42);
  }
}

TEST_CASE("default segment set is convex and nonempty") {
  const auto set = default_segment_set();
  REQUIRE(set.segments.size() == 3);
  for (const auto& s : set.segments) CHECK(s.quadratic >= 0.0);
}
