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

#include "essecon/core_domain.hpp"

#include <cmath>
#include <sstream>

namespace essecon {

SegmentSet default_segment_set() {
  return SegmentSet{{
      {0.0, 6.0e-6},
      {4.4e-6, 3.0e-6},
      {6.8e-6, 0.0},
  }};
}

EssSpec EssSpec::make(int id, double energy_capacity, double soc_min, double soc_max,
                      double charge_rate_max, double discharge_rate_max, double eff_charge,
                      double eff_discharge, double unit_capital_cost,
                      double charge_cost_fraction, SegmentSet segments) {
  EssSpec s;
  s.id = id;
  s.energy_capacity = energy_capacity;
  s.soc_min = soc_min;
  s.soc_max = soc_max;
  s.charge_rate_max = charge_rate_max;
  s.discharge_rate_max = discharge_rate_max;
  s.eff_charge = eff_charge;
  s.eff_discharge = eff_discharge;
  s.unit_capital_cost = unit_capital_cost;
  s.charge_cost_fraction = charge_cost_fraction;
  s.module_count = energy_capacity / kModuleEnergy;
  s.aging_segments = std::move(segments);
  return s;
}

EssSpec table_one_type1(double unit_capital_cost) {
  return EssSpec::make(1, 480.0, 0.2, 0.9, 102.0, 74.0, 0.82, 0.88, unit_capital_cost);
}

EssSpec table_one_type2(double unit_capital_cost) {
  return EssSpec::make(2, 720.0, 0.2, 0.9, 148.0, 113.0, 0.85, 0.90, unit_capital_cost);
}

double regulation_power(const DispatchDecision& decision, const SlotExogenous& slot) {
  double total = 0.0;
  const double up = slot.reg_up_flag;
  for (const auto& e : decision.ess)
    total += (1.0 - up) * e.charge_for_regulation + up * e.discharge_for_regulation;
  return total;
}

SocState soc_update(const SocState& state, const DispatchDecision& decision,
                    std::span<const EssSpec> specs, double slot_hours) {
  if (state.soc.size() != specs.size() || decision.ess.size() != specs.size())
    throw DomainError("soc_update: ESS count mismatch between state, decision and specs");
  SocState next = state;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto& s = specs[i];
    const auto& d = decision.ess[i];
    next.soc[i] = state.soc[i] + slot_hours *
                                     (s.eff_charge * d.charge_total -
                                      d.discharge_total / s.eff_discharge) /
                                     s.energy_capacity;
  }
  return next;
}

std::string ValidationReport::to_string() const {
  if (ok()) return "pass";
  std::ostringstream os;
  for (const auto& v : violations) os << v.location << ": " << v.invariant << '\n';
  return os.str();
}

namespace {

class Checker {
 public:
  explicit Checker(ValidationReport& report) : report_(report) {}

  void require(bool ok, std::string invariant, std::string location, long index) {
    if (!ok) report_.violations.push_back({std::move(invariant), std::move(location), index});
  }

 private:
  ValidationReport& report_;
};

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }
bool open_unit(double v) { return v > 0.0 && v < 1.0; }

}  // namespace

ValidationReport validate_inputs(std::span<const EssSpec> specs, const MarketSpec& market,
                                 std::span<const SlotExogenous> series) {
  ValidationReport report;
  Checker check(report);

  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto& s = specs[i];
    const std::string where = "ess[" + std::to_string(i) + "]";
    const long idx = static_cast<long>(i);
    check.require(open_unit(s.soc_min), "0 < soc_min < 1", where, idx);
    check.require(open_unit(s.soc_max), "0 < soc_max < 1", where, idx);
    check.require(s.soc_min < s.soc_max, "soc_min < soc_max", where, idx);
    check.require(std::isfinite(s.energy_capacity) && s.energy_capacity > 0.0,
                  "energy_capacity > 0", where, idx);
    check.require(finite_nonneg(s.charge_rate_max), "charge_rate_max >= 0", where, idx);
    check.require(finite_nonneg(s.discharge_rate_max), "discharge_rate_max >= 0", where, idx);
    check.require(open_unit(s.eff_charge), "0 < eff_charge < 1", where, idx);
    check.require(open_unit(s.eff_discharge), "0 < eff_discharge < 1", where, idx);
    check.require(finite_nonneg(s.unit_capital_cost), "unit_capital_cost >= 0", where, idx);
    check.require(s.charge_cost_fraction >= 0.0 && s.charge_cost_fraction <= 1.0,
                  "0 <= charge_cost_fraction <= 1", where, idx);
    const double expected_modules = s.energy_capacity / kModuleEnergy;
    check.require(std::abs(s.module_count - expected_modules) <=
                      1e-9 * std::abs(expected_modules),
                  "module_count == energy_capacity / 0.0081", where, idx);
    check.require(!s.aging_segments.segments.empty(), "at least one aging segment", where, idx);
    for (const auto& seg : s.aging_segments.segments) {
      check.require(std::isfinite(seg.quadratic) && seg.quadratic >= 0.0,
                    "aging segment a_k >= 0", where, idx);
      check.require(std::isfinite(seg.linear), "aging segment b_k finite", where, idx);
    }
  }

  check.require(std::isfinite(market.slot_hours) && market.slot_hours > 0.0, "slot_hours > 0",
                "market", -1);
  check.require(finite_nonneg(market.reg_min_power), "reg_min_power >= 0", "market", -1);
  check.require(finite_nonneg(market.reserve_min_power), "reserve_min_power >= 0", "market", -1);
  check.require(finite_nonneg(market.reserve_min_duration), "reserve_min_duration >= 0",
                "market", -1);
  check.require(finite_nonneg(market.export_power_max), "export_power_max >= 0", "market", -1);
  check.require(finite_nonneg(market.sale_price_ratio), "sale_price_ratio >= 0", "market", -1);

  for (std::size_t t = 0; t < series.size(); ++t) {
    const auto& x = series[t];
    const std::string where = "slot " + std::to_string(t);
    const long idx = static_cast<long>(t);
    check.require(finite_nonneg(x.demand), "demand >= 0", where, idx);
    check.require(finite_nonneg(x.renewable), "renewable >= 0", where, idx);
    check.require(finite_nonneg(x.price_purchase), "price_purchase >= 0", where, idx);
    check.require(finite_nonneg(x.price_sale), "price_sale >= 0", where, idx);
    check.require(!(x.price_sale > x.price_purchase), "price_sale <= price_purchase", where, idx);
    check.require(finite_nonneg(x.price_rmccp), "price_rmccp >= 0", where, idx);
    check.require(finite_nonneg(x.price_rmpcp), "price_rmpcp >= 0", where, idx);
    check.require(finite_nonneg(x.price_reserve), "price_reserve >= 0", where, idx);
    check.require(std::isfinite(x.perf_score) && x.perf_score >= 0.0 && x.perf_score <= 1.0,
                  "0 <= perf_score <= 1", where, idx);
    check.require(finite_nonneg(x.mileage_ratio), "mileage_ratio >= 0", where, idx);
    check.require(x.reg_up_flag == 0 || x.reg_up_flag == 1, "reg_up_flag in {0,1}", where, idx);
  }
  return report;
}

}  // namespace essecon
