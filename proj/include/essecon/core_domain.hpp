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

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace essecon {

/// Energy of one battery module; the module count of a unit is its capacity
/// divided by this value.
inline constexpr double kModuleEnergy = 0.0081;

/// Stand-in for "no export limit".
inline constexpr double kUnboundedPower = 1e12;

class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AgingSegment {
  double quadratic = 0.0;  // a_k
  double linear = 0.0;     // b_k
};

struct SegmentSet {
  std::vector<AgingSegment> segments;
};

/// Illustrative three-segment aging model. The coefficients are not fitted to
/// any cell chemistry.
SegmentSet default_segment_set();

/// Static parameters of one storage unit. Powers in kW, energy in kWh, prices
/// in currency per kWh.
struct EssSpec {
  int id = 0;
  double energy_capacity = 0.0;
  double soc_min = 0.2;
  double soc_max = 0.9;
  double charge_rate_max = 0.0;
  double discharge_rate_max = 0.0;
  double eff_charge = 1.0;
  double eff_discharge = 1.0;
  double unit_capital_cost = 0.0;
  double charge_cost_fraction = 0.5;
  double module_count = 0.0;
  SegmentSet aging_segments;

  /// Builds a spec with module_count derived from the capacity.
  static EssSpec make(int id, double energy_capacity, double soc_min, double soc_max,
                      double charge_rate_max, double discharge_rate_max, double eff_charge,
                      double eff_discharge, double unit_capital_cost,
                      double charge_cost_fraction = 0.5,
                      SegmentSet segments = default_segment_set());
};

/// The two storage types used throughout the examples and the default config.
EssSpec table_one_type1(double unit_capital_cost = 100.0);
EssSpec table_one_type2(double unit_capital_cost = 100.0);

struct MarketSpec {
  double slot_hours = 1.0;
  double reg_min_power = 0.0;
  double reserve_min_power = 0.0;
  double reserve_min_duration = 1.0;
  double export_power_max = kUnboundedPower;
  double sale_price_ratio = 0.6;
};

struct SlotExogenous {
  double demand = 0.0;
  double renewable = 0.0;
  double price_purchase = 0.0;
  double price_sale = 0.0;
  double price_rmccp = 0.0;
  double price_rmpcp = 0.0;
  double perf_score = 1.0;
  double mileage_ratio = 1.0;
  int reg_up_flag = 0;
  double price_reserve = 0.0;

  bool operator==(const SlotExogenous&) const = default;
};

struct SocState {
  std::vector<double> soc;
};

struct EssDispatch {
  double charge_total = 0.0;
  double discharge_total = 0.0;
  double charge_from_renewable = 0.0;
  double charge_for_regulation = 0.0;
  double discharge_for_regulation = 0.0;
  double reserve_commit = 0.0;
  double charge_future = 0.0;
  double discharge_bill = 0.0;
  int mode_flag = 1;

  bool operator==(const EssDispatch&) const = default;
};

struct DispatchDecision {
  std::vector<EssDispatch> ess;
  double renewable_selfuse = 0.0;
  double renewable_export = 0.0;
  int reg_participate = 0;
  int reserve_participate = 0;

  bool operator==(const DispatchDecision&) const = default;
};

/// Regulation power committed in a slot, counting only the direction the
/// exogenous flag selects.
double regulation_power(const DispatchDecision& decision, const SlotExogenous& slot);

/// Advances every unit's state of charge by one slot. Does not clamp.
SocState soc_update(const SocState& state, const DispatchDecision& decision,
                    std::span<const EssSpec> specs, double slot_hours);

struct Violation {
  std::string invariant;
  std::string location;  // e.g. "ess[1]" or "slot 7"
  long index = -1;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

ValidationReport validate_inputs(std::span<const EssSpec> specs, const MarketSpec& market,
                                 std::span<const SlotExogenous> series);

}  // namespace essecon
