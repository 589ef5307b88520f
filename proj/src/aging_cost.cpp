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

#include "essecon/aging_cost.hpp"

#include <algorithm>
#include <limits>

namespace essecon {

std::vector<EpigraphRow> epigraph_rows(const EssSpec& spec, int ess, int slot) {
  const double charge_weight = spec.charge_cost_fraction * spec.eff_charge;
  const double discharge_weight = (1.0 - spec.charge_cost_fraction) / spec.eff_discharge;
  const double n = spec.module_count;

  std::vector<EpigraphRow> rows;
  rows.reserve(spec.aging_segments.segments.size());
  int k = 0;
  for (const auto& seg : spec.aging_segments.segments) {
    EpigraphRow row;
    row.ess = ess;
    row.slot = slot;
    row.segment = k++;
    row.quad_charge = charge_weight * 1000.0 * seg.quadratic;
    row.lin_charge = charge_weight * n * seg.linear;
    row.quad_discharge = discharge_weight * 1000.0 * seg.quadratic;
    row.lin_discharge = discharge_weight * n * seg.linear;
    rows.push_back(row);
  }
  return rows;
}

double aging_cost_scale(const EssSpec& spec, double slot_hours) {
  return spec.unit_capital_cost * slot_hours / (0.8 * spec.energy_capacity);
}

double aging_epigraph_value(const EssSpec& spec, double p_charge, double p_discharge) {
  const auto rows = epigraph_rows(spec, 0, 0);
  if (rows.empty()) throw DomainError("aging cost: empty segment set");
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& r : rows) best = std::max(best, r.value(p_charge, p_discharge));
  return best;
}

double aging_cost_eval(const EssSpec& spec, double p_charge, double p_discharge,
                       double slot_hours) {
  return aging_cost_scale(spec, slot_hours) * aging_epigraph_value(spec, p_charge, p_discharge);
}

}  // namespace essecon
