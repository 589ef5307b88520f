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

#include <vector>

#include "essecon/core_domain.hpp"

namespace essecon {

// Aging model: for every segment k the unit must satisfy
//
//   gamma*eta_c*(1000*a_k*pc^2 + n*b_k*pc)
//     + (1-gamma)/eta_d*(1000*a_k*pd^2 + n*b_k*pd) <= zeta,
//
// and the slot cost is alpha*T/(0.8*E) * min zeta. The 1000 and 0.8 factors
// are kept as dimensionless constants.

/// One epigraph row  qc*pc^2 + lc*pc + qd*pd^2 + ld*pd - zeta <= 0.
struct EpigraphRow {
  int ess = 0;
  int slot = 0;
  int segment = 0;
  double quad_charge = 0.0;
  double quad_discharge = 0.0;
  double lin_charge = 0.0;
  double lin_discharge = 0.0;

  /// Row value without the zeta term.
  double value(double p_charge, double p_discharge) const {
    return quad_charge * p_charge * p_charge + lin_charge * p_charge +
           quad_discharge * p_discharge * p_discharge + lin_discharge * p_discharge;
  }
  double d_charge(double p_charge) const { return 2.0 * quad_charge * p_charge + lin_charge; }
  double d_discharge(double p_discharge) const {
    return 2.0 * quad_discharge * p_discharge + lin_discharge;
  }
  bool is_linear() const { return quad_charge == 0.0 && quad_discharge == 0.0; }
};

std::vector<EpigraphRow> epigraph_rows(const EssSpec& spec, int ess, int slot);

/// Currency per unit of zeta: alpha*T/(0.8*E).
double aging_cost_scale(const EssSpec& spec, double slot_hours);

/// max_k of the row values, i.e. the minimal feasible zeta.
double aging_epigraph_value(const EssSpec& spec, double p_charge, double p_discharge);

/// Aging cost of running at the given rates for one slot.
double aging_cost_eval(const EssSpec& spec, double p_charge, double p_discharge,
                       double slot_hours);

}  // namespace essecon
