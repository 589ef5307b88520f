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

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "essecon/aging_cost.hpp"
#include "essecon/core_domain.hpp"
#include "essecon/lp_solver.hpp"

namespace essecon {

struct Column {
  std::string name;
  double lower = 0.0;
  double upper = 0.0;
  double objective = 0.0;
  bool binary = false;
};

/// Column indices of one unit in one slot.
struct EssColumns {
  int charge = -1;                // p^c
  int charge_renewable = -1;      // p^re,c
  int charge_regulation = -1;     // p^fr,c
  int discharge = -1;             // p^d
  int discharge_regulation = -1;  // p^fr,d
  int reserve = -1;               // p^sr,d
  int mccormick = -1;             // z = v^c * p^sr,d
  int aging = -1;                 // zeta
  int mode = -1;                  // v^c (binary)
};

struct SlotColumns {
  std::vector<EssColumns> ess;
  int renewable_selfuse = -1;    // p^re,sc
  int renewable_export = -1;     // p^re,s
  int reg_participate = -1;      // v^fr (binary)
  int reserve_participate = -1;  // v^sr (binary)
};

/// Quadratic aging row bound to its columns.
struct EpigraphConstraint {
  EpigraphRow row;
  int charge_col = -1;
  int discharge_col = -1;
  int aux_col = -1;

  double violation(std::span<const double> x) const {
    return row.value(x[charge_col], x[discharge_col]) - x[aux_col];
  }
};

/// Scheduling problem for one decision time: minimize -TNP over the horizon.
struct ProblemInstance {
  int decision_time = 0;
  int horizon = 0;

  std::vector<Column> columns;
  std::vector<LinearRow> rows;
  std::vector<EpigraphConstraint> epigraphs;
  std::vector<int> binaries;
  std::vector<SlotColumns> slots;
  std::unordered_map<std::string, int> index;

  // Inputs the instance was built from, kept for decoding and accounting.
  std::vector<SlotExogenous> horizon_data;
  std::vector<EssSpec> specs;
  MarketSpec market;
  SocState initial_state;

  int column(std::string_view name) const;
  std::size_t num_columns() const { return columns.size(); }
  std::size_t num_continuous() const { return columns.size() - binaries.size(); }
  double objective_value(std::span<const double> x) const;
};

enum class SolveStatus { Optimal, Infeasible, GapLimit, NodeLimit };
const char* to_string(SolveStatus s);

struct SolveResult {
  SolveStatus status = SolveStatus::Infeasible;
  double objective = 0.0;  // -TNP
  double bound = 0.0;
  std::vector<double> primal;
  long nodes = 0;
  long lp_iterations = 0;
  long cut_rounds = 0;
  std::vector<DispatchDecision> decisions;
};

/// Revenue and cost decomposition of a dispatch.
struct ServiceTotals {
  double r_sc = 0.0;
  double r_fr = 0.0;
  double r_sr = 0.0;
  double r_br = 0.0;
  double aging_cost = 0.0;

  double net() const { return r_sc + r_fr + r_sr + r_br - aging_cost; }
  ServiceTotals& operator+=(const ServiceTotals& o) {
    r_sc += o.r_sc;
    r_fr += o.r_fr;
    r_sr += o.r_sr;
    r_br += o.r_br;
    aging_cost += o.aging_cost;
    return *this;
  }
};

class BuildError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

ProblemInstance build_problem(int t, std::span<const SlotExogenous> horizon, const SocState& state,
                              std::span<const EssSpec> specs, const MarketSpec& market);

/// Linearization of z = v * p^sr for binary v.
std::vector<LinearRow> mccormick_rows(const EssColumns& cols, double discharge_rate_max);

/// Revenue formulas and aging cost evaluated at one slot's dispatch.
ServiceTotals slot_services(const DispatchDecision& decision, const SlotExogenous& slot,
                            std::span<const EssSpec> specs, const MarketSpec& market);

/// Reads a primal vector back into per-slot decisions, recovering the
/// future-charge and bill-discharge split from the aggregate rates.
std::vector<DispatchDecision> recover_service_split(const ProblemInstance& instance,
                                                    std::span<const double> primal);

/// Per-service totals over the horizon. Requires an optimal result.
ServiceTotals objective_decomposition(const SolveResult& result, const ProblemInstance& instance);

/// Debug text format: one column or row per line, named columns.
void write_problem_text(const ProblemInstance& instance, std::ostream& out);

}  // namespace essecon
