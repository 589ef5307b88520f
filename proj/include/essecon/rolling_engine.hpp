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

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "essecon/core_domain.hpp"
#include "essecon/miqp_solver.hpp"
#include "essecon/problem_builder.hpp"

namespace essecon {

enum class ForecastSignal { Demand, Renewable, Rmccp, Rmpcp, Reserve };
inline constexpr int kForecastSignalCount = 5;

/// Lookahead errors: e ~ U(-E, E) with E = kappa_h * |x(t+h) - x(t+h-1)|,
/// then clamped to [low_ratio * min x, high_ratio * max x] over the true
/// series. Signals not listed in ForecastSignal pass through unchanged.
struct ForecastModel {
  // kappa[signal][h-1]; steps past the end reuse the last entry.
  std::vector<std::vector<double>> kappa;
  double low_ratio = 0.8;
  double high_ratio = 1.2;
  std::uint64_t seed = 0;

  /// kappa_h = min(0.1 h, 0.5) for every signal.
  static ForecastModel default_schedule(std::uint64_t seed = 0);
  /// All coefficients zero.
  static ForecastModel zero(std::uint64_t seed = 0);

  double coefficient(ForecastSignal s, int h) const;
  /// Throws std::invalid_argument when a schedule decreases or goes negative.
  void validate() const;
};

/// Forecast of slot t+h made at time t. Uses rng only for signals whose
/// error amplitude is positive.
SlotExogenous perturb_forecast(std::span<const SlotExogenous> truth, int t, int h,
                               const ForecastModel& model, std::mt19937_64& rng);

/// Makes a decision planned on forecast data feasible for the true slot by
/// cutting renewable-dependent terms: export first, then renewable charging
/// (pro rata across units, reducing total charge with it), then direct
/// self-use. If a unit's reduced charge would push its SOC below the
/// reserve-tightened floor, the shortfall is bought from the grid instead.
DispatchDecision repair_dispatch(const DispatchDecision& committed, const SlotExogenous& true_slot,
                                 const SocState& state, std::span<const EssSpec> specs,
                                 const MarketSpec& market);

/// Revenues and aging cost of a dispatch at true prices.
ServiceTotals realized_revenues(const DispatchDecision& decision, const SlotExogenous& true_slot,
                                std::span<const EssSpec> specs, const MarketSpec& market);

/// Profit without storage: greedy self-use then export, per slot.
double no_ess_baseline(std::span<const SlotExogenous> series, const MarketSpec& market);

/// Largest violation of the operating constraints by one slot's dispatch
/// starting from state (rate limits, modes, renewable balance, regulation and
/// reserve rows, service split, SOC corridor).
double dispatch_violation(const DispatchDecision& decision, const SlotExogenous& slot,
                          const SocState& state, std::span<const EssSpec> specs,
                          const MarketSpec& market);

struct LedgerEntry {
  int slot = 0;
  ServiceTotals services;
  double net = 0.0;
  DispatchDecision decision;
  SocState soc;  // after the slot
};

struct SolverStats {
  long solves = 0;
  long nodes = 0;
  long lp_iterations = 0;
  long cut_rounds = 0;
  long max_nodes = 0;
};

struct SimulationReport {
  std::vector<LedgerEntry> ledger;
  ServiceTotals totals;
  double net_profit = 0.0;
  double baseline_profit = 0.0;
  double ess_attributable_profit = 0.0;
  SocState initial_soc;
  SolverStats stats;
};

struct SimulationOptions {
  int horizon = 4;
  /// One entry per unit, or a single value applied to all units.
  std::vector<double> initial_soc{0.5};
  std::optional<ForecastModel> forecast;  // empty means perfect foresight
};

class SimulationError : public std::runtime_error {
 public:
  SimulationError(int slot, const std::string& what)
      : std::runtime_error("slot " + std::to_string(slot) + ": " + what), slot_(slot) {}
  int slot() const { return slot_; }

 private:
  int slot_;
};

/// Rolling-horizon loop: at every slot solve the lookahead problem, commit
/// the first slot after repair against the true data, and book it at true
/// prices. The horizon is truncated at the end of the series.
SimulationReport run_simulation(std::span<const SlotExogenous> series,
                                std::span<const EssSpec> specs, const MarketSpec& market,
                                const SimulationOptions& options, const SolverConfig& config = {});

}  // namespace essecon
