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

#include "essecon/rolling_engine.hpp"

#include <algorithm>
#include <cmath>

namespace essecon {

namespace {

double SlotExogenous::*signal_field(ForecastSignal s) {
  switch (s) {
    case ForecastSignal::Demand: return &SlotExogenous::demand;
    case ForecastSignal::Renewable: return &SlotExogenous::renewable;
    case ForecastSignal::Rmccp: return &SlotExogenous::price_rmccp;
    case ForecastSignal::Rmpcp: return &SlotExogenous::price_rmpcp;
    case ForecastSignal::Reserve: return &SlotExogenous::price_reserve;
  }
  return &SlotExogenous::demand;
}

}  // namespace

ForecastModel ForecastModel::default_schedule(std::uint64_t seed) {
  ForecastModel m;
  m.seed = seed;
  std::vector<double> k;
  for (int h = 1; h <= 5; ++h) k.push_back(std::min(h / 10.0, 0.5));
  m.kappa.assign(kForecastSignalCount, k);
  return m;
}

ForecastModel ForecastModel::zero(std::uint64_t seed) {
  ForecastModel m;
  m.seed = seed;
  m.kappa.assign(kForecastSignalCount, {0.0});
  return m;
}

double ForecastModel::coefficient(ForecastSignal s, int h) const {
  const auto idx = static_cast<std::size_t>(s);
  if (idx >= kappa.size() || kappa[idx].empty()) return 0.0;
  const auto& k = kappa[idx];
  const std::size_t step = static_cast<std::size_t>(std::max(h, 1)) - 1;
  return k[std::min(step, k.size() - 1)];
}

void ForecastModel::validate() const {
  if (kappa.size() > static_cast<std::size_t>(kForecastSignalCount))
    throw std::invalid_argument("ForecastModel: too many signal schedules");
  for (const auto& k : kappa) {
    for (std::size_t h = 0; h < k.size(); ++h) {
      if (!(k[h] >= 0.0)) throw std::invalid_argument("ForecastModel: negative coefficient");
      if (h > 0 && k[h] < k[h - 1])
        throw std::invalid_argument("ForecastModel: coefficients must not decrease with h");
    }
  }
  if (!(low_ratio >= 0.0) || !(high_ratio >= low_ratio))
    throw std::invalid_argument("ForecastModel: invalid clamp band");
}

SlotExogenous perturb_forecast(std::span<const SlotExogenous> truth, int t, int h,
                               const ForecastModel& model, std::mt19937_64& rng) {
  const int n = static_cast<int>(truth.size());
  if (t < 0 || h < 1 || t + h >= n) throw std::out_of_range("perturb_forecast: index out of range");
  SlotExogenous out = truth[t + h];
  for (int si = 0; si < kForecastSignalCount; ++si) {
    const auto sig = static_cast<ForecastSignal>(si);
    const auto field = signal_field(sig);
    const double amplitude =
        model.coefficient(sig, h) * std::abs(truth[t + h].*field - truth[t + h - 1].*field);
    if (!(amplitude > 0.0)) continue;
    double lo = truth[0].*field, hi = truth[0].*field;
    for (const auto& s : truth) {
      lo = std::min(lo, s.*field);
      hi = std::max(hi, s.*field);
    }
    std::uniform_real_distribution<double> err(-amplitude, amplitude);
    out.*field = std::clamp(out.*field + err(rng), model.low_ratio * lo, model.high_ratio * hi);
  }
  return out;
}

DispatchDecision repair_dispatch(const DispatchDecision& committed, const SlotExogenous& x,
                                 const SocState& state, std::span<const EssSpec> specs,
                                 const MarketSpec& market) {
  if (committed.ess.size() != specs.size() || state.soc.size() != specs.size())
    throw DomainError("repair_dispatch: ESS count mismatch");
  DispatchDecision d = committed;
  d.renewable_selfuse = std::min(d.renewable_selfuse, x.demand);

  double charge_renewable = 0.0;
  for (const auto& e : d.ess) charge_renewable += e.charge_from_renewable;
  double excess = d.renewable_selfuse + d.renewable_export + charge_renewable - x.renewable;
  std::vector<double> cut(specs.size(), 0.0);
  if (excess > 0.0) {
    const double c = std::min(d.renewable_export, excess);
    d.renewable_export -= c;
    excess -= c;
  }
  if (excess > 0.0 && charge_renewable > 0.0) {
    const double total = std::min(charge_renewable, excess);
    const double share = total / charge_renewable;
    for (std::size_t i = 0; i < d.ess.size(); ++i) {
      auto& e = d.ess[i];
      cut[i] = e.charge_from_renewable * share;
      e.charge_from_renewable -= cut[i];
      e.charge_total -= cut[i];
    }
    excess -= total;
  }
  if (excess > 0.0) d.renewable_selfuse -= std::min(d.renewable_selfuse, excess);

  const double ts = market.slot_hours;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (cut[i] <= 0.0) continue;
    const auto& s = specs[i];
    auto& e = d.ess[i];
    const double next = state.soc[i] + ts * (s.eff_charge * e.charge_total -
                                             e.discharge_total / s.eff_discharge) /
                                            s.energy_capacity;
    const double floor =
        s.soc_min + e.reserve_commit * market.reserve_min_duration / s.energy_capacity;
    if (next >= floor) continue;
    const double need = (floor - next) * s.energy_capacity / (ts * s.eff_charge);
    const double add = std::min(need, cut[i]);
    e.charge_future += add;
    e.charge_total += add;
  }
  return d;
}

ServiceTotals realized_revenues(const DispatchDecision& decision, const SlotExogenous& true_slot,
                                std::span<const EssSpec> specs, const MarketSpec& market) {
  return slot_services(decision, true_slot, specs, market);
}

double no_ess_baseline(std::span<const SlotExogenous> series, const MarketSpec& market) {
  double total = 0.0;
  for (const auto& x : series) {
    const double used = std::min(x.demand, x.renewable);
    const double exported = std::min(market.export_power_max, x.renewable - used);
    total += market.slot_hours * (x.price_purchase * used + x.price_sale * exported);
  }
  return total;
}

double dispatch_violation(const DispatchDecision& d, const SlotExogenous& x,
                          const SocState& state, std::span<const EssSpec> specs,
                          const MarketSpec& market) {
  if (d.ess.size() != specs.size() || state.soc.size() != specs.size())
    throw DomainError("dispatch_violation: ESS count mismatch");
  double worst = 0.0;
  auto le = [&](double lhs, double rhs) { worst = std::max(worst, lhs - rhs); };
  auto eq = [&](double lhs, double rhs) { worst = std::max(worst, std::abs(lhs - rhs)); };
  auto is_flag = [&](int v) {
    if (v != 0 && v != 1) worst = std::max(worst, 1.0);
  };

  const double up = x.reg_up_flag;
  const double ts = market.slot_hours;
  is_flag(d.reg_participate);
  is_flag(d.reserve_participate);
  double charge_renewable = 0.0, regulation = 0.0, reserve = 0.0;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto& s = specs[i];
    const auto& e = d.ess[i];
    const double v = e.mode_flag;
    is_flag(e.mode_flag);
    for (double r : {e.charge_total, e.discharge_total, e.charge_from_renewable,
                     e.charge_for_regulation, e.discharge_for_regulation, e.reserve_commit,
                     e.charge_future, e.discharge_bill})
      le(0.0, r);
    le(e.charge_total, v * s.charge_rate_max);
    le(e.discharge_total, (1.0 - v) * s.discharge_rate_max);
    eq(e.charge_from_renewable + e.charge_for_regulation + e.charge_future, e.charge_total);
    eq(e.discharge_for_regulation + e.discharge_bill, e.discharge_total);
    le(e.discharge_for_regulation, e.discharge_total);
    le(e.discharge_total,
       (1.0 - v) * s.discharge_rate_max - e.reserve_commit + v * e.reserve_commit);
    le(e.charge_for_regulation, (1.0 - up) * d.reg_participate * s.charge_rate_max);
    le(e.discharge_for_regulation, up * d.reg_participate * s.discharge_rate_max);
    le(e.reserve_commit, d.reserve_participate * s.discharge_rate_max);

    const double next = state.soc[i] + ts * (s.eff_charge * e.charge_total -
                                             e.discharge_total / s.eff_discharge) /
                                            s.energy_capacity;
    le(s.soc_min + e.reserve_commit * market.reserve_min_duration / s.energy_capacity, next);
    le(next, s.soc_max);

    charge_renewable += e.charge_from_renewable;
    regulation += (1.0 - up) * e.charge_for_regulation + up * e.discharge_for_regulation;
    reserve += e.reserve_commit;
  }
  le(0.0, d.renewable_selfuse);
  le(0.0, d.renewable_export);
  le(d.renewable_selfuse, x.demand);
  le(d.renewable_export, market.export_power_max);
  le(d.renewable_selfuse + d.renewable_export + charge_renewable, x.renewable);
  le(d.reg_participate * market.reg_min_power, regulation);
  le(d.reserve_participate * market.reserve_min_power, reserve);
  return worst;
}

SimulationReport run_simulation(std::span<const SlotExogenous> series,
                                std::span<const EssSpec> specs, const MarketSpec& market,
                                const SimulationOptions& options, const SolverConfig& config) {
  const int n = static_cast<int>(series.size());
  if (options.horizon < 1) throw std::invalid_argument("run_simulation: horizon must be >= 1");
  if (n < options.horizon)
    throw std::invalid_argument("run_simulation: series shorter than the horizon");
  if (options.forecast) options.forecast->validate();

  SimulationReport report;
  SocState state;
  if (options.initial_soc.size() == 1) {
    state.soc.assign(specs.size(), options.initial_soc.front());
  } else if (options.initial_soc.size() == specs.size()) {
    state.soc = options.initial_soc;
  } else {
    throw std::invalid_argument("run_simulation: initial SOC needs one value or one per unit");
  }
  report.initial_soc = state;

  std::vector<SlotExogenous> horizon;
  for (int t = 0; t < n; ++t) {
    const int h_len = std::min(options.horizon, n - t);
    horizon.assign(1, series[t]);
    for (int h = 1; h < h_len; ++h) {
      if (options.forecast) {
        // Per-(t, h) streams keep a forecast independent of the horizon size.
        std::seed_seq seq{static_cast<std::uint32_t>(options.forecast->seed),
                          static_cast<std::uint32_t>(options.forecast->seed >> 32),
                          static_cast<std::uint32_t>(t), static_cast<std::uint32_t>(h)};
        std::mt19937_64 rng(seq);
        horizon.push_back(perturb_forecast(series, t, h, *options.forecast, rng));
      } else {
        horizon.push_back(series[t + h]);
      }
    }

    SolveResult res;
    try {
      const auto instance = build_problem(t, horizon, state, specs, market);
      res = solve(instance, config);
    } catch (const std::exception& e) {
      throw SimulationError(t, e.what());
    }
    if (res.status != SolveStatus::Optimal)
      throw SimulationError(t, std::string("solver returned ") + to_string(res.status));
    ++report.stats.solves;
    report.stats.nodes += res.nodes;
    report.stats.lp_iterations += res.lp_iterations;
    report.stats.cut_rounds += res.cut_rounds;
    report.stats.max_nodes = std::max(report.stats.max_nodes, res.nodes);

    LedgerEntry entry;
    entry.slot = t;
    entry.decision = repair_dispatch(res.decisions.front(), series[t], state, specs, market);
    entry.services = realized_revenues(entry.decision, series[t], specs, market);
    entry.net = entry.services.net();
    state = soc_update(state, entry.decision, specs, market.slot_hours);
    entry.soc = state;
    report.totals += entry.services;
    report.net_profit += entry.net;
    report.ledger.push_back(std::move(entry));
  }

  report.baseline_profit = no_ess_baseline(series, market);
  report.ess_attributable_profit = report.net_profit - report.baseline_profit;
  return report;
}

}  // namespace essecon
