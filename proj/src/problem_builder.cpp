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

#include "essecon/problem_builder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace essecon {

namespace {

constexpr double kSocSlack = 1e-6;

std::string tag(const std::string& base, int ess, int slot) {
  return base + "[" + std::to_string(ess) + "," + std::to_string(slot) + "]";
}

std::string tag(const std::string& base, int slot) {
  return base + "[" + std::to_string(slot) + "]";
}

class Builder {
 public:
  explicit Builder(ProblemInstance& p) : p_(p) {}

  int column(std::string name, double lo, double hi, double obj, bool binary = false) {
    const int idx = static_cast<int>(p_.columns.size());
    p_.index.emplace(name, idx);
    p_.columns.push_back({std::move(name), lo, hi, obj, binary});
    if (binary) p_.binaries.push_back(idx);
    return idx;
  }

  void row(std::vector<Term> terms, Sense sense, double rhs, std::string name) {
    p_.rows.push_back({std::move(terms), sense, rhs, std::move(name)});
  }

 private:
  ProblemInstance& p_;
};

double min_on_interval(double q, double l, double hi) {
  double x;
  if (q > 0.0) {
    x = std::clamp(-l / (2.0 * q), 0.0, hi);
  } else {
    x = l >= 0.0 ? 0.0 : hi;
  }
  return q * x * x + l * x;
}

/// Box for zeta implied by the rate limits.
std::pair<double, double> aging_aux_bounds(const std::vector<EpigraphRow>& rows, double pc_max,
                                           double pd_max) {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& r : rows) {
    lo = std::max(lo, min_on_interval(r.quad_charge, r.lin_charge, pc_max) +
                          min_on_interval(r.quad_discharge, r.lin_discharge, pd_max));
    for (double pc : {0.0, pc_max})
      for (double pd : {0.0, pd_max}) hi = std::max(hi, r.value(pc, pd));
  }
  return {lo, std::max(hi, lo)};
}

}  // namespace

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::GapLimit: return "gap-limit";
    case SolveStatus::NodeLimit: return "node-limit";
  }
  return "?";
}

int ProblemInstance::column(std::string_view name) const {
  auto it = index.find(std::string(name));
  if (it == index.end()) throw std::out_of_range("unknown column " + std::string(name));
  return it->second;
}

double ProblemInstance::objective_value(std::span<const double> x) const {
  double s = 0.0;
  for (std::size_t j = 0; j < columns.size(); ++j) s += columns[j].objective * x[j];
  return s;
}

std::vector<LinearRow> mccormick_rows(const EssColumns& c, double discharge_rate_max) {
  const double m = discharge_rate_max;
  std::vector<LinearRow> rows;
  rows.push_back({{{c.mccormick, 1.0}, {c.mode, -m}}, Sense::LessEqual, 0.0, "mccormick_upper_v"});
  rows.push_back({{{c.mccormick, 1.0}}, Sense::GreaterEqual, 0.0, "mccormick_nonneg"});
  rows.push_back({{{c.mccormick, 1.0}, {c.reserve, -1.0}, {c.mode, -m}},
                  Sense::GreaterEqual,
                  -m,
                  "mccormick_lower_p"});
  rows.push_back(
      {{{c.mccormick, 1.0}, {c.reserve, -1.0}}, Sense::LessEqual, 0.0, "mccormick_upper_p"});
  return rows;
}

ProblemInstance build_problem(int t, std::span<const SlotExogenous> horizon, const SocState& state,
                              std::span<const EssSpec> specs, const MarketSpec& market) {
  if (horizon.empty()) throw BuildError("build_problem: empty horizon");
  if (state.soc.size() != specs.size())
    throw BuildError("build_problem: state has " + std::to_string(state.soc.size()) +
                     " units but " + std::to_string(specs.size()) + " specs were given");
  const auto report = validate_inputs(specs, market, horizon);
  if (!report.ok()) throw BuildError("build_problem: invalid inputs\n" + report.to_string());
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (state.soc[i] < specs[i].soc_min - kSocSlack || state.soc[i] > specs[i].soc_max + kSocSlack)
      throw BuildError("build_problem: initial SOC of ess[" + std::to_string(i) +
                       "] outside its bounds");
  }

  ProblemInstance p;
  p.decision_time = t;
  p.horizon = static_cast<int>(horizon.size());
  p.horizon_data.assign(horizon.begin(), horizon.end());
  p.specs.assign(specs.begin(), specs.end());
  p.market = market;
  p.initial_state = state;

  Builder b(p);
  const double ts = market.slot_hours;
  const int n_ess = static_cast<int>(specs.size());

  for (int k = 0; k < p.horizon; ++k) {
    const int tau = t + k;
    const auto& x = horizon[k];
    const double up = x.reg_up_flag;
    const double reg_price = x.perf_score * (x.price_rmccp + x.price_rmpcp * x.mileage_ratio);

    SlotColumns sc;
    for (int i = 0; i < n_ess; ++i) {
      const auto& s = specs[i];
      EssColumns c;
      const double pre_c_max = std::min(s.charge_rate_max, x.renewable);
      c.charge =
          b.column(tag("charge_total", i, tau), 0.0, s.charge_rate_max, ts * x.price_purchase);
      c.charge_renewable = b.column(tag("charge_renewable", i, tau), 0.0, pre_c_max,
                                    -2.0 * ts * x.price_purchase);
      c.charge_regulation = b.column(tag("charge_regulation", i, tau), 0.0, s.charge_rate_max,
                                     -ts * reg_price * (1.0 - up));
      c.discharge = b.column(tag("discharge_total", i, tau), 0.0, s.discharge_rate_max,
                             -ts * x.price_purchase);
      c.discharge_regulation = b.column(tag("discharge_regulation", i, tau), 0.0,
                                        s.discharge_rate_max, -ts * reg_price * up);
      c.reserve =
          b.column(tag("reserve", i, tau), 0.0, s.discharge_rate_max, -ts * x.price_reserve);
      c.mccormick = b.column(tag("mccormick_z", i, tau), 0.0, s.discharge_rate_max, 0.0);
      const auto erows = epigraph_rows(s, i, tau);
      const auto [zlo, zhi] = aging_aux_bounds(erows, s.charge_rate_max, s.discharge_rate_max);
      c.aging = b.column(tag("aging_zeta", i, tau), zlo, zhi, aging_cost_scale(s, ts));
      c.mode = b.column(tag("mode", i, tau), 0.0, 1.0, 0.0, true);
      for (const auto& er : erows) p.epigraphs.push_back({er, c.charge, c.discharge, c.aging});
      sc.ess.push_back(c);
    }
    sc.renewable_selfuse = b.column(tag("renewable_selfuse", tau), 0.0,
                                    std::min(x.demand, x.renewable), -ts * x.price_purchase);
    sc.renewable_export = b.column(tag("renewable_export", tau), 0.0,
                                   std::min(market.export_power_max, x.renewable),
                                   -ts * x.price_sale);
    sc.reg_participate = b.column(tag("reg_participate", tau), 0.0, 1.0, 0.0, true);
    sc.reserve_participate = b.column(tag("reserve_participate", tau), 0.0, 1.0, 0.0, true);
    p.slots.push_back(std::move(sc));
  }

  for (int k = 0; k < p.horizon; ++k) {
    const int tau = t + k;
    const auto& x = horizon[k];
    const auto& sc = p.slots[k];
    const double up = x.reg_up_flag;

    for (int i = 0; i < n_ess; ++i) {
      const auto& s = specs[i];
      const auto& c = sc.ess[i];
      // Charge limit with mode; doubles as the upper half of the reduced charge linkage.
      b.row({{c.charge, 1.0}, {c.mode, -s.charge_rate_max}}, Sense::LessEqual, 0.0,
            tag("charge_mode", i, tau));
      b.row({{c.discharge, 1.0}, {c.mode, s.discharge_rate_max}}, Sense::LessEqual,
            s.discharge_rate_max, tag("discharge_mode", i, tau));
      b.row({{c.charge_renewable, 1.0}, {c.charge_regulation, 1.0}, {c.charge, -1.0}},
            Sense::LessEqual, 0.0, tag("charge_linkage", i, tau));
      b.row({{c.discharge_regulation, 1.0}, {c.discharge, -1.0}}, Sense::LessEqual, 0.0,
            tag("discharge_linkage_lower", i, tau));
      b.row({{c.discharge, 1.0},
             {c.mode, s.discharge_rate_max},
             {c.reserve, 1.0},
             {c.mccormick, -1.0}},
            Sense::LessEqual, s.discharge_rate_max, tag("discharge_linkage_upper", i, tau));
      b.row({{c.charge_regulation, 1.0}, {sc.reg_participate, -(1.0 - up) * s.charge_rate_max}},
            Sense::LessEqual, 0.0, tag("regulation_charge", i, tau));
      b.row({{c.discharge_regulation, 1.0}, {sc.reg_participate, -up * s.discharge_rate_max}},
            Sense::LessEqual, 0.0, tag("regulation_discharge", i, tau));
      b.row({{c.reserve, 1.0}, {sc.reserve_participate, -s.discharge_rate_max}}, Sense::LessEqual,
            0.0, tag("reserve_limit", i, tau));
      for (auto& r : mccormick_rows(c, s.discharge_rate_max)) {
        r.name = tag(r.name, i, tau);
        p.rows.push_back(std::move(r));
      }

      // SOC after slot tau, written as the initial SOC plus cumulative flows.
      std::vector<Term> chain;
      for (int kk = 0; kk <= k; ++kk) {
        const auto& cc = p.slots[kk].ess[i];
        chain.push_back({cc.charge, ts * s.eff_charge / s.energy_capacity});
        chain.push_back({cc.discharge, -ts / (s.eff_discharge * s.energy_capacity)});
      }
      auto lower_chain = chain;
      lower_chain.push_back({c.reserve, -market.reserve_min_duration / s.energy_capacity});
      b.row(std::move(lower_chain), Sense::GreaterEqual, s.soc_min - state.soc[i],
            tag("soc_lower", i, tau));
      b.row(std::move(chain), Sense::LessEqual, s.soc_max - state.soc[i], tag("soc_upper", i, tau));
    }

    std::vector<Term> balance{{sc.renewable_selfuse, 1.0}, {sc.renewable_export, 1.0}};
    std::vector<Term> reg_total;
    std::vector<Term> reserve_total;
    for (int i = 0; i < n_ess; ++i) {
      const auto& c = sc.ess[i];
      balance.push_back({c.charge_renewable, 1.0});
      reg_total.push_back({c.charge_regulation, 1.0 - up});
      reg_total.push_back({c.discharge_regulation, up});
      reserve_total.push_back({c.reserve, 1.0});
    }
    b.row(std::move(balance), Sense::LessEqual, x.renewable, tag("renewable_balance", tau));
    reg_total.push_back({sc.reg_participate, -market.reg_min_power});
    b.row(std::move(reg_total), Sense::GreaterEqual, 0.0, tag("regulation_minimum", tau));
    reserve_total.push_back({sc.reserve_participate, -market.reserve_min_power});
    b.row(std::move(reserve_total), Sense::GreaterEqual, 0.0, tag("reserve_minimum", tau));
  }
  return p;
}

ServiceTotals slot_services(const DispatchDecision& d, const SlotExogenous& x,
                            std::span<const EssSpec> specs, const MarketSpec& market) {
  if (d.ess.size() != specs.size()) throw DomainError("slot_services: ESS count mismatch");
  const double ts = market.slot_hours;
  double charge_renewable = 0.0, reg_energy = 0.0, reserve = 0.0, bill = 0.0, aging = 0.0;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto& e = d.ess[i];
    charge_renewable += e.charge_from_renewable;
    reg_energy += e.discharge_for_regulation - e.charge_for_regulation;
    reserve += e.reserve_commit;
    bill += e.discharge_bill - e.charge_future;
    aging += aging_cost_eval(specs[i], e.charge_total, e.discharge_total, ts);
  }
  ServiceTotals out;
  out.r_sc = ts * x.price_purchase * (d.renewable_selfuse + charge_renewable) +
             ts * x.price_sale * d.renewable_export;
  out.r_fr = ts * x.perf_score * regulation_power(d, x) *
                 (x.price_rmccp + x.price_rmpcp * x.mileage_ratio) +
             ts * x.price_purchase * reg_energy;
  out.r_sr = x.price_reserve * ts * reserve;
  out.r_br = ts * x.price_purchase * bill;
  out.aging_cost = aging;
  return out;
}

std::vector<DispatchDecision> recover_service_split(const ProblemInstance& p,
                                                    std::span<const double> x) {
  if (x.size() != p.columns.size())
    throw std::invalid_argument("recover_service_split: primal size mismatch");
  auto val = [&](int col) {
    const double v = x[col];
    return std::abs(v) < 1e-11 ? 0.0 : v;
  };
  auto flag = [&](int col) { return x[col] > 0.5 ? 1 : 0; };

  std::vector<DispatchDecision> out;
  out.reserve(p.slots.size());
  for (const auto& sc : p.slots) {
    DispatchDecision d;
    d.renewable_selfuse = val(sc.renewable_selfuse);
    d.renewable_export = val(sc.renewable_export);
    d.reg_participate = flag(sc.reg_participate);
    d.reserve_participate = flag(sc.reserve_participate);
    for (const auto& c : sc.ess) {
      EssDispatch e;
      e.charge_total = val(c.charge);
      e.discharge_total = val(c.discharge);
      e.charge_from_renewable = val(c.charge_renewable);
      e.charge_for_regulation = val(c.charge_regulation);
      e.discharge_for_regulation = val(c.discharge_regulation);
      e.reserve_commit = val(c.reserve);
      e.mode_flag = flag(c.mode);
      e.charge_future = e.charge_total - e.charge_from_renewable - e.charge_for_regulation;
      e.discharge_bill = e.discharge_total - e.discharge_for_regulation;
      const double tol_c = 1e-9 * std::max(1.0, e.charge_total);
      const double tol_d = 1e-9 * std::max(1.0, e.discharge_total);
      if (e.charge_future < -tol_c || e.discharge_bill < -tol_d)
        throw NumericalError("recover_service_split: negative recovered rate");
      // Clip round-off so the recovered split stays nonnegative; the
      // aggregate is then re-derived from the parts.
      if (e.charge_future < 0.0) {
        e.charge_future = 0.0;
        e.charge_total = e.charge_from_renewable + e.charge_for_regulation;
      }
      if (e.discharge_bill < 0.0) {
        e.discharge_bill = 0.0;
        e.discharge_total = e.discharge_for_regulation;
      }
      d.ess.push_back(e);
    }
    out.push_back(std::move(d));
  }
  return out;
}

ServiceTotals objective_decomposition(const SolveResult& result, const ProblemInstance& p) {
  if (result.status != SolveStatus::Optimal)
    throw std::invalid_argument("objective_decomposition: result is not optimal");
  const auto decisions =
      result.decisions.empty() ? recover_service_split(p, result.primal) : result.decisions;
  ServiceTotals total;
  for (std::size_t k = 0; k < decisions.size(); ++k)
    total += slot_services(decisions[k], p.horizon_data[k], p.specs, p.market);
  return total;
}

void write_problem_text(const ProblemInstance& p, std::ostream& out) {
  out.precision(17);
  out << "# decision_time " << p.decision_time << " horizon " << p.horizon << '\n';
  for (const auto& c : p.columns) {
    out << (c.binary ? "binary " : "column ") << c.name << " lower " << c.lower << " upper "
        << c.upper << " objective " << c.objective << '\n';
  }
  for (const auto& r : p.rows) {
    out << "row " << r.name << " :";
    for (const auto& t : r.terms) out << ' ' << t.coef << ' ' << p.columns[t.col].name;
    out << (r.sense == Sense::LessEqual ? " <= " : r.sense == Sense::GreaterEqual ? " >= " : " = ")
        << r.rhs << '\n';
  }
  for (const auto& e : p.epigraphs) {
    const auto& r = e.row;
    const auto& pc = p.columns[e.charge_col].name;
    const auto& pd = p.columns[e.discharge_col].name;
    out << "epigraph k" << r.segment << " : " << r.quad_charge << ' ' << pc << "^2 "
        << r.lin_charge << ' ' << pc << ' ' << r.quad_discharge << ' ' << pd << "^2 "
        << r.lin_discharge << ' ' << pd << " -1 " << p.columns[e.aux_col].name << " <= 0\n";
  }
}

}  // namespace essecon
