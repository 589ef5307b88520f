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

#include "essecon/miqp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>

namespace essecon {

namespace {

std::vector<double> column_field(const ProblemInstance& p, double Column::*field) {
  std::vector<double> out;
  out.reserve(p.columns.size());
  for (const auto& c : p.columns) out.push_back(c.*field);
  return out;
}

}  // namespace

RelaxationSolver::RelaxationSolver(const ProblemInstance& instance, const SolverConfig& config)
    : instance_(instance),
      config_(config),
      lp_(column_field(instance, &Column::objective), column_field(instance, &Column::lower),
          column_field(instance, &Column::upper)) {
  if (config.integrality_tol <= 0 || config.gap <= 0 || config.oa_tol <= 0)
    throw std::invalid_argument("SolverConfig: tolerances must be positive");
  std::vector<LinearRow> initial(instance.rows);
  for (std::size_t e = 0; e < instance.epigraphs.size(); ++e) {
    const auto& ep = instance.epigraphs[e];
    initial.push_back(tangent_cut(ep, 0.0, 0.0));
    if (!ep.row.is_linear()) {
      quadratic_epigraphs_.push_back(static_cast<int>(e));
      initial.push_back(tangent_cut(ep, instance.columns[ep.charge_col].upper,
                                    instance.columns[ep.discharge_col].upper));
    }
  }
  lp_.add_rows(initial);
  cuts_.assign(initial.begin() + static_cast<long>(instance.rows.size()), initial.end());
  initial_cuts_ = cuts_.size();
}

void RelaxationSolver::rebuild_lp() {
  DualSimplex fresh(column_field(instance_, &Column::objective),
                    column_field(instance_, &Column::lower),
                    column_field(instance_, &Column::upper));
  for (int j = 0; j < lp_.num_cols(); ++j) fresh.set_bounds(j, lp_.lower(j), lp_.upper(j));
  fresh.add_rows(instance_.rows);
  fresh.add_rows(std::span(cuts_).first(initial_cuts_));
  iterations_before_rebuild_ += lp_.total_iterations();
  lp_ = std::move(fresh);
}

LinearRow RelaxationSolver::tangent_cut(const EpigraphConstraint& e, double pc, double pd) {
  // f(x) >= f(x0) + grad f(x0) (x - x0) for convex f.
  const auto& r = e.row;
  LinearRow cut;
  cut.terms = {{e.charge_col, r.d_charge(pc)}, {e.discharge_col, r.d_discharge(pd)},
               {e.aux_col, -1.0}};
  cut.sense = Sense::LessEqual;
  cut.rhs = r.quad_charge * pc * pc + r.quad_discharge * pd * pd;
  cut.name = "oa_cut";
  return cut;
}

void RelaxationSolver::set_fixings(std::span<const std::int8_t> fixings) {
  if (fixings.size() != instance_.binaries.size())
    throw std::invalid_argument("set_fixings: one entry per binary expected");
  for (std::size_t b = 0; b < fixings.size(); ++b) {
    const int col = instance_.binaries[b];
    if (fixings[b] < 0) {
      release(col);
    } else {
      fix(col, fixings[b]);
    }
  }
}

void RelaxationSolver::fix(int col, int value) {
  const double v = value ? 1.0 : 0.0;
  const auto& c = instance_.columns[col];
  lp_.set_bounds(col, std::clamp(v, c.lower, c.upper), std::clamp(v, c.lower, c.upper));
}

void RelaxationSolver::release(int col) {
  const auto& c = instance_.columns[col];
  lp_.set_bounds(col, c.lower, c.upper);
}

void RelaxationSolver::purge_slack_cuts() {
  // The initial cuts include exact linear aging rows and are never dropped.
  const int first = static_cast<int>(instance_.rows.size() + initial_cuts_);
  const int limit = std::max(32, 4 * static_cast<int>(quadratic_epigraphs_.size()));
  if (lp_.num_rows() - first <= limit) return;
  std::vector<int> rows;
  for (int r = first; r < lp_.num_rows(); ++r) rows.push_back(r);
  lp_.remove_basic_rows(rows);
}

RelaxationSolver::Result RelaxationSolver::solve(double cutoff) {
  Result res;
  purge_slack_cuts();
  int rebuilds = 0;
  while (true) {
    try {
      res.lp = lp_.solve();
    } catch (const NumericalError&) {
      // Nearly parallel cuts can make the warm basis singular. Start over
      // from the model rows; the loop below regenerates the cuts it needs.
      if (++rebuilds > 2) throw;
      rebuild_lp();
      continue;
    }
    if (res.lp.status != LpStatus::Optimal) return res;
    if (res.lp.objective >= cutoff) {
      res.cut_off = true;
      return res;
    }
    const auto& x = res.lp.values;
    std::vector<LinearRow> fresh;
    for (int e : quadratic_epigraphs_) {
      const auto& ep = instance_.epigraphs[e];
      const double pc = x[ep.charge_col];
      const double pd = x[ep.discharge_col];
      const double f = ep.row.value(pc, pd);
      if (f - x[ep.aux_col] > config_.oa_tol * std::max(1.0, std::abs(f))) {
        fresh.push_back(tangent_cut(ep, pc, pd));
      }
    }
    if (fresh.empty()) return res;
    lp_.add_rows(fresh);
    cuts_.insert(cuts_.end(), fresh.begin(), fresh.end());
    if (++res.cut_rounds > config_.cut_round_limit)
      throw SolverError("outer approximation did not converge within " +
                        std::to_string(config_.cut_round_limit) + " cut rounds");
  }
}

double RelaxationSolver::polish(std::vector<double>& x) const {
  for (const auto& ep : instance_.epigraphs) {
    const double f = ep.row.value(x[ep.charge_col], x[ep.discharge_col]);
    if (f > x[ep.aux_col]) x[ep.aux_col] = f;
  }
  return instance_.objective_value(x);
}

LpSolution solve_relaxation(const ProblemInstance& instance, std::span<const BinaryFixing> fixed,
                            const SolverConfig& config) {
  RelaxationSolver relax(instance, config);
  for (const auto& f : fixed) {
    if (!instance.columns.at(f.col).binary)
      throw std::invalid_argument("solve_relaxation: fixing a non-binary column");
    relax.fix(f.col, f.value);
  }
  return relax.solve().lp;
}

namespace {

struct OpenNode {
  double bound;
  long id;
  long parent;
  std::vector<std::int8_t> fixings;
};

struct WorseBound {
  bool operator()(const OpenNode& a, const OpenNode& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;
  }
};

double gap_allowance(const SolverConfig& config, double incumbent) {
  return config.gap * std::max(1.0, std::abs(incumbent));
}

/// Re-solves with binaries pinned to their rounded values so that the returned
/// primal is exactly integral.
std::vector<double> integral_point(RelaxationSolver& relax, const ProblemInstance& p,
                                   const std::vector<double>& x, std::vector<std::int8_t> fixings,
                                   bool& ok) {
  bool exact = true;
  for (std::size_t b = 0; b < p.binaries.size(); ++b) {
    const double v = x[p.binaries[b]];
    if (v != 0.0 && v != 1.0) exact = false;
  }
  ok = true;
  if (exact) return x;
  for (std::size_t b = 0; b < p.binaries.size(); ++b)
    fixings[b] = static_cast<std::int8_t>(std::lround(x[p.binaries[b]]));
  relax.set_fixings(fixings);
  auto res = relax.solve();
  if (res.lp.status != LpStatus::Optimal) {
    ok = false;
    return {};
  }
  return res.lp.values;
}

// Rounding directions that no linear row resists, per binary.
struct RoundingLocks {
  std::vector<bool> up_safe;
  std::vector<bool> down_safe;
};

RoundingLocks rounding_locks(const ProblemInstance& p) {
  std::vector<int> index(p.columns.size(), -1);
  for (std::size_t b = 0; b < p.binaries.size(); ++b) index[p.binaries[b]] = static_cast<int>(b);
  RoundingLocks locks{std::vector<bool>(p.binaries.size(), true),
                      std::vector<bool>(p.binaries.size(), true)};
  std::map<int, double> merged;
  for (const auto& row : p.rows) {
    merged.clear();
    for (const auto& t : row.terms)
      if (index[t.col] >= 0) merged[index[t.col]] += t.coef;
    for (const auto& [b, coef] : merged) {
      if (coef == 0.0) continue;
      const bool raises = row.sense == Sense::GreaterEqual ? coef < 0.0 : coef > 0.0;
      if (row.sense == Sense::Equal || raises) locks.up_safe[b] = false;
      if (row.sense == Sense::Equal || !raises) locks.down_safe[b] = false;
    }
  }
  return locks;
}

/// Rounds every fractional binary of x in a direction no row resists. Returns
/// false if some fractional binary has no such direction. Sets exact to false
/// when a nearly integral binary was snapped against a lock, so the continuous
/// part of x may no longer be feasible.
bool round_by_locks(const ProblemInstance& p, const RoundingLocks& locks,
                    const std::vector<double>& x, double tol,
                    std::vector<std::int8_t>& fixings, bool& exact) {
  exact = true;
  for (std::size_t b = 0; b < p.binaries.size(); ++b) {
    const int col = p.binaries[b];
    const double v = x[col];
    if (v <= tol) {
      fixings[b] = 0;
      if (v != 0.0 && !locks.down_safe[b]) exact = false;
    } else if (v >= 1.0 - tol) {
      fixings[b] = 1;
      if (v != 1.0 && !locks.up_safe[b]) exact = false;
    } else if (locks.up_safe[b] && (p.columns[col].objective <= 0.0 || !locks.down_safe[b])) {
      fixings[b] = 1;
    } else if (locks.down_safe[b]) {
      fixings[b] = 0;
    } else {
      return false;
    }
  }
  return true;
}

SolveResult finish(const ProblemInstance& p, SolveResult r) {
  if (r.primal.empty()) return r;
  // A basic fixed column carries round-off; report binaries exactly.
  for (int b : p.binaries) r.primal[b] = std::round(r.primal[b]);
  // With v binary the McCormick rows force z = v * p^sr; drop the LP round-off.
  for (const auto& slot : p.slots) {
    for (const auto& c : slot.ess) r.primal[c.mccormick] = r.primal[c.mode] * r.primal[c.reserve];
  }
  r.decisions = recover_service_split(p, r.primal);
  return r;
}

}  // namespace

SolveResult solve(const ProblemInstance& instance, const SolverConfig& config,
                  std::vector<NodeRecord>* trace) {
  RelaxationSolver relax(instance, config);
  const std::size_t nb = instance.binaries.size();

  SolveResult result;
  double incumbent = kInf;
  std::vector<double> best;

  std::priority_queue<OpenNode, std::vector<OpenNode>, WorseBound> open;
  open.push({-kInf, 0, -1, std::vector<std::int8_t>(nb, -1)});
  long next_id = 1;
  long processed = 0;
  long cut_rounds = 0;
  bool hit_node_limit = false;
  const auto locks = rounding_locks(instance);
  std::vector<std::int8_t> rounded(nb, 0);

  auto pruned = [&](double bound) {
    return std::isfinite(incumbent) && bound >= incumbent - gap_allowance(config, incumbent);
  };

  while (!open.empty()) {
    if (pruned(open.top().bound)) break;
    if (processed >= config.node_limit) {
      hit_node_limit = true;
      break;
    }
    OpenNode node = open.top();
    open.pop();
    ++processed;

    relax.set_fixings(node.fixings);
    const auto res = relax.solve(std::isfinite(incumbent)
                                     ? incumbent - gap_allowance(config, incumbent)
                                     : kInf);
    cut_rounds += res.cut_rounds;
    NodeRecord rec{node.id, node.parent, 0.0, res.lp.status != LpStatus::Optimal};
    if (res.lp.status != LpStatus::Optimal) {
      if (trace) trace->push_back(rec);
      continue;
    }
    const auto& x = res.lp.values;
    // The parent bound holds for every descendant; the cut pool differs
    // between nodes, so the LP value alone can dip below it within oa_tol.
    const double bound = std::max(res.lp.objective, node.bound);
    rec.bound = bound;
    if (trace) trace->push_back(rec);
    if (pruned(bound)) continue;

    // Most fractional binary, preferring those that cannot be rounded safely;
    // ties go to the lowest column index.
    int branch = -1;
    bool branch_roundable = true;
    double best_frac = config.integrality_tol;
    for (std::size_t b = 0; b < nb; ++b) {
      const int col = instance.binaries[b];
      const double v = x[col];
      const double frac = std::min(v - std::floor(v), std::ceil(v) - v);
      if (frac <= config.integrality_tol) continue;
      const bool roundable = locks.up_safe[b] || locks.down_safe[b];
      const bool better = branch < 0 || (branch_roundable && !roundable) ||
                          (roundable == branch_roundable &&
                           (frac > best_frac + 1e-12 ||
                            (std::abs(frac - best_frac) <= 1e-12 &&
                             col < instance.binaries[branch])));
      if (better) {
        best_frac = frac;
        branch = static_cast<int>(b);
        branch_roundable = roundable;
      }
    }

    bool exact = true;
    if (branch >= 0 && branch_roundable &&
        round_by_locks(instance, locks, x, config.integrality_tol, rounded, exact)) {
      std::vector<double> point;
      if (exact) {
        point = x;
        for (std::size_t b = 0; b < nb; ++b) point[instance.binaries[b]] = rounded[b];
      } else {
        relax.set_fixings(rounded);
        const auto fixed = relax.solve();
        if (fixed.lp.status == LpStatus::Optimal) point = fixed.lp.values;
      }
      if (!point.empty()) {
        const double value = relax.polish(point);
        if (value < incumbent) {
          incumbent = value;
          best = std::move(point);
        }
      }
      if (pruned(bound)) continue;
    }

    if (branch < 0) {
      bool ok = false;
      auto point = integral_point(relax, instance, x, node.fixings, ok);
      if (!ok) continue;
      const double value = relax.polish(point);
      if (value < incumbent) {
        incumbent = value;
        best = std::move(point);
      }
      continue;
    }

    for (std::int8_t v : {std::int8_t{0}, std::int8_t{1}}) {
      OpenNode child{bound, next_id++, node.id, node.fixings};
      child.fixings[branch] = v;
      open.push(std::move(child));
    }
  }

  double global_bound = incumbent;
  if (!open.empty()) global_bound = std::min(global_bound, open.top().bound);

  result.nodes = processed;
  result.cut_rounds = cut_rounds;
  result.lp_iterations = relax.lp_iterations();
  result.bound = global_bound;
  if (best.empty()) {
    result.status = hit_node_limit ? SolveStatus::NodeLimit : SolveStatus::Infeasible;
    return result;
  }
  result.objective = incumbent;
  result.primal = std::move(best);
  if (hit_node_limit && incumbent - global_bound > gap_allowance(config, incumbent)) {
    result.status = SolveStatus::NodeLimit;
  } else {
    result.status = SolveStatus::Optimal;
  }
  return finish(instance, std::move(result));
}

SolveResult brute_force_oracle(const ProblemInstance& instance, const SolverConfig& config) {
  const std::size_t nb = instance.binaries.size();
  if (nb > 20) throw SolverError("brute_force_oracle: more than 20 binaries");
  RelaxationSolver relax(instance, config);

  SolveResult result;
  double incumbent = kInf;
  std::vector<double> best;
  std::vector<std::int8_t> fixings(nb, 0);
  const unsigned long count = 1UL << nb;
  long cut_rounds = 0;
  // Gray-code order: consecutive assignments differ in one binary, which keeps
  // the warm-started LP close to its previous optimum.
  for (unsigned long i = 0; i < count; ++i) {
    const unsigned long gray = i ^ (i >> 1);
    for (std::size_t b = 0; b < nb; ++b) fixings[b] = static_cast<std::int8_t>((gray >> b) & 1UL);
    relax.set_fixings(fixings);
    // The LP bound under-estimates this assignment, so stopping once it
    // reaches the incumbent cannot discard a better point.
    const auto res = relax.solve(incumbent);
    cut_rounds += res.cut_rounds;
    if (res.lp.status != LpStatus::Optimal || res.cut_off) continue;
    auto point = res.lp.values;
    const double value = relax.polish(point);
    if (value < incumbent) {
      incumbent = value;
      best = std::move(point);
    }
  }
  result.nodes = static_cast<long>(count);
  result.cut_rounds = cut_rounds;
  result.lp_iterations = relax.lp_iterations();
  if (best.empty()) {
    result.status = SolveStatus::Infeasible;
    return result;
  }
  result.status = SolveStatus::Optimal;
  result.objective = incumbent;
  result.bound = incumbent;
  result.primal = std::move(best);
  return finish(instance, std::move(result));
}

FeasibilityReport check_feasibility(const ProblemInstance& p, std::span<const double> x) {
  FeasibilityReport rep;
  for (const auto& r : p.rows) rep.linear = std::max(rep.linear, r.violation(x));
  for (const auto& e : p.epigraphs) rep.epigraph = std::max(rep.epigraph, e.violation(x));
  for (std::size_t j = 0; j < p.columns.size(); ++j) {
    const auto& c = p.columns[j];
    rep.bounds = std::max({rep.bounds, c.lower - x[j], x[j] - c.upper});
  }
  return rep;
}

}  // namespace essecon
