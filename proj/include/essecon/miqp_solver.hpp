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
#include <span>
#include <stdexcept>
#include <vector>

#include "essecon/lp_solver.hpp"
#include "essecon/problem_builder.hpp"

namespace essecon {

struct SolverConfig {
  double integrality_tol = 1e-6;
  double gap = 1e-6;      // relative, against max(1, |incumbent|)
  double oa_tol = 1e-7;   // epigraph violation, relative to max(1, |row value|)
  long node_limit = 100000;
  int cut_round_limit = 50;
  std::uint64_t seed = 0;  // reserved
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BinaryFixing {
  int col = -1;
  int value = 0;
};

/// Continuous relaxation of one instance with a persistent cut pool.
///
/// Quadratic epigraph rows are handled by tangent cuts added at violating
/// points. Tangents under-estimate the convex rows, so every cut stays valid
/// for the whole branch-and-bound tree and the LP value is always a lower
/// bound. When the LP carries too many cuts, the slack ones are dropped from
/// it before the next solve; cuts() keeps every cut generated.
class RelaxationSolver {
 public:
  RelaxationSolver(const ProblemInstance& instance, const SolverConfig& config);

  struct Result {
    LpSolution lp;
    int cut_rounds = 0;
    /// The LP bound reached the cutoff before the cuts converged; lp.values
    /// is then not a converged relaxation point.
    bool cut_off = false;
  };

  /// Sets the box of every binary: -1 leaves it in [0,1], 0/1 fixes it.
  void set_fixings(std::span<const std::int8_t> fixings);
  void fix(int col, int value);
  void release(int col);

  /// Stops adding cuts once the LP bound reaches cutoff.
  Result solve(double cutoff = kInf);

  /// Objective of x after raising each aging auxiliary to the exact epigraph
  /// value; x is updated in place.
  double polish(std::vector<double>& x) const;

  const std::vector<LinearRow>& cuts() const { return cuts_; }
  long lp_iterations() const { return iterations_before_rebuild_ + lp_.total_iterations(); }

 private:
  static LinearRow tangent_cut(const EpigraphConstraint& e, double pc, double pd);
  void purge_slack_cuts();
  void rebuild_lp();

  const ProblemInstance& instance_;
  SolverConfig config_;
  DualSimplex lp_;
  std::vector<int> quadratic_epigraphs_;
  std::vector<LinearRow> cuts_;
  std::size_t initial_cuts_ = 0;
  long iterations_before_rebuild_ = 0;
};

/// Relaxation with the given binaries fixed and the rest relaxed to [0,1].
LpSolution solve_relaxation(const ProblemInstance& instance, std::span<const BinaryFixing> fixed,
                            const SolverConfig& config = {});

struct NodeRecord {
  long id = 0;
  long parent = -1;
  double bound = 0.0;
  bool infeasible = false;
};

/// Best-bound branch and bound. When trace is given every processed node is
/// appended to it.
SolveResult solve(const ProblemInstance& instance, const SolverConfig& config = {},
                  std::vector<NodeRecord>* trace = nullptr);

/// Enumerates every binary assignment. Limited to 20 binaries.
SolveResult brute_force_oracle(const ProblemInstance& instance, const SolverConfig& config = {});

/// Largest violation of the linear rows and of the epigraph rows at x.
struct FeasibilityReport {
  double linear = 0.0;
  double epigraph = 0.0;
  double bounds = 0.0;
};
FeasibilityReport check_feasibility(const ProblemInstance& instance, std::span<const double> x);

}  // namespace essecon
