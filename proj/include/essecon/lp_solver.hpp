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

#include <Eigen/Dense>

#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace essecon {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { LessEqual, GreaterEqual, Equal };

struct Term {
  int col = 0;
  double coef = 0.0;
};

struct LinearRow {
  std::vector<Term> terms;
  Sense sense = Sense::LessEqual;
  double rhs = 0.0;
  std::string name;

  double activity(std::span<const double> x) const {
    double s = 0.0;
    for (const auto& t : terms) s += t.coef * x[t.col];
    return s;
  }
  /// Amount by which x violates the row (0 when satisfied).
  double violation(std::span<const double> x) const;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };
const char* to_string(LpStatus s);

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> values;
  double objective = 0.0;
  std::vector<double> duals;  // one per row, in the caller's row scaling
  long iterations = 0;
};

/// min cost'x  s.t.  rows,  col_lower <= x <= col_upper.
struct LpModel {
  std::vector<double> cost;
  std::vector<double> col_lower;
  std::vector<double> col_upper;
  std::vector<LinearRow> rows;
};

/// One-shot solve. Infinite column bounds are replaced by a large artificial
/// box; a solution resting on that box is reported as unbounded.
LpSolution solve_lp(const LpModel& model);

/// Bounded dual simplex on an explicit dense basis inverse.
///
/// Every structural column must be boxed, which makes the slack basis dual
/// feasible from the start and keeps any basis dual feasible after bound
/// changes (nonbasic columns are moved to the bound matching the sign of their
/// reduced cost). Rows may be appended at any time and rows whose logical is
/// basic may be removed; both keep the current basis usable as a warm start.
class DualSimplex {
 public:
  DualSimplex(std::vector<double> cost, std::vector<double> lower, std::vector<double> upper);

  int num_cols() const { return n_; }
  int num_rows() const { return m_; }

  /// Appends lower <= terms'x <= upper; returns the row index. The row is
  /// scaled internally to unit max-abs coefficient.
  int add_row(std::span<const Term> terms, double lower, double upper);
  int add_row(const LinearRow& row);
  /// Appends several rows with a single resize of the basis inverse.
  void add_rows(std::span<const LinearRow> rows);

  /// Removes rows whose logical variable is basic. Other rows are ignored.
  /// Returns the number of rows removed; surviving rows keep their order.
  int remove_basic_rows(std::span<const int> rows);
  bool row_is_basic(int row) const;

  void set_bounds(int col, double lower, double upper);
  double lower(int col) const { return lb_[col]; }
  double upper(int col) const { return ub_[col]; }

  /// Runs the dual simplex from the current basis.
  LpSolution solve();

  long total_iterations() const { return total_iterations_; }

 private:
  enum class VarStatus : std::uint8_t { Basic, AtLower, AtUpper };
  struct RangedRow {
    std::span<const Term> terms;
    double lower;
    double upper;
  };

  void append_rows(std::span<const RangedRow> rows);

  int num_vars() const { return n_ + m_; }
  bool is_logical(int j) const { return j >= n_; }
  double alpha_for(int j, const Eigen::VectorXd& rho) const;
  void column_times_binv(int j, Eigen::VectorXd& out) const;
  void place_nonbasic(int j);
  void refactor();
  void compute_primal();
  void compute_duals();
  /// Largest relative residual of the row equations at x and of the zero
  /// reduced costs of basic columns; grows as the explicit inverse drifts.
  double basis_residual() const;
  void fix_dual_infeasibilities();
  bool dual_feasible() const;
  void pivot(int r, int q, const Eigen::VectorXd& alpha_q, double step);
  LpSolution make_solution(LpStatus status, long iterations) const;

  int n_ = 0;
  int m_ = 0;
  std::vector<double> cost_;
  std::vector<double> lb_, ub_;  // structurals then logicals (scaled)
  std::vector<double> row_scale_;
  std::vector<std::vector<std::pair<int, double>>> cols_;  // scaled structural columns
  std::vector<VarStatus> status_;
  std::vector<int> head_;     // basis position -> variable
  std::vector<int> basis_pos_;  // variable -> basis position or -1
  std::vector<double> x_;
  std::vector<double> d_;
  Eigen::MatrixXd binv_;
  int pivots_since_refactor_ = 0;
  bool primal_stale_ = true;
  long total_iterations_ = 0;
};

}  // namespace essecon
