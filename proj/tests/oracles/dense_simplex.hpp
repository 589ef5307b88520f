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

// Textbook two-phase tableau simplex with Bland's rule. Slow and simple on
// purpose: it shares no code with the library's dual simplex and serves as
// a reference for small LPs in the tests.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace oracle {

enum class RowSense { Le, Ge, Eq };

struct DenseRow {
  std::vector<double> coef;  // one per variable
  RowSense sense = RowSense::Le;
  double rhs = 0.0;
};

struct DenseLp {
  std::vector<double> cost;
  std::vector<double> lower;  // -inf allowed (variable is split)
  std::vector<double> upper;  // +inf allowed
  std::vector<DenseRow> rows;
};

enum class DenseStatus { Optimal, Infeasible, Unbounded };

struct DenseResult {
  DenseStatus status = DenseStatus::Infeasible;
  double objective = 0.0;
  std::vector<double> x;
};

namespace detail {

class Tableau {
 public:
  Tableau(int rows, int cols) : m_(rows), n_(cols), t_(rows + 1, std::vector<double>(cols + 1)) {}

  double& at(int r, int c) { return t_[r][c]; }
  double& rhs(int r) { return t_[r][n_]; }
  std::vector<int> basis;

  void pivot(int r, int q) {
    const double p = t_[r][q];
    for (auto& v : t_[r]) v /= p;
    for (int i = 0; i <= m_; ++i) {
      if (i == r) continue;
      const double f = t_[i][q];
      if (f == 0.0) continue;
      for (int j = 0; j <= n_; ++j) t_[i][j] -= f * t_[r][j];
      t_[i][q] = 0.0;
    }
    basis[r] = q;
  }

  // Minimizes the objective row m_ over columns allowed[j]. Returns false
  // when unbounded.
  bool run(const std::vector<bool>& allowed, double tol) {
    for (long iter = 0; iter < 1000000; ++iter) {
      int q = -1;
      for (int j = 0; j < n_; ++j) {
        if (allowed[j] && t_[m_][j] < -tol) {
          q = j;
          break;
        }
      }
      if (q < 0) return true;
      int r = -1;
      double best = 0.0;
      for (int i = 0; i < m_; ++i) {
        if (t_[i][q] <= tol) continue;
        const double ratio = t_[i][n_] / t_[i][q];
        if (r < 0 || ratio < best - 1e-12 ||
            (std::abs(ratio - best) <= 1e-12 && basis[i] < basis[r])) {
          r = i;
          best = ratio;
        }
      }
      if (r < 0) return false;
      pivot(r, q);
    }
    throw std::runtime_error("dense simplex: iteration limit");
  }

  // Sets the objective row to cost and prices out the basic columns.
  void set_objective(const std::vector<double>& cost) {
    std::fill(t_[m_].begin(), t_[m_].end(), 0.0);
    for (int j = 0; j < n_; ++j) t_[m_][j] = cost[j];
    for (int i = 0; i < m_; ++i) {
      const double f = t_[m_][basis[i]];
      if (f == 0.0) continue;
      for (int j = 0; j <= n_; ++j) t_[m_][j] -= f * t_[i][j];
    }
  }

  double objective() const { return -t_[m_][n_]; }
  int rows() const { return m_; }
  int cols() const { return n_; }

 private:
  int m_, n_;
  std::vector<std::vector<double>> t_;
};

}  // namespace detail

inline DenseResult solve_dense(const DenseLp& lp, double tol = 1e-10) {
  const int nv = static_cast<int>(lp.cost.size());
  constexpr double inf = std::numeric_limits<double>::infinity();

  // Substitute x = lower + y (y >= 0), or x = y+ - y- for free variables.
  std::vector<int> pos(nv), neg(nv, -1);
  int ny = 0;
  for (int j = 0; j < nv; ++j) {
    pos[j] = ny++;
    if (lp.lower[j] == -inf) neg[j] = ny++;
  }
  auto shift = [&](int j) { return lp.lower[j] == -inf ? 0.0 : lp.lower[j]; };

  std::vector<DenseRow> rows;
  for (const auto& r : lp.rows) {
    DenseRow s;
    s.coef.assign(ny, 0.0);
    s.sense = r.sense;
    s.rhs = r.rhs;
    double scale = 0.0;
    for (int j = 0; j < nv; ++j) {
      s.coef[pos[j]] += r.coef[j];
      if (neg[j] >= 0) s.coef[neg[j]] -= r.coef[j];
      s.rhs -= r.coef[j] * shift(j);
      scale = std::max(scale, std::abs(r.coef[j]));
    }
    if (scale > 0.0) {
      for (auto& c : s.coef) c /= scale;
      s.rhs /= scale;
    }
    rows.push_back(std::move(s));
  }
  for (int j = 0; j < nv; ++j) {
    if (lp.upper[j] == inf) continue;
    DenseRow s;
    s.coef.assign(ny, 0.0);
    s.coef[pos[j]] = 1.0;
    if (neg[j] >= 0) s.coef[neg[j]] = -1.0;
    s.rhs = lp.upper[j] - shift(j);
    rows.push_back(std::move(s));
  }
  for (auto& r : rows) {
    if (r.rhs < 0.0) {
      for (auto& c : r.coef) c = -c;
      r.rhs = -r.rhs;
      if (r.sense == RowSense::Le) r.sense = RowSense::Ge;
      else if (r.sense == RowSense::Ge) r.sense = RowSense::Le;
    }
  }

  const int m = static_cast<int>(rows.size());
  int n_slack = 0, n_art = 0;
  for (const auto& r : rows) {
    if (r.sense != RowSense::Eq) ++n_slack;
    if (r.sense != RowSense::Le) ++n_art;
  }
  const int first_slack = ny, first_art = ny + n_slack, ncols = ny + n_slack + n_art;
  detail::Tableau tab(m, ncols);
  tab.basis.assign(m, -1);
  int s = first_slack, a = first_art;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < ny; ++j) tab.at(i, j) = rows[i].coef[j];
    tab.rhs(i) = rows[i].rhs;
    if (rows[i].sense == RowSense::Le) {
      tab.at(i, s) = 1.0;
      tab.basis[i] = s++;
    } else {
      if (rows[i].sense == RowSense::Ge) tab.at(i, s++) = -1.0;
      tab.at(i, a) = 1.0;
      tab.basis[i] = a++;
    }
  }

  DenseResult out;
  std::vector<bool> allowed(ncols, true);
  if (n_art > 0) {
    std::vector<double> phase1(ncols, 0.0);
    for (int j = first_art; j < ncols; ++j) phase1[j] = 1.0;
    tab.set_objective(phase1);
    tab.run(allowed, tol);
    if (tab.objective() > 1e-7) return out;
    // Drive zero-level artificials out of the basis where possible.
    for (int i = 0; i < m; ++i) {
      if (tab.basis[i] < first_art) continue;
      for (int j = 0; j < first_art; ++j) {
        if (std::abs(tab.at(i, j)) > 1e-9) {
          tab.pivot(i, j);
          break;
        }
      }
    }
    for (int j = first_art; j < ncols; ++j) allowed[j] = false;
  }

  std::vector<double> cost(ncols, 0.0);
  for (int j = 0; j < nv; ++j) {
    cost[pos[j]] += lp.cost[j];
    if (neg[j] >= 0) cost[neg[j]] -= lp.cost[j];
  }
  tab.set_objective(cost);
  if (!tab.run(allowed, tol)) {
    out.status = DenseStatus::Unbounded;
    return out;
  }

  std::vector<double> y(ncols, 0.0);
  for (int i = 0; i < m; ++i) y[tab.basis[i]] = tab.rhs(i);
  out.x.resize(nv);
  for (int j = 0; j < nv; ++j) {
    out.x[j] = shift(j) + y[pos[j]] - (neg[j] >= 0 ? y[neg[j]] : 0.0);
  }
  out.objective = 0.0;
  for (int j = 0; j < nv; ++j) out.objective += lp.cost[j] * out.x[j];
  out.status = DenseStatus::Optimal;
  return out;
}

}  // namespace oracle
