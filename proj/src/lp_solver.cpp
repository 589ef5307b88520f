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

#include "essecon/lp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace essecon {

namespace {

constexpr double kPrimalTol = 1e-9;
constexpr double kRawPrimalTol = 1e-8;
constexpr double kDualTol = 1e-9;
constexpr double kPivotTol = 1e-9;
constexpr double kResidualTol = 1e-10;
constexpr int kRefactorInterval = 200;
constexpr double kArtificialBound = 1e7;

}  // namespace

const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
  }
  return "?";
}

double LinearRow::violation(std::span<const double> x) const {
  const double a = activity(x);
  switch (sense) {
    case Sense::LessEqual: return std::max(0.0, a - rhs);
    case Sense::GreaterEqual: return std::max(0.0, rhs - a);
    case Sense::Equal: return std::abs(a - rhs);
  }
  return 0.0;
}

DualSimplex::DualSimplex(std::vector<double> cost, std::vector<double> lower,
                         std::vector<double> upper)
    : n_(static_cast<int>(cost.size())),
      cost_(std::move(cost)),
      lb_(std::move(lower)),
      ub_(std::move(upper)),
      cols_(n_),
      status_(n_, VarStatus::AtLower),
      basis_pos_(n_, -1),
      x_(n_, 0.0),
      d_(cost_) {
  if (static_cast<int>(lb_.size()) != n_ || static_cast<int>(ub_.size()) != n_)
    throw std::invalid_argument("DualSimplex: bound vectors must match the cost vector");
  for (int j = 0; j < n_; ++j) {
    if (!std::isfinite(lb_[j]) || !std::isfinite(ub_[j]))
      throw std::invalid_argument("DualSimplex: structural columns must be boxed");
    if (lb_[j] > ub_[j]) throw std::invalid_argument("DualSimplex: lower bound above upper");
    place_nonbasic(j);
  }
}

namespace {

std::pair<double, double> row_range(const LinearRow& row) {
  switch (row.sense) {
    case Sense::LessEqual: return {-kInf, row.rhs};
    case Sense::GreaterEqual: return {row.rhs, kInf};
    case Sense::Equal: return {row.rhs, row.rhs};
  }
  return {-kInf, kInf};
}

}  // namespace

int DualSimplex::add_row(const LinearRow& row) {
  add_rows(std::span<const LinearRow>(&row, 1));
  return m_ - 1;
}

int DualSimplex::add_row(std::span<const Term> terms, double lower, double upper) {
  const RangedRow row{terms, lower, upper};
  append_rows(std::span<const RangedRow>(&row, 1));
  return m_ - 1;
}

void DualSimplex::add_rows(std::span<const LinearRow> rows) {
  std::vector<RangedRow> ranged;
  ranged.reserve(rows.size());
  for (const auto& row : rows) {
    const auto [lo, hi] = row_range(row);
    ranged.push_back({row.terms, lo, hi});
  }
  append_rows(ranged);
}

void DualSimplex::append_rows(std::span<const RangedRow> rows) {
  const int k = static_cast<int>(rows.size());
  if (k == 0) return;
  const int m0 = m_;
  // Coefficients of each new row on basic structurals, by basis position.
  std::vector<std::vector<std::pair<int, double>>> on_basis(k);

  std::map<int, double> merged;
  for (int i = 0; i < k; ++i) {
    const auto& row = rows[i];
    merged.clear();
    for (const auto& t : row.terms) {
      if (t.col < 0 || t.col >= n_)
        throw std::out_of_range("DualSimplex: row references bad column");
      merged[t.col] += t.coef;
    }
    double max_abs = 0.0;
    for (const auto& [c, v] : merged) max_abs = std::max(max_abs, std::abs(v));
    const double scale = max_abs > 0.0 ? 1.0 / max_abs : 1.0;
    const int r = m0 + i;
    double activity = 0.0;
    for (const auto& [c, v] : merged) {
      if (v == 0.0) continue;
      cols_[c].emplace_back(r, v * scale);
      activity += v * scale * x_[c];
      if (basis_pos_[c] >= 0) on_basis[i].emplace_back(basis_pos_[c], v * scale);
    }
    lb_.push_back(row.lower * scale);
    ub_.push_back(row.upper * scale);
    row_scale_.push_back(scale);
    status_.push_back(VarStatus::Basic);
    basis_pos_.push_back(r);
    head_.push_back(n_ + r);
    x_.push_back(activity);
    d_.push_back(0.0);
  }

  // New logicals are basic in new trailing positions:
  //   [B 0; C -I]^-1 = [B^-1 0; C B^-1 -I].
  Eigen::MatrixXd grown(m0 + k, m0 + k);
  grown.topRightCorner(m0, k).setZero();
  grown.bottomRows(k).setZero();
  if (m0 > 0) {
    grown.topLeftCorner(m0, m0) = binv_;
    for (int i = 0; i < k; ++i) {
      for (const auto& [p, v] : on_basis[i])
        grown.row(m0 + i).head(m0).noalias() += v * binv_.row(p);
    }
  }
  grown.bottomRightCorner(k, k).diagonal().setConstant(-1.0);
  binv_ = std::move(grown);
  m_ += k;
}

bool DualSimplex::row_is_basic(int row) const {
  return status_[n_ + row] == VarStatus::Basic;
}

int DualSimplex::remove_basic_rows(std::span<const int> rows) {
  std::vector<char> drop(m_, 0);
  int count = 0;
  for (int r : rows) {
    if (r < 0 || r >= m_ || drop[r] || !row_is_basic(r)) continue;
    drop[r] = 1;
    ++count;
  }
  if (count == 0) return 0;

  std::vector<int> keep_rows, keep_pos, new_row_index(m_, -1);
  for (int r = 0; r < m_; ++r)
    if (!drop[r]) {
      new_row_index[r] = static_cast<int>(keep_rows.size());
      keep_rows.push_back(r);
    }
  for (int p = 0; p < m_; ++p) {
    const int j = head_[p];
    if (is_logical(j) && drop[j - n_]) continue;
    keep_pos.push_back(p);
  }

  const int m_new = m_ - count;
  Eigen::MatrixXd shrunk(m_new, m_new);
  for (int a = 0; a < m_new; ++a)
    for (int b = 0; b < m_new; ++b) shrunk(a, b) = binv_(keep_pos[a], keep_rows[b]);
  binv_ = std::move(shrunk);

  auto remap_var = [&](int j) { return is_logical(j) ? n_ + new_row_index[j - n_] : j; };

  for (auto& col : cols_) {
    std::vector<std::pair<int, double>> kept;
    kept.reserve(col.size());
    for (const auto& [r, v] : col)
      if (!drop[r]) kept.emplace_back(new_row_index[r], v);
    col = std::move(kept);
  }

  std::vector<int> new_head;
  new_head.reserve(m_new);
  for (int p : keep_pos) new_head.push_back(remap_var(head_[p]));
  head_ = std::move(new_head);

  auto filter = [&](auto& vec) {
    auto out = std::vector<typename std::decay_t<decltype(vec)>::value_type>(
        vec.begin(), vec.begin() + n_);
    for (int r : keep_rows) out.push_back(vec[n_ + r]);
    vec = std::move(out);
  };
  filter(lb_);
  filter(ub_);
  filter(status_);
  filter(x_);
  filter(d_);
  std::vector<double> scales;
  for (int r : keep_rows) scales.push_back(row_scale_[r]);
  row_scale_ = std::move(scales);

  m_ = m_new;
  basis_pos_.assign(n_ + m_, -1);
  for (int p = 0; p < m_; ++p) basis_pos_[head_[p]] = p;
  return count;
}

void DualSimplex::set_bounds(int col, double lower, double upper) {
  if (col < 0 || col >= n_) throw std::out_of_range("DualSimplex::set_bounds");
  if (!std::isfinite(lower) || !std::isfinite(upper) || lower > upper)
    throw std::invalid_argument("DualSimplex::set_bounds: invalid box");
  if (lb_[col] == lower && ub_[col] == upper) return;
  lb_[col] = lower;
  ub_[col] = upper;
  if (status_[col] != VarStatus::Basic) {
    place_nonbasic(col);
    primal_stale_ = true;
  }
}

void DualSimplex::place_nonbasic(int j) {
  VarStatus s = status_[j] == VarStatus::Basic ? VarStatus::AtLower : status_[j];
  if (lb_[j] == ub_[j]) {
    s = VarStatus::AtLower;
  } else if (d_[j] > kDualTol) {
    s = VarStatus::AtLower;
  } else if (d_[j] < -kDualTol) {
    s = VarStatus::AtUpper;
  }
  if (s == VarStatus::AtLower && !std::isfinite(lb_[j])) s = VarStatus::AtUpper;
  if (s == VarStatus::AtUpper && !std::isfinite(ub_[j])) s = VarStatus::AtLower;
  status_[j] = s;
  x_[j] = s == VarStatus::AtLower ? lb_[j] : ub_[j];
}

double DualSimplex::alpha_for(int j, const Eigen::VectorXd& rho) const {
  if (is_logical(j)) return -rho[j - n_];
  double s = 0.0;
  for (const auto& [r, v] : cols_[j]) s += rho[r] * v;
  return s;
}

void DualSimplex::column_times_binv(int j, Eigen::VectorXd& out) const {
  if (is_logical(j)) {
    out = -binv_.col(j - n_);
    return;
  }
  out.setZero(m_);
  for (const auto& [r, v] : cols_[j]) out.noalias() += v * binv_.col(r);
}

void DualSimplex::refactor() {
  pivots_since_refactor_ = 0;
  if (m_ == 0) return;
  // With rows ordered as (R, L), where the logicals of L are basic, and basic
  // structurals S:
  //   B = [A_RS 0; A_LS -I],  B^-1 = [K^-1 0; A_LS K^-1 -I],  K = A_RS.
  // Only the structural kernel K needs a dense factorization.
  std::vector<int> kernel_row(m_, -1), rows_r, struct_pos;
  for (int r = 0; r < m_; ++r) {
    if (status_[n_ + r] != VarStatus::Basic) {
      kernel_row[r] = static_cast<int>(rows_r.size());
      rows_r.push_back(r);
    }
  }
  for (int p = 0; p < m_; ++p)
    if (!is_logical(head_[p])) struct_pos.push_back(p);
  const int s = static_cast<int>(struct_pos.size());
  if (s != static_cast<int>(rows_r.size())) throw NumericalError("DualSimplex: singular basis");

  Eigen::MatrixXd kinv;
  if (s > 0) {
    Eigen::MatrixXd kernel = Eigen::MatrixXd::Zero(s, s);
    for (int b = 0; b < s; ++b) {
      for (const auto& [r, v] : cols_[head_[struct_pos[b]]])
        if (kernel_row[r] >= 0) kernel(kernel_row[r], b) = v;
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(kernel);
    kinv = lu.inverse();
    if (!kinv.allFinite()) throw NumericalError("DualSimplex: singular basis");
  }

  binv_.setZero(m_, m_);
  for (int b = 0; b < s; ++b) {
    const int p = struct_pos[b];
    for (int a = 0; a < s; ++a) binv_(p, rows_r[a]) = kinv(b, a);
  }
  for (int p = 0; p < m_; ++p) {
    const int j = head_[p];
    if (is_logical(j)) binv_(p, j - n_) = -1.0;
  }
  for (int b = 0; b < s; ++b) {
    for (const auto& [l, v] : cols_[head_[struct_pos[b]]]) {
      if (kernel_row[l] >= 0) continue;
      const int p = basis_pos_[n_ + l];
      for (int a = 0; a < s; ++a) binv_(p, rows_r[a]) += v * kinv(b, a);
    }
  }
}

void DualSimplex::compute_primal() {
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m_);
  for (int j = 0; j < n_; ++j) {
    if (status_[j] == VarStatus::Basic || x_[j] == 0.0) continue;
    for (const auto& [r, v] : cols_[j]) rhs[r] -= v * x_[j];
  }
  for (int r = 0; r < m_; ++r) {
    const int j = n_ + r;
    if (status_[j] != VarStatus::Basic) rhs[r] += x_[j];
  }
  const Eigen::VectorXd xb = binv_ * rhs;
  for (int p = 0; p < m_; ++p) x_[head_[p]] = xb[p];
  primal_stale_ = false;
}

void DualSimplex::compute_duals() {
  Eigen::VectorXd cb(m_);
  for (int p = 0; p < m_; ++p) {
    const int j = head_[p];
    cb[p] = is_logical(j) ? 0.0 : cost_[j];
  }
  const Eigen::VectorXd y = binv_.transpose() * cb;
  for (int j = 0; j < n_; ++j) {
    if (status_[j] == VarStatus::Basic) {
      d_[j] = 0.0;
      continue;
    }
    double s = cost_[j];
    for (const auto& [r, v] : cols_[j]) s -= y[r] * v;
    d_[j] = s;
  }
  for (int r = 0; r < m_; ++r) {
    const int j = n_ + r;
    d_[j] = status_[j] == VarStatus::Basic ? 0.0 : y[r];
  }
}

double DualSimplex::basis_residual() const {
  double worst = 0.0;
  std::vector<double> activity(m_, 0.0);
  for (int j = 0; j < n_; ++j)
    for (const auto& [r, v] : cols_[j]) activity[r] += v * x_[j];
  for (int r = 0; r < m_; ++r) {
    const double logical = x_[n_ + r];
    worst = std::max(worst, std::abs(activity[r] - logical) / (1.0 + std::abs(logical)));
  }

  Eigen::VectorXd cb(m_);
  for (int p = 0; p < m_; ++p) cb[p] = is_logical(head_[p]) ? 0.0 : cost_[head_[p]];
  const Eigen::VectorXd y = binv_.transpose() * cb;
  for (int p = 0; p < m_; ++p) {
    const int j = head_[p];
    double d = 0.0;
    if (is_logical(j)) {
      d = y[j - n_];
    } else {
      d = cost_[j];
      for (const auto& [r, v] : cols_[j]) d -= y[r] * v;
    }
    worst = std::max(worst, std::abs(d) / (1.0 + std::abs(is_logical(j) ? 0.0 : cost_[j])));
  }
  return worst;
}

void DualSimplex::fix_dual_infeasibilities() {
  for (int j = 0; j < num_vars(); ++j) {
    if (status_[j] == VarStatus::Basic || lb_[j] == ub_[j]) continue;
    const bool wrong = (status_[j] == VarStatus::AtLower && d_[j] < -kDualTol) ||
                       (status_[j] == VarStatus::AtUpper && d_[j] > kDualTol);
    if (!wrong) continue;
    if (std::isfinite(lb_[j]) && std::isfinite(ub_[j])) {
      place_nonbasic(j);
      primal_stale_ = true;
    } else {
      // A one-sided logical; drifted reduced costs are clipped to zero.
      d_[j] = 0.0;
    }
  }
}

bool DualSimplex::dual_feasible() const {
  for (int j = 0; j < num_vars(); ++j) {
    if (status_[j] == VarStatus::Basic || lb_[j] == ub_[j]) continue;
    if (std::isfinite(lb_[j]) && std::isfinite(ub_[j])) continue;  // repaired by a flip
    const double tol = 1e-7;
    if ((status_[j] == VarStatus::AtLower && d_[j] < -tol) ||
        (status_[j] == VarStatus::AtUpper && d_[j] > tol))
      return false;
  }
  return true;
}

void DualSimplex::pivot(int r, int q, const Eigen::VectorXd& alpha_q, double step) {
  const int leaving = head_[r];
  for (int p = 0; p < m_; ++p) x_[head_[p]] -= alpha_q[p] * step;
  x_[q] += step;

  const double piv = alpha_q[r];
  Eigen::VectorXd v = alpha_q;
  v[r] = piv - 1.0;
  v /= piv;
  // Rank-one update restricted to the columns where row r is nonzero; most
  // columns belong to basic logicals and are unit vectors.
  for (int c = 0; c < m_; ++c) {
    const double w = binv_(r, c);
    if (w != 0.0) binv_.col(c).noalias() -= w * v;
  }

  head_[r] = q;
  basis_pos_[q] = r;
  basis_pos_[leaving] = -1;
  status_[q] = VarStatus::Basic;
  ++pivots_since_refactor_;
}

LpSolution DualSimplex::solve() {
  long iterations = 0;
  const long limit = 200L * (n_ + m_) + 1000;
  bool verified = false;

  if (pivots_since_refactor_ >= kRefactorInterval) {
    refactor();
    compute_duals();
    fix_dual_infeasibilities();
    primal_stale_ = true;
  }
  if (primal_stale_) compute_primal();

  Eigen::VectorXd rho(m_), alpha_q(m_);
  std::vector<double> alpha(num_vars(), 0.0);
  // Rows with large coefficients get a tighter scaled tolerance so the
  // violation stays small in original units. A row that only breaks the
  // tighter tolerance and has no entering column is tolerated.
  std::vector<double> tol(num_vars(), kPrimalTol);
  for (int i = 0; i < m_; ++i) tol[n_ + i] = std::min(kPrimalTol, kRawPrimalTol * row_scale_[i]);
  std::vector<char> tolerated(m_, 0);

  while (true) {
    if (pivots_since_refactor_ >= kRefactorInterval) {
      refactor();
      compute_duals();
      fix_dual_infeasibilities();
      compute_primal();
    }

    // Leaving row: largest bound violation among basic variables.
    int r = -1;
    double worst = 0.0;
    for (int p = 0; p < m_; ++p) {
      const int j = head_[p];
      const double viol = std::max(lb_[j] - x_[j], x_[j] - ub_[j]);
      if (viol > tol[j] && !tolerated[p] && viol > worst) {
        worst = viol;
        r = p;
      }
    }
    if (r < 0) {
      if (!verified) {
        // Recompute both sides from the basis; a boxed column whose fresh
        // reduced cost has the wrong sign is flipped and the loop resumes.
        compute_duals();
        compute_primal();
        if (pivots_since_refactor_ > 0 && basis_residual() > kResidualTol) {
          refactor();
          compute_duals();
          compute_primal();
        }
        if (!dual_feasible()) throw NumericalError("DualSimplex: lost dual feasibility");
        fix_dual_infeasibilities();
        compute_primal();
        verified = true;
        continue;
      }
      total_iterations_ += iterations;
      return make_solution(LpStatus::Optimal, iterations);
    }
    verified = false;
    if (++iterations > limit) throw NumericalError("DualSimplex: iteration limit reached");

    const int leaving = head_[r];
    const bool below = x_[leaving] < lb_[leaving];
    const double s = below ? 1.0 : -1.0;
    const double target = below ? lb_[leaving] : ub_[leaving];

    rho = binv_.row(r).transpose();

    // Harris two-pass ratio test.
    // Fixed columns never enter, but their reduced costs are kept current so
    // that a later bound release places them on the correct side.
    double t_max = kInf;
    for (int j = 0; j < num_vars(); ++j) {
      alpha[j] = 0.0;
      if (status_[j] == VarStatus::Basic) continue;
      const double a = alpha_for(j, rho);
      alpha[j] = a;
      if (lb_[j] == ub_[j]) continue;
      const bool candidate = (status_[j] == VarStatus::AtLower && s * a < -kPivotTol) ||
                             (status_[j] == VarStatus::AtUpper && s * a > kPivotTol);
      if (!candidate) continue;
      t_max = std::min(t_max, (std::abs(d_[j]) + kDualTol) / std::abs(a));
    }
    if (t_max == kInf) {
      if (worst <= kPrimalTol) {
        tolerated[r] = 1;
        --iterations;
        continue;
      }
      total_iterations_ += iterations;
      return make_solution(LpStatus::Infeasible, iterations);
    }
    int q = -1;
    double best_abs = 0.0;
    for (int j = 0; j < num_vars(); ++j) {
      const double a = alpha[j];
      if (a == 0.0 || status_[j] == VarStatus::Basic || lb_[j] == ub_[j]) continue;
      const bool candidate = (status_[j] == VarStatus::AtLower && s * a < -kPivotTol) ||
                             (status_[j] == VarStatus::AtUpper && s * a > kPivotTol);
      if (!candidate) continue;
      if (std::abs(d_[j]) / std::abs(a) <= t_max && std::abs(a) > best_abs) {
        best_abs = std::abs(a);
        q = j;
      }
    }

    column_times_binv(q, alpha_q);
    const double piv = alpha_q[r];
    if (std::abs(piv - alpha[q]) > 1e-7 * (1.0 + std::abs(piv)) || std::abs(piv) < kPivotTol) {
      if (pivots_since_refactor_ == 0)
        throw NumericalError("DualSimplex: unstable pivot after refactorization");
      refactor();
      compute_duals();
      fix_dual_infeasibilities();
      compute_primal();
      continue;
    }

    const double t = std::max(0.0, -d_[q] / (s * alpha[q]));
    for (int j = 0; j < num_vars(); ++j) {
      if (status_[j] == VarStatus::Basic || alpha[j] == 0.0) continue;
      d_[j] += s * t * alpha[j];
    }
    d_[q] = 0.0;
    d_[leaving] = s * t;

    const double step = (x_[leaving] - target) / piv;
    pivot(r, q, alpha_q, step);
    std::fill(tolerated.begin(), tolerated.end(), 0);
    x_[leaving] = target;
    status_[leaving] = below ? VarStatus::AtLower : VarStatus::AtUpper;
  }
}

LpSolution DualSimplex::make_solution(LpStatus status, long iterations) const {
  LpSolution sol;
  sol.status = status;
  sol.iterations = iterations;
  if (status != LpStatus::Optimal) return sol;
  sol.values.assign(x_.begin(), x_.begin() + n_);
  double obj = 0.0;
  for (int j = 0; j < n_; ++j) obj += cost_[j] * x_[j];
  sol.objective = obj;
  sol.duals.resize(m_);
  for (int r = 0; r < m_; ++r) {
    const int j = n_ + r;
    const double y = status_[j] == VarStatus::Basic ? 0.0 : d_[j];
    sol.duals[r] = y * row_scale_[r];
  }
  return sol;
}

LpSolution solve_lp(const LpModel& model) {
  const std::size_t n = model.cost.size();
  if (model.col_lower.size() != n || model.col_upper.size() != n)
    throw std::invalid_argument("solve_lp: bound vectors must match the cost vector");
  std::vector<double> lo(model.col_lower), hi(model.col_upper);
  std::vector<char> artificial_lo(n, 0), artificial_hi(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(lo[j])) {
      lo[j] = -kArtificialBound;
      artificial_lo[j] = 1;
    }
    if (!std::isfinite(hi[j])) {
      hi[j] = kArtificialBound;
      artificial_hi[j] = 1;
    }
  }
  DualSimplex lp(model.cost, lo, hi);
  for (const auto& row : model.rows) lp.add_row(row);
  LpSolution sol = lp.solve();
  if (sol.status != LpStatus::Optimal) return sol;
  for (std::size_t j = 0; j < n; ++j) {
    const double v = sol.values[j];
    if ((artificial_lo[j] && v <= -kArtificialBound * (1 - 1e-9)) ||
        (artificial_hi[j] && v >= kArtificialBound * (1 - 1e-9))) {
      sol.status = LpStatus::Unbounded;
      break;
    }
  }
  return sol;
}

}  // namespace essecon
