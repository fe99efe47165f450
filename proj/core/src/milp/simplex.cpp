/*
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "simplex.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

namespace avgrid::milp::detail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kRefactorInterval = 100;
constexpr double kDegenerateStep = 1e-9;

enum class VStat : unsigned char { Basic, AtLower, AtUpper, FreeZero };

// Bounded-variable revised simplex over the equality system
//   A x + I s = b,   l <= (x, s) <= u
// with one logical (slack) column per row. Inequality senses are encoded in
// the slack bounds: <= rows get s in [0, inf), >= rows s in (-inf, 0],
// equality rows s fixed to 0. Phase 1 introduces artificial columns for rows
// whose slack cannot absorb the initial residual and minimizes their sum.
class Simplex {
 public:
  Simplex(const Model& model, const SolverOptions& opts)
      : opts_(opts),
        num_rows_(model.constraint_count()),
        num_struct_(model.variable_count()) {
    const int reserve = num_struct_ + 2 * num_rows_;
    cols_.reserve(reserve);
    lower_.reserve(reserve);
    upper_.reserve(reserve);
    cost_.reserve(reserve);

    for (const Variable& v : model.variables()) {
      cols_.push_back({});
      lower_.push_back(v.lower);
      upper_.push_back(v.upper);
      cost_.push_back(v.objective);
    }
    rhs_.resize(num_rows_);
    for (int i = 0; i < num_rows_; ++i) {
      const Constraint& c = model.constraints()[i];
      rhs_[i] = c.rhs;
      for (const auto& [var, coeff] : c.coeffs) {
        cols_[var].push_back({i, coeff});
      }
      // Slack column for row i.
      cols_.push_back({{i, 1.0}});
      switch (c.sense) {
        case Sense::LessEqual:
          lower_.push_back(0.0);
          upper_.push_back(kInf);
          break;
        case Sense::GreaterEqual:
          lower_.push_back(-kInf);
          upper_.push_back(0.0);
          break;
        case Sense::Equal:
          lower_.push_back(0.0);
          upper_.push_back(0.0);
          break;
      }
      cost_.push_back(0.0);
    }
  }

  LpResult run() {
    LpResult result;
    init_basis();

    if (num_artificials_ > 0) {
      const LpStatus phase1 = iterate(/*phase1=*/true);
      if (phase1 == LpStatus::IterationLimit) {
        result.status = phase1;
        result.iterations = iterations_;
        return result;
      }
      // Phase-1 objective is the total infeasibility.
      if (phase1_objective() > opts_.feasibility_tol) {
        result.status = LpStatus::Infeasible;
        result.iterations = iterations_;
        return result;
      }
      expel_artificials();
    }

    const LpStatus phase2 = iterate(/*phase1=*/false);
    result.status = phase2;
    result.iterations = iterations_;
    if (phase2 != LpStatus::Optimal) return result;

    result.x.assign(value_.begin(), value_.begin() + num_struct_);
    result.objective = 0.0;
    for (int j = 0; j < num_struct_; ++j) {
      result.objective += cost_[j] * value_[j];
    }
    // Row duals y' = c_B' B^{-1} and structural reduced costs c_j - y'A_j.
    Eigen::VectorXd cb(num_rows_);
    for (int r = 0; r < num_rows_; ++r) cb[r] = current_cost(basis_[r], false);
    Eigen::VectorXd y = binv_.transpose() * cb;
    result.row_duals.assign(y.data(), y.data() + num_rows_);
    result.reduced_costs.resize(num_struct_);
    for (int j = 0; j < num_struct_; ++j) {
      result.reduced_costs[j] = cost_[j] - sparse_dot(y, cols_[j]);
    }
    return result;
  }

 private:
  int num_cols() const { return static_cast<int>(cols_.size()); }

  bool is_fixed(int j) const { return lower_[j] >= upper_[j]; }

  double current_cost(int j, bool phase1) const {
    if (phase1) return j >= first_artificial_ ? 1.0 : 0.0;
    return j >= first_artificial_ ? 0.0 : cost_[j];
  }

  static double sparse_dot(const Eigen::VectorXd& dense,
                           const std::vector<std::pair<int, double>>& col) {
    double acc = 0.0;
    for (const auto& [row, coeff] : col) acc += dense[row] * coeff;
    return acc;
  }

  // Places structural columns at a finite bound (free columns at zero), then
  // makes each row's slack basic. Rows whose residual the slack bounds cannot
  // hold get an artificial column instead.
  void init_basis() {
    first_artificial_ = num_struct_ + num_rows_;
    stat_.assign(num_cols(), VStat::AtLower);
    value_.assign(num_cols(), 0.0);
    basis_.assign(num_rows_, -1);

    std::vector<double> activity(num_rows_, 0.0);
    for (int j = 0; j < num_struct_; ++j) {
      double v;
      if (std::isfinite(lower_[j])) {
        v = lower_[j];
        stat_[j] = VStat::AtLower;
      } else if (std::isfinite(upper_[j])) {
        v = upper_[j];
        stat_[j] = VStat::AtUpper;
      } else {
        v = 0.0;
        stat_[j] = VStat::FreeZero;
      }
      value_[j] = v;
      if (v != 0.0) {
        for (const auto& [row, coeff] : cols_[j]) activity[row] += coeff * v;
      }
    }

    num_artificials_ = 0;
    for (int i = 0; i < num_rows_; ++i) {
      const int slack = num_struct_ + i;
      const double resid = rhs_[i] - activity[i];
      if (resid >= lower_[slack] - opts_.feasibility_tol &&
          resid <= upper_[slack] + opts_.feasibility_tol) {
        basis_[i] = slack;
        stat_[slack] = VStat::Basic;
        value_[slack] = resid;
        continue;
      }
      // Pin the slack to the bound nearest the residual, cover the rest with
      // a nonnegative artificial.
      const double pinned = resid < lower_[slack] ? lower_[slack] : upper_[slack];
      stat_[slack] = pinned == lower_[slack] ? VStat::AtLower : VStat::AtUpper;
      value_[slack] = pinned;
      const double leftover = resid - pinned;

      cols_.push_back({{i, leftover >= 0.0 ? 1.0 : -1.0}});
      lower_.push_back(0.0);
      upper_.push_back(kInf);
      cost_.push_back(0.0);
      stat_.push_back(VStat::Basic);
      value_.push_back(std::abs(leftover));
      basis_[i] = num_cols() - 1;
      ++num_artificials_;
    }
    refactorize();
  }

  double phase1_objective() const {
    double total = 0.0;
    for (int j = first_artificial_; j < num_cols(); ++j) {
      total += value_[j];
    }
    return total;
  }

  // After phase 1, pivot zero-valued basic artificials out wherever a
  // non-artificial column has a usable pivot element in their row; rows with
  // no such column are redundant and keep the artificial pinned at zero.
  void expel_artificials() {
    for (int r = 0; r < num_rows_; ++r) {
      if (basis_[r] < first_artificial_) continue;
      Eigen::VectorXd brow = binv_.row(r);
      int entering = -1;
      for (int j = 0; j < first_artificial_; ++j) {
        if (stat_[j] == VStat::Basic || is_fixed(j)) continue;
        if (std::abs(sparse_dot(brow, cols_[j])) > 1e-7) {
          entering = j;
          break;
        }
      }
      if (entering < 0) continue;  // redundant row
      // Zero-step swap: the entering column becomes basic holding its current
      // bound value, the artificial leaves pinned at zero.
      Eigen::VectorXd w = ftran(entering);
      const int leaving = basis_[r];
      stat_[entering] = VStat::Basic;
      stat_[leaving] = VStat::AtLower;
      value_[leaving] = 0.0;
      basis_[r] = entering;
      update_binv(w, r);
    }
    // Artificials may never re-enter.
    for (int j = first_artificial_; j < num_cols(); ++j) {
      upper_[j] = 0.0;
    }
    refactorize();
  }

  Eigen::VectorXd ftran(int j) const {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(num_rows_);
    for (const auto& [row, coeff] : cols_[j]) {
      w += coeff * binv_.col(row);
    }
    return w;
  }

  void refactorize() {
    Eigen::MatrixXd basis_matrix = Eigen::MatrixXd::Zero(num_rows_, num_rows_);
    for (int r = 0; r < num_rows_; ++r) {
      for (const auto& [row, coeff] : cols_[basis_[r]]) {
        basis_matrix(row, r) = coeff;
      }
    }
    binv_ = basis_matrix.partialPivLu().inverse();
    recompute_basic_values();
  }

  void recompute_basic_values() {
    Eigen::VectorXd act = Eigen::VectorXd::Zero(num_rows_);
    for (int j = 0; j < num_cols(); ++j) {
      if (stat_[j] == VStat::Basic || value_[j] == 0.0) continue;
      for (const auto& [row, coeff] : cols_[j]) act[row] += coeff * value_[j];
    }
    Eigen::VectorXd rhs(num_rows_);
    for (int i = 0; i < num_rows_; ++i) rhs[i] = rhs_[i] - act[i];
    Eigen::VectorXd xb = binv_ * rhs;
    for (int r = 0; r < num_rows_; ++r) value_[basis_[r]] = xb[r];
  }

  void update_binv(const Eigen::VectorXd& w, int pivot_row) {
    const double pivot = w[pivot_row];
    binv_.row(pivot_row) /= pivot;
    for (int r = 0; r < num_rows_; ++r) {
      if (r == pivot_row) continue;
      const double factor = w[r];
      if (factor != 0.0) binv_.row(r) -= factor * binv_.row(pivot_row);
    }
  }

  LpStatus iterate(bool phase1) {
    int stall = 0;
    bool bland = false;
    int pivots_since_refactor = 0;

    while (true) {
      if (iterations_ >= opts_.max_lp_iterations) {
        return LpStatus::IterationLimit;
      }

      Eigen::VectorXd cb(num_rows_);
      for (int r = 0; r < num_rows_; ++r) {
        cb[r] = current_cost(basis_[r], phase1);
      }
      Eigen::VectorXd y = binv_.transpose() * cb;

      // Pricing: choose the entering column. Dantzig rule by default, Bland's
      // lowest-index rule while a degeneracy stall is active.
      int entering = -1;
      int direction = 0;
      double best_score = -opts_.dual_tol;
      for (int j = 0; j < num_cols(); ++j) {
        if (stat_[j] == VStat::Basic || is_fixed(j)) continue;
        if (phase1 == false && j >= first_artificial_) continue;
        const double d = current_cost(j, phase1) - sparse_dot(y, cols_[j]);
        double score = 0.0;
        int dir = 0;
        switch (stat_[j]) {
          case VStat::AtLower:
            if (d < -opts_.dual_tol) {
              score = d;
              dir = +1;
            }
            break;
          case VStat::AtUpper:
            if (d > opts_.dual_tol) {
              score = -d;
              dir = -1;
            }
            break;
          case VStat::FreeZero:
            if (std::abs(d) > opts_.dual_tol) {
              score = -std::abs(d);
              dir = d > 0.0 ? -1 : +1;
            }
            break;
          case VStat::Basic:
            break;
        }
        if (dir == 0) continue;
        if (bland) {
          entering = j;
          direction = dir;
          break;
        }
        if (score < best_score) {
          best_score = score;
          entering = j;
          direction = dir;
        }
      }
      if (entering < 0) return LpStatus::Optimal;

      Eigen::VectorXd w = ftran(entering);

      // Ratio test: largest step t >= 0 before a basic column or the entering
      // column's opposite bound blocks. Ties go to the lowest column index.
      double best_t = kInf;
      int leave_row = -1;
      bool leave_at_upper = false;
      for (int r = 0; r < num_rows_; ++r) {
        const double wr = w[r];
        if (std::abs(wr) <= opts_.pivot_tol) continue;
        const int bj = basis_[r];
        const double rate = -direction * wr;  // d value_[bj] / dt
        double t;
        bool to_upper;
        if (rate > 0.0) {
          if (!std::isfinite(upper_[bj])) continue;
          t = (upper_[bj] - value_[bj]) / rate;
          to_upper = true;
        } else {
          if (!std::isfinite(lower_[bj])) continue;
          t = (lower_[bj] - value_[bj]) / rate;
          to_upper = false;
        }
        if (t < 0.0) t = 0.0;
        if (t < best_t || (t == best_t && leave_row >= 0 && bj < basis_[leave_row])) {
          best_t = t;
          leave_row = r;
          leave_at_upper = to_upper;
        }
      }

      const double span = upper_[entering] - lower_[entering];
      if (std::isfinite(span) && span <= best_t) {
        // Bound flip: the entering column swaps bounds, basis unchanged.
        for (int r = 0; r < num_rows_; ++r) {
          value_[basis_[r]] -= direction * span * w[r];
        }
        if (stat_[entering] == VStat::AtLower) {
          stat_[entering] = VStat::AtUpper;
          value_[entering] = upper_[entering];
        } else {
          stat_[entering] = VStat::AtLower;
          value_[entering] = lower_[entering];
        }
        ++iterations_;
        stall = 0;
        bland = false;
        continue;
      }

      if (leave_row < 0) {
        // No blocking bound anywhere: a feasible improving ray.
        return phase1 ? LpStatus::Infeasible : LpStatus::Unbounded;
      }

      // Pivot: entering replaces basis_[leave_row].
      const int leaving = basis_[leave_row];
      for (int r = 0; r < num_rows_; ++r) {
        value_[basis_[r]] -= direction * best_t * w[r];
      }
      value_[entering] = value_[entering] + direction * best_t;
      value_[leaving] = leave_at_upper ? upper_[leaving] : lower_[leaving];
      stat_[leaving] = leave_at_upper ? VStat::AtUpper : VStat::AtLower;
      stat_[entering] = VStat::Basic;
      basis_[leave_row] = entering;
      // A departed artificial may never re-enter.
      if (leaving >= first_artificial_) upper_[leaving] = 0.0;
      update_binv(w, leave_row);
      ++iterations_;

      if (best_t <= kDegenerateStep) {
        if (++stall >= opts_.degenerate_stall_limit) bland = true;
      } else {
        stall = 0;
        bland = false;
      }

      if (++pivots_since_refactor >= kRefactorInterval) {
        refactorize();
        pivots_since_refactor = 0;
      }
    }
  }

  const SolverOptions opts_;
  const int num_rows_;
  const int num_struct_;
  int first_artificial_ = 0;
  int num_artificials_ = 0;

  std::vector<std::vector<std::pair<int, double>>> cols_;
  std::vector<double> lower_, upper_, cost_, rhs_, value_;
  std::vector<VStat> stat_;
  std::vector<int> basis_;
  Eigen::MatrixXd binv_;
  std::int64_t iterations_ = 0;
};

}  // namespace

LpResult solve_relaxation(const Model& model, const SolverOptions& options) {
  if (model.constraint_count() == 0) {
    // Degenerate but legal: optimum sits at the cheapest bound of every
    // variable independently.
    LpResult result;
    result.x.resize(model.variable_count());
    result.reduced_costs.resize(model.variable_count());
    for (int j = 0; j < model.variable_count(); ++j) {
      const Variable& v = model.variables()[j];
      double x;
      if (v.objective > 0.0) {
        x = v.lower;
      } else if (v.objective < 0.0) {
        x = v.upper;
      } else {
        x = std::isfinite(v.lower) ? v.lower
                                   : (std::isfinite(v.upper) ? v.upper : 0.0);
      }
      if (!std::isfinite(x)) {
        result.status = LpStatus::Unbounded;
        return result;
      }
      result.x[j] = x;
      result.objective += v.objective * x;
      result.reduced_costs[j] = v.objective;
    }
    result.status = LpStatus::Optimal;
    return result;
  }
  Simplex simplex(model, options);
  return simplex.run();
}

}  // namespace avgrid::milp::detail
