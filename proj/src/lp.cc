// Copyright 2026 The MAIRL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mairl/lp.h"

#include <cmath>
#include <cstddef>
#include <utility>

#include "mairl/errors.h"

namespace mairl {

int LinearProgram::AddVariable(double lower, double upper, double cost) {
  objective.push_back(cost);
  lo.push_back(lower);
  hi.push_back(upper);
  for (Constraint& c : constraints) c.coeffs.push_back(0.0);
  return num_vars() - 1;
}

void LinearProgram::AddConstraint(std::vector<double> coeffs, Sense sense,
                                  double rhs) {
  coeffs.resize(objective.size(), 0.0);
  constraints.push_back({std::move(coeffs), sense, rhs});
}

void LinearProgram::Validate() const {
  const std::size_t n = objective.size();
  if (lo.size() != n || hi.size() != n) {
    throw DimensionError("bounds do not match the number of variables");
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(objective[j])) throw OutOfRangeError("non-finite cost");
    if (!(lo[j] <= hi[j]) || lo[j] == kInf || hi[j] == -kInf) {
      throw OutOfRangeError("variable bounds are inconsistent");
    }
  }
  for (const Constraint& c : constraints) {
    if (c.coeffs.size() != n) throw DimensionError("constraint row size");
    if (!std::isfinite(c.rhs)) throw OutOfRangeError("non-finite rhs");
    for (double a : c.coeffs) {
      if (!std::isfinite(a)) throw OutOfRangeError("non-finite coefficient");
    }
  }
}

namespace {

// Columns of the internal problem are nonnegative variables y_k <= upper_k.
// Original variable j equals offset_j + sum sign * y_k over its pieces.
struct Piece {
  int column;
  double sign;
};

class BoundedTableau {
 public:
  BoundedTableau(int rows, int cols)
      : m_(rows), n_(cols), t_(static_cast<std::size_t>(rows) * cols, 0.0),
        xb_(rows, 0.0), basis_(rows, -1), upper_(cols, kInf),
        at_upper_(cols, false), is_basic_(cols, false), d_(cols, 0.0) {}

  double& At(int i, int j) { return t_[static_cast<std::size_t>(i) * n_ + j]; }
  double At(int i, int j) const {
    return t_[static_cast<std::size_t>(i) * n_ + j];
  }

  void SetBasic(int row, int col, double value) {
    basis_[row] = col;
    is_basic_[col] = true;
    xb_[row] = value;
  }
  void SetUpper(int col, double u) { upper_[col] = u; }

  // Reduced costs for minimizing cost . y.
  void Price(const std::vector<double>& cost) {
    for (int j = 0; j < n_; ++j) d_[j] = cost[j];
    for (int i = 0; i < m_; ++i) {
      const double cb = cost[basis_[i]];
      if (cb == 0.0) continue;
      for (int j = 0; j < n_; ++j) d_[j] -= cb * At(i, j);
    }
  }

  // Runs Bland-rule iterations. Returns kOptimal, kUnbounded or
  // kIterationLimit.
  LpStatus Run(double tol, long max_iterations, long& iterations) {
    while (true) {
      if (iterations >= max_iterations) return LpStatus::kIterationLimit;
      int enter = -1;
      for (int j = 0; j < n_; ++j) {
        if (is_basic_[j]) continue;
        if (!at_upper_[j] && d_[j] < -tol && upper_[j] > 0.0) {
          enter = j;
          break;
        }
        if (at_upper_[j] && d_[j] > tol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return LpStatus::kOptimal;
      ++iterations;
      const double dir = at_upper_[enter] ? -1.0 : 1.0;

      double theta = upper_[enter];  // bound flip
      int leave_row = -1;
      bool leave_to_upper = false;
      for (int i = 0; i < m_; ++i) {
        const double alpha = dir * At(i, enter);
        double limit;
        bool to_upper;
        if (alpha > tol) {
          limit = xb_[i] / alpha;
          to_upper = false;
        } else if (alpha < -tol && upper_[basis_[i]] < kInf) {
          limit = (upper_[basis_[i]] - xb_[i]) / -alpha;
          to_upper = true;
        } else {
          continue;
        }
        if (limit < 0.0) limit = 0.0;
        if (leave_row < 0 ? limit < theta
                          : (limit < theta - tol ||
                             (limit <= theta + tol &&
                              basis_[i] < basis_[leave_row]))) {
          theta = limit;
          leave_row = i;
          leave_to_upper = to_upper;
        }
      }
      if (leave_row < 0 && theta == kInf) return LpStatus::kUnbounded;
      if (leave_row >= 0 && upper_[enter] <= theta) leave_row = -1;

      for (int i = 0; i < m_; ++i) xb_[i] -= dir * theta * At(i, enter);
      if (leave_row < 0) {
        theta = upper_[enter];
        at_upper_[enter] = !at_upper_[enter];
        continue;
      }
      const double enter_value = at_upper_[enter] ? upper_[enter] - theta : theta;
      const int leaving = basis_[leave_row];
      Pivot(leave_row, enter);
      is_basic_[leaving] = false;
      at_upper_[leaving] = leave_to_upper;
      at_upper_[enter] = false;
      is_basic_[enter] = true;
      basis_[leave_row] = enter;
      xb_[leave_row] = enter_value;
    }
  }

  // Value of column j in the current basic solution.
  double Value(int j) const {
    if (is_basic_[j]) {
      for (int i = 0; i < m_; ++i) {
        if (basis_[i] == j) return xb_[i];
      }
    }
    return at_upper_[j] ? upper_[j] : 0.0;
  }

 private:
  void Pivot(int r, int c) {
    const double inv = 1.0 / At(r, c);
    double* row_r = &t_[static_cast<std::size_t>(r) * n_];
    for (int j = 0; j < n_; ++j) row_r[j] *= inv;
    row_r[c] = 1.0;
    for (int i = 0; i < m_; ++i) {
      if (i == r) continue;
      double* row_i = &t_[static_cast<std::size_t>(i) * n_];
      const double f = row_i[c];
      if (f == 0.0) continue;
      for (int j = 0; j < n_; ++j) row_i[j] -= f * row_r[j];
      row_i[c] = 0.0;
    }
    const double f = d_[c];
    if (f != 0.0) {
      for (int j = 0; j < n_; ++j) d_[j] -= f * row_r[j];
      d_[c] = 0.0;
    }
  }

  int m_, n_;
  std::vector<double> t_;
  std::vector<double> xb_;
  std::vector<int> basis_;
  std::vector<double> upper_;
  std::vector<bool> at_upper_;
  std::vector<bool> is_basic_;
  std::vector<double> d_;
};

}  // namespace

LpSolution SolveLinearProgram(const LinearProgram& lp,
                              const SimplexOptions& options) {
  lp.Validate();
  const int n = lp.num_vars();
  const int m = static_cast<int>(lp.constraints.size());

  // Map original variables to nonnegative internal columns.
  std::vector<std::vector<Piece>> pieces(n);
  std::vector<double> offset(n, 0.0);
  std::vector<double> col_upper;
  for (int j = 0; j < n; ++j) {
    if (std::isfinite(lp.lo[j])) {
      offset[j] = lp.lo[j];
      pieces[j].push_back({static_cast<int>(col_upper.size()), 1.0});
      col_upper.push_back(lp.hi[j] - lp.lo[j]);
    } else if (std::isfinite(lp.hi[j])) {
      offset[j] = lp.hi[j];
      pieces[j].push_back({static_cast<int>(col_upper.size()), -1.0});
      col_upper.push_back(kInf);
    } else {
      pieces[j].push_back({static_cast<int>(col_upper.size()), 1.0});
      col_upper.push_back(kInf);
      pieces[j].push_back({static_cast<int>(col_upper.size()), -1.0});
      col_upper.push_back(kInf);
    }
  }
  const int num_struct = static_cast<int>(col_upper.size());
  int num_slack = 0;
  for (const Constraint& c : lp.constraints) {
    if (c.sense != Sense::kEqual) ++num_slack;
  }

  // Row data before artificials: coefficients, slack column and sign.
  std::vector<std::vector<double>> rows(m, std::vector<double>(num_struct, 0.0));
  std::vector<double> rhs(m);
  std::vector<int> slack_col(m, -1);
  std::vector<double> slack_sign(m, 0.0);
  int next_slack = num_struct;
  for (int r = 0; r < m; ++r) {
    const Constraint& c = lp.constraints[r];
    double b = c.rhs;
    for (int j = 0; j < n; ++j) {
      const double a = c.coeffs[j];
      if (a == 0.0) continue;
      b -= a * offset[j];
      for (const Piece& p : pieces[j]) rows[r][p.column] += a * p.sign;
    }
    if (c.sense != Sense::kEqual) {
      slack_col[r] = next_slack++;
      slack_sign[r] = c.sense == Sense::kLessEqual ? 1.0 : -1.0;
    }
    if (b < 0.0) {
      for (double& v : rows[r]) v = -v;
      slack_sign[r] = -slack_sign[r];
      b = -b;
    }
    rhs[r] = b;
  }
  int num_art = 0;
  for (int r = 0; r < m; ++r) {
    if (slack_col[r] < 0 || slack_sign[r] < 0.0) ++num_art;
  }
  const int cols = num_struct + num_slack + num_art;

  BoundedTableau tab(m, cols);
  for (int k = 0; k < num_struct; ++k) tab.SetUpper(k, col_upper[k]);
  std::vector<double> phase1(cols, 0.0);
  int next_art = num_struct + num_slack;
  for (int r = 0; r < m; ++r) {
    for (int k = 0; k < num_struct; ++k) tab.At(r, k) = rows[r][k];
    if (slack_col[r] >= 0) tab.At(r, slack_col[r]) = slack_sign[r];
    if (slack_col[r] >= 0 && slack_sign[r] > 0.0) {
      tab.SetBasic(r, slack_col[r], rhs[r]);
    } else {
      tab.At(r, next_art) = 1.0;
      phase1[next_art] = 1.0;
      tab.SetBasic(r, next_art, rhs[r]);
      ++next_art;
    }
  }

  LpSolution sol;
  if (num_art > 0) {
    tab.Price(phase1);
    LpStatus st = tab.Run(options.tol, options.max_iterations, sol.iterations);
    if (st == LpStatus::kIterationLimit) {
      sol.status = st;
      return sol;
    }
    double infeas = 0.0;
    for (int k = num_struct + num_slack; k < cols; ++k) infeas += tab.Value(k);
    double scale = 1.0;
    for (double b : rhs) scale = std::max(scale, std::abs(b));
    if (infeas > 1e-7 * scale) {
      sol.status = LpStatus::kInfeasible;
      return sol;
    }
    // Artificials stay in the tableau pinned at zero.
    for (int k = num_struct + num_slack; k < cols; ++k) tab.SetUpper(k, 0.0);
  }

  std::vector<double> cost(cols, 0.0);
  const double sign = lp.maximize ? -1.0 : 1.0;
  for (int j = 0; j < n; ++j) {
    for (const Piece& p : pieces[j]) cost[p.column] += sign * lp.objective[j] * p.sign;
  }
  tab.Price(cost);
  sol.status = tab.Run(options.tol, options.max_iterations, sol.iterations);
  if (sol.status != LpStatus::kOptimal) return sol;

  sol.x.assign(n, 0.0);
  for (int j = 0; j < n; ++j) {
    double v = offset[j];
    for (const Piece& p : pieces[j]) v += p.sign * tab.Value(p.column);
    sol.x[j] = v;
  }
  sol.objective = 0.0;
  for (int j = 0; j < n; ++j) sol.objective += lp.objective[j] * sol.x[j];
  return sol;
}

}  // namespace mairl
