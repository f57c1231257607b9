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

#include "mairl/reward_select.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>

#include <Eigen/Dense>

#include "mairl/errors.h"
#include "mairl/feasible.h"
#include "mairl/lp.h"
#include "mairl/rng.h"

namespace mairl {
namespace {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                             Eigen::RowMajor>;

constexpr std::uint64_t kTargetStream = 0x7461726765747321ULL;

double Dot(const double* a, const double* b, int n) {
  double acc = 0.0;
  for (int k = 0; k < n; ++k) acc += a[k] * b[k];
  return acc;
}

// Primal active-set projection of `target` onto {rows . x >= rhs (or == rhs
// where `equality`), lo <= x <= hi}. Starts from a feasible point and keeps
// every iterate feasible. Each step solves the projection restricted to the
// working set, moves toward it until a constraint blocks, and releases
// working constraints whose multipliers turn negative.
struct Projection {
  std::vector<double> x;
  long steps = 0;
  bool optimal = false;
};

Projection ActiveSetProjection(const DeviationRows& rows,
                               const std::vector<double>& rhs,
                               const std::vector<unsigned char>& equality,
                               double lo, double hi,
                               const std::vector<double>& target,
                               const std::vector<double>& start,
                               long max_steps) {
  constexpr double kDualTol = 1e-10;
  const int n = rows.num_vars;
  const int m = rows.num_rows();
  const Eigen::Map<const Matrix> a(rows.coeffs.data(), m, n);
  const Eigen::Map<const Eigen::VectorXd> t(target.data(), n);
  const double step_tol = 1e-11 * std::max(1.0, hi);

  Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(start.data(), n);
  // The working set starts with the equality rows only. Constraints join
  // when they block a step, which keeps the inequality part linearly
  // independent even at degenerate starting points.
  std::vector<unsigned char> in_rows(equality), at_lo(n, 0), at_hi(n, 0);

  Projection out;
  for (long step = 1; step <= max_steps; ++step) {
    out.steps = step;
    std::vector<int> work, free;
    for (int j = 0; j < m; ++j) {
      if (in_rows[j]) work.push_back(j);
    }
    for (int k = 0; k < n; ++k) {
      if (!at_lo[k] && !at_hi[k]) free.push_back(k);
    }
    const int nw = static_cast<int>(work.size());
    const int nf = static_cast<int>(free.size());

    // Minimizer over the working set: x_F + dir_F = t_F + A_WF^T lambda with
    // A_WF dir_F = 0, where lambda is the least-squares solution of
    // A_WF^T lambda = x_F - t_F.
    Matrix a_wf_t(nf, nw);
    Eigen::VectorXd r(nf);
    for (int q = 0; q < nf; ++q) {
      for (int p = 0; p < nw; ++p) a_wf_t(q, p) = a(work[p], free[q]);
      r[q] = x[free[q]] - t[free[q]];
    }
    Eigen::VectorXd lambda = Eigen::VectorXd::Zero(nw);
    if (nw > 0 && nf > 0) {
      lambda = a_wf_t.completeOrthogonalDecomposition().solve(r);
    }
    const Eigen::VectorXd fitted = a_wf_t * lambda;
    Eigen::VectorXd dir = Eigen::VectorXd::Zero(n);
    for (int q = 0; q < nf; ++q) dir[free[q]] = fitted[q] - r[q];

    if (dir.lpNorm<Eigen::Infinity>() > step_tol) {
      // Ratio test against the constraints outside the working set.
      double alpha = 1.0;
      int block_row = -1;
      int block_var = -1;
      for (int j = 0; j < m; ++j) {
        if (in_rows[j]) continue;
        const double ad = a.row(j).dot(dir);
        if (ad >= 0.0) continue;
        const double room = std::max(0.0, a.row(j).dot(x) - rhs[j]);
        if (room / -ad < alpha) {
          alpha = room / -ad;
          block_row = j;
          block_var = -1;
        }
      }
      for (int k : free) {
        if (dir[k] < 0.0 && (x[k] - lo) / -dir[k] < alpha) {
          alpha = (x[k] - lo) / -dir[k];
          block_var = k;
          block_row = -1;
        } else if (dir[k] > 0.0 && (hi - x[k]) / dir[k] < alpha) {
          alpha = (hi - x[k]) / dir[k];
          block_var = k;
          block_row = -1;
        }
      }
      x += alpha * dir;
      for (int k : free) x[k] = std::clamp(x[k], lo, hi);
      if (block_row >= 0) {
        in_rows[block_row] = 1;
        continue;
      }
      if (block_var >= 0) {
        const bool down = dir[block_var] < 0.0;
        x[block_var] = down ? lo : hi;
        (down ? at_lo : at_hi)[block_var] = 1;
        continue;
      }
    }

    // x minimizes the distance over the working set; x - t = A_W^T lambda on
    // the free coordinates and the remainder are the bound multipliers.
    Eigen::VectorXd grad = x - t;
    for (int p = 0; p < nw; ++p) grad -= lambda[p] * a.row(work[p]).transpose();
    double most = -kDualTol;
    int release_row = -1;
    int release_var = -1;
    for (int p = 0; p < nw; ++p) {
      if (!equality[work[p]] && lambda[p] < most) {
        most = lambda[p];
        release_row = work[p];
      }
    }
    for (int k = 0; k < n; ++k) {
      const double z = at_lo[k] ? grad[k] : (at_hi[k] ? -grad[k] : 0.0);
      if (z < most) {
        most = z;
        release_var = k;
        release_row = -1;
      }
    }
    if (release_row < 0 && release_var < 0) {
      out.optimal = true;
      break;
    }
    if (release_row >= 0) in_rows[release_row] = 0;
    if (release_var >= 0) at_lo[release_var] = at_hi[release_var] = 0;
  }
  out.x.assign(x.data(), x.data() + n);
  return out;
}

struct AgentSelection {
  Table reward;
  Table target;
  double margin = 0.0;
  long lp_iterations = 0;
  long steps = 0;
  bool optimal = true;
};

AgentSelection SelectForAgent(const MarkovGame& game, const JointPolicy& policy,
                              int agent, double rmax,
                              const SelectionOptions& options) {
  const DeviationRows rows = BuildDeviationRows(game, policy, agent);
  const int n = rows.num_vars;
  const int m = rows.num_rows();
  const double cap = rmax / (1.0 - game.gamma());

  LinearProgram lp;
  for (int k = 0; k < n; ++k) lp.AddVariable(0.0, rmax);
  const int margin_var = lp.AddVariable(0.0, cap, 1.0);
  lp.maximize = true;
  for (int j = 0; j < m; ++j) {
    std::vector<double> coeffs(rows.Row(j), rows.Row(j) + n);
    coeffs.push_back(rows.off_support[j] ? -1.0 : 0.0);
    lp.AddConstraint(std::move(coeffs), Sense::kGreaterEqual, 0.0);
  }
  const LpSolution sol = SolveLinearProgram(lp);
  if (sol.status == LpStatus::kInfeasible) {
    throw InfeasibleError("no reward supports the policy for agent " +
                          std::to_string(agent));
  }
  if (sol.status != LpStatus::kOptimal) {
    throw ConvergenceError("margin LP did not reach optimality");
  }

  AgentSelection out;
  out.lp_iterations = sol.iterations;
  out.margin = sol.x[margin_var];
  Table lp_reward(sol.x.begin(), sol.x.begin() + n);
  for (double& r : lp_reward) r = std::clamp(r, 0.0, rmax);
  if (options.mode == SelectionMode::kMaxMargin) {
    out.reward = std::move(lp_reward);
    return out;
  }

  out.target.resize(n);
  for (int k = 0; k < n; ++k) {
    out.target[k] =
        rmax * CounterUniform(options.seed, kTargetStream + agent, k);
  }
  const double floor = std::max(0.0, out.margin - options.margin_slack);
  std::vector<double> rhs(m);
  std::vector<unsigned char> equality(m);
  for (int j = 0; j < m; ++j) {
    rhs[j] = rows.off_support[j] ? floor : 0.0;
    equality[j] = rows.off_support[j] ? 0 : 1;
  }
  // Entries that appear in no row only meet the box: they take the target.
  // The rest are projected jointly.
  std::vector<int> used;
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < m; ++j) {
      if (rows.Row(j)[k] != 0.0) {
        used.push_back(k);
        break;
      }
    }
  }
  const int nu = static_cast<int>(used.size());
  DeviationRows reduced;
  reduced.num_vars = nu;
  reduced.off_support = rows.off_support;
  reduced.coeffs.resize(static_cast<std::size_t>(m) * nu);
  Table reduced_target(nu), reduced_start(nu);
  for (int q = 0; q < nu; ++q) {
    for (int j = 0; j < m; ++j) {
      reduced.coeffs[static_cast<std::size_t>(j) * nu + q] = rows.Row(j)[used[q]];
    }
    reduced_target[q] = out.target[used[q]];
    reduced_start[q] = lp_reward[used[q]];
  }
  Projection reduced_proj =
      ActiveSetProjection(reduced, rhs, equality, 0.0, rmax, reduced_target,
                          reduced_start, options.max_projection_steps);
  out.steps = reduced_proj.steps;
  out.optimal = reduced_proj.optimal;
  Projection proj;
  proj.x = out.target;
  for (int q = 0; q < nu; ++q) proj.x[used[q]] = reduced_proj.x[q];

  double worst = 0.0;
  double achieved = cap;
  for (int j = 0; j < m; ++j) {
    const double r = Dot(rows.Row(j), proj.x.data(), n);
    if (rows.off_support[j]) {
      achieved = std::min(achieved, r);
      worst = std::max(worst, floor - r);
    } else {
      worst = std::max(worst, std::abs(r));
    }
  }
  if (worst > options.feasibility_tol) {
    throw ConvergenceError("projection drifted off the feasible set");
  }
  out.reward = std::move(proj.x);
  out.margin = std::max(0.0, achieved);
  return out;
}

}  // namespace

DeviationRows BuildDeviationRows(const MarkovGame& game,
                                 const JointPolicy& policy, int agent) {
  ValidatePolicy(game, policy);
  const int S = game.num_states();
  const int J = game.num_joint();
  const int na = game.actions().count(agent);
  const double gamma = game.gamma();
  const Table joint_pi = JointPolicyTable(game, policy);
  Table p_pi = kernels::PolicyTransition(game, joint_pi, Execution::kSerial);

  Matrix lhs = Matrix::Identity(S, S) - gamma * Eigen::Map<Matrix>(p_pi.data(), S, S);
  const Matrix g = lhs.partialPivLu().inverse();

  DeviationRows rows;
  rows.num_vars = S * J;
  rows.coeffs.assign(static_cast<std::size_t>(S) * na * rows.num_vars, 0.0);
  rows.off_support.resize(static_cast<std::size_t>(S) * na);

  Eigen::RowVectorXd next(S);
  for (int s = 0; s < S; ++s) {
    std::vector<double> weight(J);
    for (int c = 0; c < J; ++c) weight[c] = OthersProb(game, policy, agent, s, c);
    for (int b = 0; b < na; ++b) {
      // Distribution of the next state when agent deviates to b.
      next.setZero();
      for (int c = 0; c < J; ++c) {
        if (game.actions().ActionOf(c, agent) != b || weight[c] == 0.0) continue;
        const auto row = game.Row(s, c);
        for (int t = 0; t < S; ++t) next[t] += weight[c] * row[t];
      }
      const Eigen::RowVectorXd h = next * g;
      const int r = s * na + b;
      rows.off_support[r] = policy.per_agent[agent][s * na + b] == 0.0;
      double* out = rows.coeffs.data() + static_cast<std::size_t>(r) * rows.num_vars;
      for (int t = 0; t < S; ++t) {
        const double scale = g(s, t) - gamma * h[t];
        if (scale == 0.0) continue;
        for (int a = 0; a < J; ++a) out[t * J + a] = scale * joint_pi[t * J + a];
      }
      for (int c = 0; c < J; ++c) {
        if (game.actions().ActionOf(c, agent) == b) out[s * J + c] -= weight[c];
      }
    }
  }
  return rows;
}

SelectionResult MaxGapReward(const MarkovGame& game, const JointPolicy& policy,
                             double rmax, const SelectionOptions& options) {
  if (!(rmax > 0.0) || !std::isfinite(rmax)) {
    throw OutOfRangeError("rmax must be positive and finite");
  }
  ValidatePolicy(game, policy);
  const int n = game.num_agents();
  std::vector<AgentSelection> per_agent(n);
  std::exception_ptr failure = nullptr;

#pragma omp parallel for schedule(static) if (options.exec == Execution::kParallel)
  for (int i = 0; i < n; ++i) {
    try {
      per_agent[i] = SelectForAgent(game, policy, i, rmax, options);
    } catch (...) {
#pragma omp critical(mairl_select_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  SelectionResult out;
  out.reward.rmax.assign(n, rmax);
  out.margin = rmax / (1.0 - game.gamma());
  for (int i = 0; i < n; ++i) {
    out.reward.tables.push_back(std::move(per_agent[i].reward));
    out.margins.push_back(per_agent[i].margin);
    out.margin = std::min(out.margin, per_agent[i].margin);
    out.lp_iterations += per_agent[i].lp_iterations;
    out.projection_steps += per_agent[i].steps;
    out.projection_optimal = out.projection_optimal && per_agent[i].optimal;
    if (options.mode == SelectionMode::kDistance) {
      out.target.rmax.push_back(rmax);
      out.target.tables.push_back(std::move(per_agent[i].target));
    }
  }

  const ImplicitReport report =
      CheckImplicit(game, out.reward, policy, options.feasibility_tol);
  if (!report.feasible) {
    throw ConvergenceError("selected reward fails the implicit test");
  }
  return out;
}

JointPolicy BehaviorCloning(const JointPolicy& pi_hat) { return pi_hat; }

}  // namespace mairl
