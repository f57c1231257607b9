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

#include "mairl/equilibrium.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <exception>
#include <random>

#include "mairl/dynamics.h"
#include "mairl/errors.h"
#include "mairl/lp.h"

namespace mairl {
namespace {

constexpr double kTieTol = 1e-12;
constexpr double kStageTol = 1e-9;
// Largest per-episode change for a sample-based run to count as settled.
constexpr double kSampleStableTol = 1e-3;

void CheckAgent(const MarkovGame& game, int agent) {
  if (agent < 0 || agent >= game.num_agents()) {
    throw DimensionError("agent out of range");
  }
}

void CheckRewardShape(const MarkovGame& game, const JointReward& reward) {
  if (reward.num_agents() != game.num_agents()) {
    throw DimensionError("reward has the wrong number of agents");
  }
  for (const Table& t : reward.tables) {
    if (t.size() != static_cast<std::size_t>(game.NumPairs())) {
      throw DimensionError("reward table has the wrong size");
    }
  }
}

// The single-agent MDP faced by `agent` when the others follow `policy`.
struct InducedMdp {
  MarkovGame game;
  Table reward;
};

InducedMdp Induce(const MarkovGame& game, const JointReward& reward,
                  const JointPolicy& policy, int agent) {
  const int S = game.num_states();
  const int J = game.num_joint();
  const int A = game.actions().count(agent);
  Table p(static_cast<std::size_t>(S) * A * S, 0.0);
  Table r(static_cast<std::size_t>(S) * A, 0.0);
  for (int s = 0; s < S; ++s) {
    for (int a = 0; a < J; ++a) {
      const double w = OthersProb(game, policy, agent, s, a);
      if (w == 0.0) continue;
      const int b = game.actions().ActionOf(a, agent);
      r[s * A + b] += w * reward.tables[agent][s * J + a];
      auto row = game.Row(s, a);
      double* out = &p[(static_cast<std::size_t>(s) * A + b) * S];
      for (int t = 0; t < S; ++t) out[t] += w * row[t];
    }
  }
  // Renormalize away rounding so the induced game passes validation.
  for (int k = 0; k < S * A; ++k) {
    double* row = &p[static_cast<std::size_t>(k) * S];
    double total = 0.0;
    for (int t = 0; t < S; ++t) total += row[t];
    for (int t = 0; t < S; ++t) row[t] /= total;
  }
  return {MarkovGame(S, {A}, std::move(p), game.gamma(), game.mu()),
          std::move(r)};
}

Table DeterministicTable(int S, int A, const std::vector<int>& choice) {
  Table t(static_cast<std::size_t>(S) * A, 0.0);
  for (int s = 0; s < S; ++s) t[s * A + choice[s]] = 1.0;
  return t;
}

// Advances `idx` to the next k-subset of {0..n-1} in lexicographic order.
bool NextCombination(std::vector<int>& idx, int n) {
  const int k = static_cast<int>(idx.size());
  int i = k - 1;
  while (i >= 0 && idx[i] == n - k + i) --i;
  if (i < 0) return false;
  ++idx[i];
  for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  return true;
}

std::vector<int> FirstCombination(int k) {
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  return idx;
}

// Finds a distribution over `support` (columns of `payoff`, seen from the
// opponent's rows `own`) that makes every row in `own` a best reply.
// payoff(i, j) is the payoff of own row i against column j.
bool IndifferenceStrategy(int rows, int cols,
                          const std::vector<double>& payoff, bool transpose,
                          const std::vector<int>& own,
                          const std::vector<int>& support,
                          std::vector<double>& out) {
  auto at = [&](int i, int j) {
    return transpose ? payoff[j * cols + i] : payoff[i * cols + j];
  };
  const int own_count = transpose ? cols : rows;
  const int other_count = transpose ? rows : cols;
  LinearProgram lp;
  lp.maximize = false;
  for (std::size_t k = 0; k < support.size(); ++k) lp.AddVariable(0.0, 1.0);
  const int u = lp.AddVariable(-kInf, kInf);
  std::vector<bool> in_own(own_count, false);
  for (int i : own) in_own[i] = true;
  for (int i = 0; i < own_count; ++i) {
    std::vector<double> row(lp.num_vars(), 0.0);
    for (std::size_t k = 0; k < support.size(); ++k) row[k] = at(i, support[k]);
    row[u] = -1.0;
    lp.AddConstraint(std::move(row), in_own[i] ? Sense::kEqual : Sense::kLessEqual,
                     0.0);
  }
  std::vector<double> sum(lp.num_vars(), 0.0);
  for (std::size_t k = 0; k < support.size(); ++k) sum[k] = 1.0;
  lp.AddConstraint(std::move(sum), Sense::kEqual, 1.0);
  LpSolution sol = SolveLinearProgram(lp);
  if (sol.status != LpStatus::kOptimal) return false;
  out.assign(other_count, 0.0);
  double total = 0.0;
  for (std::size_t k = 0; k < support.size(); ++k) {
    out[support[k]] = std::max(0.0, sol.x[k]);
    total += out[support[k]];
  }
  if (!(total > 0.0)) return false;
  for (double& v : out) v /= total;
  return true;
}

double Payoff(int rows, int cols, const std::vector<double>& m,
              const std::vector<double>& x, const std::vector<double>& y) {
  double acc = 0.0;
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) acc += x[i] * m[i * cols + j] * y[j];
  }
  return acc;
}

// No pure deviation of either player gains more than kStageTol.
bool IsStageEquilibrium(int rows, int cols, const std::vector<double>& a,
                        const std::vector<double>& b,
                        const std::vector<double>& x,
                        const std::vector<double>& y) {
  const double va = Payoff(rows, cols, a, x, y);
  const double vb = Payoff(rows, cols, b, x, y);
  for (int i = 0; i < rows; ++i) {
    double dev = 0.0;
    for (int j = 0; j < cols; ++j) dev += a[i * cols + j] * y[j];
    if (dev > va + kStageTol) return false;
  }
  for (int j = 0; j < cols; ++j) {
    double dev = 0.0;
    for (int i = 0; i < rows; ++i) dev += x[i] * b[i * cols + j];
    if (dev > vb + kStageTol) return false;
  }
  return true;
}

JointPolicy StagePolicy(const MarkovGame& game,
                        const std::vector<BimatrixEquilibrium>& stage) {
  const int S = game.num_states();
  const int n0 = game.actions().count(0);
  const int n1 = game.actions().count(1);
  JointPolicy pi;
  pi.per_agent.assign(2, Table());
  pi.per_agent[0].resize(static_cast<std::size_t>(S) * n0);
  pi.per_agent[1].resize(static_cast<std::size_t>(S) * n1);
  for (int s = 0; s < S; ++s) {
    std::copy(stage[s].row.begin(), stage[s].row.end(),
              pi.per_agent[0].begin() + s * n0);
    std::copy(stage[s].col.begin(), stage[s].col.end(),
              pi.per_agent[1].begin() + s * n1);
  }
  return pi;
}

BimatrixEquilibrium SolveStage(const MarkovGame& game,
                               const std::vector<Table>& q, int s) {
  const int J = game.num_joint();
  std::vector<double> a(q[0].begin() + s * J, q[0].begin() + (s + 1) * J);
  std::vector<double> b(q[1].begin() + s * J, q[1].begin() + (s + 1) * J);
  return BimatrixNash(game.actions().count(0), game.actions().count(1), a, b);
}

// Solves every stage game; exceptions thrown inside the parallel loop are
// carried out of it.
std::vector<BimatrixEquilibrium> SolveAllStages(const MarkovGame& game,
                                                const std::vector<Table>& q,
                                                Execution exec) {
  const int S = game.num_states();
  std::vector<BimatrixEquilibrium> stage(S);
  if (exec == Execution::kSerial) {
    for (int s = 0; s < S; ++s) stage[s] = SolveStage(game, q, s);
    return stage;
  }
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
  for (int s = 0; s < S; ++s) {
    try {
      stage[s] = SolveStage(game, q, s);
    } catch (...) {
#pragma omp critical
      error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return stage;
}

void CheckTwoPlayer(const MarkovGame& game, const JointReward& reward) {
  if (game.num_agents() != 2) {
    throw PreconditionError("Nash Q-learning supports two agents");
  }
  CheckRewardShape(game, reward);
}

NashQResult ModelBased(const MarkovGame& game, const JointReward& reward,
                       const NashQOptions& options) {
  const int S = game.num_states();
  NashQResult out;
  out.q.assign(2, Table(game.NumPairs(), 0.0));
  for (out.iterations = 0; out.iterations < options.max_iters;) {
    std::vector<BimatrixEquilibrium> stage =
        SolveAllStages(game, out.q, options.exec);
    Table v0(S), v1(S);
    for (int s = 0; s < S; ++s) {
      v0[s] = stage[s].row_value;
      v1[s] = stage[s].col_value;
    }
    std::vector<Table> next = {
        kernels::BellmanBackup(game, reward.tables[0], v0, options.exec),
        kernels::BellmanBackup(game, reward.tables[1], v1, options.exec)};
    double diff = 0.0;
    for (int i = 0; i < 2; ++i) {
      for (int k = 0; k < game.NumPairs(); ++k) {
        diff = std::max(diff, std::abs(next[i][k] - out.q[i][k]));
      }
    }
    out.q = std::move(next);
    ++out.iterations;
    if (diff < options.tol) {
      out.converged = true;
      break;
    }
  }
  out.stage = SolveAllStages(game, out.q, options.exec);
  out.policy = StagePolicy(game, out.stage);
  return out;
}

int SampleIndex(std::span<const double> probs, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double u = unit(rng);
  double acc = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    acc += probs[k];
    if (u < acc) return static_cast<int>(k);
  }
  // Rounding left u above the total: take the last positive entry.
  for (std::size_t k = probs.size(); k-- > 0;) {
    if (probs[k] > 0.0) return static_cast<int>(k);
  }
  return 0;
}

NashQResult SampleBased(const MarkovGame& game, const JointReward& reward,
                        const NashQOptions& options) {
  const int S = game.num_states();
  const int J = game.num_joint();
  const auto& space = game.actions();
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  NashQResult out;
  out.q.assign(2, Table(game.NumPairs(), 0.0));
  std::vector<long> visits(game.NumPairs(), 0);
  std::vector<BimatrixEquilibrium> stage(S);
  std::vector<bool> dirty(S, true);
  auto stage_at = [&](int s) -> const BimatrixEquilibrium& {
    if (dirty[s]) {
      stage[s] = SolveStage(game, out.q, s);
      dirty[s] = false;
    }
    return stage[s];
  };

  double last_change = kInf;
  for (int ep = 0; ep < options.episodes; ++ep) {
    const double frac =
        options.episodes > 1 ? static_cast<double>(ep) / (options.episodes - 1) : 1.0;
    const double eps =
        options.epsilon_start + frac * (options.epsilon_end - options.epsilon_start);
    int s = SampleIndex(game.mu(), rng);
    double change = 0.0;
    for (int step = 0; step < options.max_steps; ++step) {
      int acts[2];
      for (int i = 0; i < 2; ++i) {
        if (unit(rng) < eps) {
          acts[i] = std::uniform_int_distribution<int>(0, space.count(i) - 1)(rng);
        } else {
          const BimatrixEquilibrium& eq = stage_at(s);
          acts[i] = SampleIndex(i == 0 ? eq.row : eq.col, rng);
        }
      }
      const int a = space.Flatten(acts);
      const int next = SampleIndex(game.Row(s, a), rng);
      const BimatrixEquilibrium& eq_next = stage_at(next);
      const int k = s * J + a;
      ++visits[k];
      const double alpha = 1.0 / std::pow(static_cast<double>(visits[k]),
                                           options.lr_exponent);
      const double target[2] = {
          reward.tables[0][k] + game.gamma() * eq_next.row_value,
          reward.tables[1][k] + game.gamma() * eq_next.col_value};
      for (int i = 0; i < 2; ++i) {
        const double delta = alpha * (target[i] - out.q[i][k]);
        out.q[i][k] += delta;
        change = std::max(change, std::abs(delta));
      }
      dirty[s] = true;
      s = next;
    }
    last_change = change;
    ++out.iterations;
  }
  const bool covered =
      std::all_of(visits.begin(), visits.end(), [](long c) { return c > 0; });
  out.converged = covered && last_change <= kSampleStableTol;
  out.stage = SolveAllStages(game, out.q, options.exec);
  out.policy = StagePolicy(game, out.stage);
  return out;
}

}  // namespace

BestResponseResult BestResponse(const MarkovGame& game,
                                const JointReward& reward,
                                const JointPolicy& policy, int agent,
                                double tol) {
  CheckAgent(game, agent);
  CheckRewardShape(game, reward);
  ValidatePolicy(game, policy);
  const int S = game.num_states();
  const int A = game.actions().count(agent);
  InducedMdp mdp = Induce(game, reward, policy, agent);

  std::vector<int> choice(S, 0);
  Table v;
  for (int round = 0;; ++round) {
    if (round > 10 * S * A + 100) {
      throw ConvergenceError("policy iteration did not stabilize");
    }
    v = EvaluateTable(mdp.game, DeterministicTable(S, A, choice), mdp.reward);
    Table q = kernels::BellmanBackup(mdp.game, mdp.reward, v);
    bool changed = false;
    for (int s = 0; s < S; ++s) {
      int best = choice[s];
      for (int b = 0; b < A; ++b) {
        const double cur = q[s * A + best];
        if (q[s * A + b] > cur + tol * (1.0 + std::abs(cur))) best = b;
      }
      if (best != choice[s]) {
        choice[s] = best;
        changed = true;
      }
    }
    if (changed) continue;
    // Optimal: settle ties on the lowest index.
    bool moved = false;
    for (int s = 0; s < S; ++s) {
      double top = q[s * A];
      for (int b = 1; b < A; ++b) top = std::max(top, q[s * A + b]);
      for (int b = 0; b < A; ++b) {
        if (q[s * A + b] >= top - kTieTol * (1.0 + std::abs(top))) {
          if (b != choice[s]) {
            choice[s] = b;
            moved = true;
          }
          break;
        }
      }
    }
    if (moved) {
      v = EvaluateTable(mdp.game, DeterministicTable(S, A, choice), mdp.reward);
    }
    break;
  }

  const Table own = EvaluateTable(mdp.game, policy.per_agent[agent], mdp.reward);
  BestResponseResult out;
  out.policy = choice;
  out.value = v;
  out.gap_per_state.resize(S);
  for (int s = 0; s < S; ++s) out.gap_per_state[s] = v[s] - own[s];
  return out;
}

NashGapReport NashGap(const MarkovGame& game, const JointReward& reward,
                      const JointPolicy& policy, GapMode mode) {
  NashGapReport report;
  report.mode = mode;
  const int S = game.num_states();
  for (int i = 0; i < game.num_agents(); ++i) {
    BestResponseResult br = BestResponse(game, reward, policy, i);
    double g = 0.0;
    if (mode == GapMode::kMaxOverStates) {
      for (int s = 0; s < S; ++s) g = std::max(g, br.gap_per_state[s]);
    } else {
      for (int s = 0; s < S; ++s) g += game.mu()[s] * br.gap_per_state[s];
      g = std::max(g, 0.0);
    }
    report.per_agent_gap.push_back(g);
    report.gap = std::max(report.gap, g);
  }
  return report;
}

MatrixNeResult MatrixNeCheck(const MarkovGame& game, const JointReward& reward,
                             const JointPolicy& policy, double tol) {
  CheckRewardShape(game, reward);
  ValidatePolicy(game, policy);
  const int S = game.num_states();
  const int J = game.num_joint();
  const int N = S * J;
  const auto& space = game.actions();
  // Stacked index of (s, a) is a * S + s.
  auto idx = [S](int s, int a) { return a * S + s; };

  Eigen::MatrixXd p(N, S);
  Eigen::MatrixXd pi = Eigen::MatrixXd::Zero(S, N);
  for (int s = 0; s < S; ++s) {
    for (int a = 0; a < J; ++a) {
      auto row = game.Row(s, a);
      for (int t = 0; t < S; ++t) p(idx(s, a), t) = row[t];
      pi(s, idx(s, a)) = JointProb(game, policy, s, a);
    }
  }
  Eigen::MatrixXd system = Eigen::MatrixXd::Identity(N, N) - game.gamma() * p * pi;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);

  MatrixNeResult out;
  out.worst_violation = -kInf;
  for (int i = 0; i < game.num_agents(); ++i) {
    Eigen::VectorXd r(N);
    for (int s = 0; s < S; ++s) {
      for (int a = 0; a < J; ++a) r(idx(s, a)) = reward.tables[i][s * J + a];
    }
    const Eigen::VectorXd q = lu.solve(r);
    const Eigen::VectorXd v = pi * q;
    for (int b = 0; b < space.count(i); ++b) {
      Eigen::MatrixXd dev = Eigen::MatrixXd::Zero(S, N);
      for (int s = 0; s < S; ++s) {
        for (int a = 0; a < J; ++a) {
          if (space.ActionOf(a, i) != b) continue;
          dev(s, idx(s, a)) = OthersProb(game, policy, i, s, a);
        }
      }
      const Eigen::VectorXd gain = dev * q - v;
      for (int s = 0; s < S; ++s) {
        if (gain(s) > out.worst_violation) {
          out.worst_violation = gain(s);
          out.worst_agent = i;
          out.worst_state = s;
          out.worst_action = b;
        }
      }
    }
  }
  out.is_equilibrium = out.worst_violation <= tol;
  return out;
}

BimatrixEquilibrium BimatrixNash(int rows, int cols,
                                 const std::vector<double>& payoff_row,
                                 const std::vector<double>& payoff_col) {
  if (rows <= 0 || cols <= 0 ||
      payoff_row.size() != static_cast<std::size_t>(rows) * cols ||
      payoff_col.size() != static_cast<std::size_t>(rows) * cols) {
    throw DimensionError("bimatrix payoffs do not match the shape");
  }
  for (std::size_t k = 0; k < payoff_row.size(); ++k) {
    if (!std::isfinite(payoff_row[k]) || !std::isfinite(payoff_col[k])) {
      throw OutOfRangeError("non-finite payoff");
    }
  }
  auto finish = [&](std::vector<double> x, std::vector<double> y) {
    BimatrixEquilibrium eq;
    eq.row_value = Payoff(rows, cols, payoff_row, x, y);
    eq.col_value = Payoff(rows, cols, payoff_col, x, y);
    eq.row = std::move(x);
    eq.col = std::move(y);
    return eq;
  };

  for (int total = 2; total <= rows + cols; ++total) {
    for (int kr = std::max(1, total - cols); kr <= std::min(rows, total - 1);
         ++kr) {
      const int kc = total - kr;
      std::vector<int> sr = FirstCombination(kr);
      do {
        std::vector<int> sc = FirstCombination(kc);
        do {
          std::vector<double> x, y;
          if (kr == 1 && kc == 1) {
            x.assign(rows, 0.0);
            y.assign(cols, 0.0);
            x[sr[0]] = 1.0;
            y[sc[0]] = 1.0;
          } else if (!IndifferenceStrategy(rows, cols, payoff_row, false, sr,
                                           sc, y) ||
                     !IndifferenceStrategy(rows, cols, payoff_col, true, sc, sr,
                                           x)) {
            continue;
          }
          if (IsStageEquilibrium(rows, cols, payoff_row, payoff_col, x, y)) {
            return finish(std::move(x), std::move(y));
          }
        } while (NextCombination(sc, cols));
      } while (NextCombination(sr, rows));
    }
  }
  throw ConvergenceError("support enumeration found no equilibrium");
}

NashQResult NashQLearning(const MarkovGame& game, const JointReward& reward,
                          const NashQOptions& options) {
  CheckTwoPlayer(game, reward);
  if (options.mode == NashQMode::kModelBased) {
    if (options.max_iters <= 0 || !(options.tol > 0.0)) {
      throw PreconditionError("iteration budget and tolerance must be positive");
    }
    return ModelBased(game, reward, options);
  }
  if (options.episodes <= 0 || options.max_steps <= 0) {
    throw PreconditionError("episode budget must be positive");
  }
  return SampleBased(game, reward, options);
}

NashQResult NashValueIteration(const MarkovGame& game,
                               const JointReward& reward, int max_iters,
                               double tol, Execution exec) {
  NashQOptions options;
  options.mode = NashQMode::kModelBased;
  options.max_iters = max_iters;
  options.tol = tol;
  options.exec = exec;
  return NashQLearning(game, reward, options);
}

}  // namespace mairl
