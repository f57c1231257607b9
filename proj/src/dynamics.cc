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

#include "mairl/dynamics.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "mairl/errors.h"
#include "mairl/kernels.h"

namespace mairl {
namespace {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                             Eigen::RowMajor>;

bool UseDirectSolve(const MarkovGame& game) {
  return static_cast<long>(game.NumPairs()) <= kDirectSolveLimit;
}

// (I - gamma P_pi), optionally transposed.
Matrix ResolventSystem(const MarkovGame& game, std::span<const double> joint_pi,
                       bool transpose) {
  const int S = game.num_states();
  Table p_pi = kernels::PolicyTransition(game, joint_pi);
  Matrix m = Eigen::Map<Matrix>(p_pi.data(), S, S);
  m *= -game.gamma();
  m.diagonal().array() += 1.0;
  if (transpose) m.transposeInPlace();
  return m;
}

// Value iteration on V = r_pi + gamma P_pi V.
Table IterateValue(const MarkovGame& game, std::span<const double> p_pi,
                   std::span<const double> r_pi, double tol) {
  const int S = game.num_states();
  Table v(S, 0.0), next(S);
  for (long it = 0; it < 1000000; ++it) {
    double diff = 0.0;
    for (int s = 0; s < S; ++s) {
      double acc = r_pi[s];
      for (int t = 0; t < S; ++t) acc += game.gamma() * p_pi[s * S + t] * v[t];
      next[s] = acc;
      diff = std::max(diff, std::abs(acc - v[s]));
    }
    v.swap(next);
    // Contraction: distance to the fixed point is at most diff * g / (1 - g).
    if (diff * game.gamma() <= tol * (1.0 - game.gamma())) return v;
  }
  throw ConvergenceError("value iteration did not reach the tolerance");
}

Table StartFromState(const MarkovGame& game, int s) {
  if (s < 0 || s >= game.num_states()) {
    throw DimensionError("start state out of range");
  }
  Table start(game.num_states(), 0.0);
  start[s] = 1.0;
  return start;
}

}  // namespace

Table EvaluateTable(const MarkovGame& game, std::span<const double> joint_pi,
                    std::span<const double> reward, double tol) {
  const int S = game.num_states();
  Table r_pi = kernels::PolicyReward(game, joint_pi, reward);
  if (UseDirectSolve(game)) {
    Matrix m = ResolventSystem(game, joint_pi, false);
    Eigen::VectorXd rhs = Eigen::Map<Eigen::VectorXd>(r_pi.data(), S);
    Eigen::VectorXd v = m.partialPivLu().solve(rhs);
    return Table(v.data(), v.data() + S);
  }
  Table p_pi = kernels::PolicyTransition(game, joint_pi);
  return IterateValue(game, p_pi, r_pi, std::min(tol, kIterativeTol));
}

ValueBundle PolicyEvaluation(const MarkovGame& game, const JointReward& reward,
                             const JointPolicy& policy, double tol) {
  if (!(tol > 0.0)) throw PreconditionError("tolerance must be positive");
  ValidatePolicy(game, policy);
  if (reward.num_agents() != game.num_agents()) {
    throw DimensionError("reward has the wrong number of agents");
  }
  for (const Table& t : reward.tables) {
    if (t.size() != static_cast<std::size_t>(game.NumPairs())) {
      throw DimensionError("reward table has the wrong size");
    }
  }
  const int S = game.num_states();
  const Table joint_pi = JointPolicyTable(game, policy);
  ValueBundle out;
  if (UseDirectSolve(game)) {
    Matrix m = ResolventSystem(game, joint_pi, false);
    Eigen::PartialPivLU<Matrix> lu = m.partialPivLu();
    for (const Table& r : reward.tables) {
      Table r_pi = kernels::PolicyReward(game, joint_pi, r);
      Eigen::VectorXd v =
          lu.solve(Eigen::Map<const Eigen::VectorXd>(r_pi.data(), S));
      out.v.emplace_back(v.data(), v.data() + S);
    }
  } else {
    Table p_pi = kernels::PolicyTransition(game, joint_pi);
    for (const Table& r : reward.tables) {
      Table r_pi = kernels::PolicyReward(game, joint_pi, r);
      out.v.push_back(IterateValue(game, p_pi, r_pi, tol));
    }
  }
  for (int i = 0; i < game.num_agents(); ++i) {
    out.q.push_back(kernels::BellmanBackup(game, reward.tables[i], out.v[i]));
    Table back = kernels::PolicyAverage(game, joint_pi, out.q[i]);
    for (int s = 0; s < S; ++s) {
      out.residual = std::max(out.residual, std::abs(back[s] - out.v[i][s]));
    }
  }
  return out;
}

double ExpectedAdvantage(const MarkovGame& game, const JointPolicy& policy,
                         const ValueBundle& values, int agent, int s, int a_i,
                         double tol) {
  if (agent < 0 || agent >= game.num_agents() || s < 0 ||
      s >= game.num_states() || a_i < 0 ||
      a_i >= game.actions().count(agent)) {
    throw DimensionError("agent, state or action out of range");
  }
  if (static_cast<int>(values.v.size()) != game.num_agents() ||
      values.q[agent].size() != static_cast<std::size_t>(game.NumPairs())) {
    throw DimensionError("value bundle does not match the game");
  }
  if (values.residual > tol) {
    throw StaleValuesError("value bundle residual above tolerance");
  }
  const auto& space = game.actions();
  const int J = game.num_joint();
  double acc = 0.0;
  // Walk the joint actions whose agent-th component equals a_i.
  for (int a = 0; a < J; ++a) {
    if (space.ActionOf(a, agent) != a_i) continue;
    acc += OthersProb(game, policy, agent, s, a) * values.q[agent][s * J + a];
  }
  return acc - values.v[agent][s];
}

Occupancy OccupancyMeasureTable(const MarkovGame& game,
                                std::span<const double> joint_pi,
                                std::span<const double> start) {
  const int S = game.num_states();
  const int J = game.num_joint();
  if (start.size() != static_cast<std::size_t>(S)) {
    throw DimensionError("start distribution has the wrong size");
  }
  Occupancy occ;
  if (UseDirectSolve(game)) {
    Matrix m = ResolventSystem(game, joint_pi, true);
    Eigen::VectorXd d = m.partialPivLu().solve(
        Eigen::Map<const Eigen::VectorXd>(start.data(), S));
    occ.state.assign(d.data(), d.data() + S);
  } else {
    // d = rho + gamma P_pi^T d, iterated.
    Table p_pi = kernels::PolicyTransition(game, joint_pi);
    Table d(start.begin(), start.end()), next(S);
    for (long it = 0;; ++it) {
      double diff = 0.0;
      for (int t = 0; t < S; ++t) next[t] = start[t];
      for (int s = 0; s < S; ++s) {
        for (int t = 0; t < S; ++t) next[t] += game.gamma() * p_pi[s * S + t] * d[s];
      }
      for (int t = 0; t < S; ++t) diff += std::abs(next[t] - d[t]);
      d.swap(next);
      if (diff * game.gamma() <= kIterativeTol * (1.0 - game.gamma())) break;
      if (it > 1000000) throw ConvergenceError("occupancy iteration stalled");
    }
    occ.state = d;
  }
  occ.w.assign(static_cast<std::size_t>(S) * J, 0.0);
  for (int s = 0; s < S; ++s) {
    for (int a = 0; a < J; ++a) occ.w[s * J + a] = occ.state[s] * joint_pi[s * J + a];
  }
  return occ;
}

Occupancy OccupancyMeasure(const MarkovGame& game, const JointPolicy& policy,
                           std::span<const double> start) {
  ValidatePolicy(game, policy);
  const Table joint_pi = JointPolicyTable(game, policy);
  return OccupancyMeasureTable(game, joint_pi, start);
}

Occupancy OccupancyMeasure(const MarkovGame& game, const JointPolicy& policy,
                           int start_state) {
  return OccupancyMeasure(game, policy, StartFromState(game, start_state));
}

SimulationSides SimulationDecomposition(const MarkovGame& game,
                                        const MarkovGame& game_hat,
                                        const JointReward& reward,
                                        const JointReward& reward_hat,
                                        const JointPolicy& policy, int agent) {
  if (!game.SameShape(game_hat) || game.gamma() != game_hat.gamma()) {
    throw DimensionError("models differ in shape or discount");
  }
  if (agent < 0 || agent >= game.num_agents()) {
    throw DimensionError("agent out of range");
  }
  const int S = game.num_states();
  const int J = game.num_joint();
  const Table joint_pi = JointPolicyTable(game, policy);

  ValueBundle ref = PolicyEvaluation(game, reward, policy);
  ValueBundle est = PolicyEvaluation(game_hat, reward_hat, policy);

  SimulationSides out;
  out.lhs.resize(S);
  for (int s = 0; s < S; ++s) out.lhs[s] = est.v[agent][s] - ref.v[agent][s];

  // One-step model difference per (s, a).
  const Table& v = ref.v[agent];
  const Table next_ref = kernels::ExpectNext(game, v);
  const Table next_hat = kernels::ExpectNext(game_hat, v);
  Table diff(static_cast<std::size_t>(S) * J);
  for (int k = 0; k < S * J; ++k) {
    diff[k] = reward_hat.tables[agent][k] - reward.tables[agent][k] +
              game.gamma() * (next_hat[k] - next_ref[k]);
  }
  out.rhs.resize(S);
  for (int s = 0; s < S; ++s) {
    Occupancy occ = OccupancyMeasureTable(game_hat, joint_pi, StartFromState(game, s));
    double acc = 0.0;
    for (int k = 0; k < S * J; ++k) acc += occ.w[k] * diff[k];
    out.rhs[s] = acc;
  }
  return out;
}

}  // namespace mairl
