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

// Exact dynamic programming on Markov games: policy evaluation, expected
// advantages, discounted occupancy measures and the simulation identity that
// relates values under two models.

#ifndef MAIRL_DYNAMICS_H_
#define MAIRL_DYNAMICS_H_

#include <span>
#include <vector>

#include "mairl/markov_game.h"

namespace mairl {

// Dense factorization is used while S * J stays at or below this many entries;
// larger games fall back to value iteration.
inline constexpr long kDirectSolveLimit = 100000;
inline constexpr double kIterativeTol = 1e-10;

struct ValueBundle {
  std::vector<Table> v;  // V^i[s]
  std::vector<Table> q;  // Q^i[s * J + a]
  double residual = 0.0;
};

// Unnormalized discounted visitation; sums to 1 / (1 - gamma).
struct Occupancy {
  Table w;  // [s * J + a]
  Table state;  // marginal over states
};

// Solves (I - gamma P_pi) V^i = R^i_pi for every agent and backs up Q.
// `tol` bounds the residual of the iterative path and is recorded.
ValueBundle PolicyEvaluation(const MarkovGame& game, const JointReward& reward,
                             const JointPolicy& policy, double tol = 1e-10);

// Value of one reward table under a joint action distribution [s * J + a].
Table EvaluateTable(const MarkovGame& game, std::span<const double> joint_pi,
                    std::span<const double> reward, double tol = kIterativeTol);

// sum_{a^-i} pi^-i(a^-i|s) Q^i(s, a^i a^-i) - V^i(s). Throws
// StaleValuesError when the bundle's residual is above `tol`.
double ExpectedAdvantage(const MarkovGame& game, const JointPolicy& policy,
                         const ValueBundle& values, int agent, int s, int a_i,
                         double tol = 1e-8);

// Occupancy started from a distribution over states.
Occupancy OccupancyMeasure(const MarkovGame& game, const JointPolicy& policy,
                           std::span<const double> start);
// Occupancy started deterministically in `start_state`.
Occupancy OccupancyMeasure(const MarkovGame& game, const JointPolicy& policy,
                           int start_state);
// Occupancy for a precomputed joint action distribution.
Occupancy OccupancyMeasureTable(const MarkovGame& game,
                                std::span<const double> joint_pi,
                                std::span<const double> start);

struct SimulationSides {
  Table lhs;  // Vhat(s) - V(s)
  Table rhs;  // occupancy-weighted one-step model differences
};

// Both sides of the simulation identity for `agent`:
//   Vhat(s) - V(s) = sum_{s,a} what_s(s,a) (Rhat - R + gamma (Phat - P) V)(s,a)
// where `what_s` is the occupancy under the estimated model started at s and V
// is the value under the reference model. The two sides are computed by
// independent linear solves.
SimulationSides SimulationDecomposition(const MarkovGame& game,
                                        const MarkovGame& game_hat,
                                        const JointReward& reward,
                                        const JointReward& reward_hat,
                                        const JointPolicy& policy, int agent);

}  // namespace mairl

#endif  // MAIRL_DYNAMICS_H_
