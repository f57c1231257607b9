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

// Nash equilibria of Markov games: best responses, the Nash imitation gap,
// the stacked-operator equilibrium test, a bimatrix stage-game solver and
// Nash Q-learning for two-player games.

#ifndef MAIRL_EQUILIBRIUM_H_
#define MAIRL_EQUILIBRIUM_H_

#include <cstdint>
#include <vector>

#include "mairl/kernels.h"
#include "mairl/markov_game.h"

namespace mairl {

struct BestResponseResult {
  std::vector<int> policy;  // one action per state
  Table value;              // V of (BR, pi^-i)
  Table gap_per_state;      // value - V of pi
};

// Exact best response of `agent` against the others' part of `policy`, found
// by policy iteration on the induced single-agent MDP. Ties go to the lowest
// action index.
BestResponseResult BestResponse(const MarkovGame& game,
                                const JointReward& reward,
                                const JointPolicy& policy, int agent,
                                double tol = 1e-12);

enum class GapMode { kMaxOverStates, kMuWeighted };

struct NashGapReport {
  std::vector<double> per_agent_gap;
  double gap = 0.0;
  GapMode mode = GapMode::kMaxOverStates;
};

NashGapReport NashGap(const MarkovGame& game, const JointReward& reward,
                      const JointPolicy& policy,
                      GapMode mode = GapMode::kMaxOverStates);

struct MatrixNeResult {
  bool is_equilibrium = false;
  double worst_violation = 0.0;
  int worst_agent = -1;
  int worst_state = -1;
  int worst_action = -1;
};

// Builds the stacked joint-policy operator (columns ordered joint action
// major, state minor), solves Q = (I - gamma P Pi)^-1 R^i on the full
// (S*J)-dimensional system, and checks every pure deviation of every agent.
MatrixNeResult MatrixNeCheck(const MarkovGame& game, const JointReward& reward,
                             const JointPolicy& policy, double tol);

// Row player strategy `row`, column player strategy `col`.
struct BimatrixEquilibrium {
  std::vector<double> row;
  std::vector<double> col;
  double row_value = 0.0;
  double col_value = 0.0;
};

// Payoffs are row-major `rows x cols`. Returns the first equilibrium in the
// support ordering (total support size, then lexicographic).
BimatrixEquilibrium BimatrixNash(int rows, int cols,
                                 const std::vector<double>& payoff_row,
                                 const std::vector<double>& payoff_col);

enum class NashQMode { kModelBased, kSampleBased };

struct NashQOptions {
  NashQMode mode = NashQMode::kModelBased;
  // Model-based backups.
  int max_iters = 5000;
  double tol = 1e-8;
  // Sample-based learning.
  int episodes = 2000;
  int max_steps = 100;
  // Learning rate 1 / visits(s, a)^lr_exponent.
  double lr_exponent = 1.0;
  double epsilon_start = 1.0;
  double epsilon_end = 0.05;
  std::uint64_t seed = 0;
  Execution exec = Execution::kParallel;
};

struct NashQResult {
  JointPolicy policy;
  std::vector<Table> q;
  int iterations = 0;
  bool converged = false;
  // Stage equilibrium chosen in each state at the end.
  std::vector<BimatrixEquilibrium> stage;
};

// Two-player Nash Q-learning. Every backup bootstraps with the value of the
// stage game (Q^1(s',.), Q^2(s',.)) solved by BimatrixNash.
NashQResult NashQLearning(const MarkovGame& game, const JointReward& reward,
                          const NashQOptions& options = {});

// Exact Nash value iteration; shorthand for NashQLearning in model mode.
NashQResult NashValueIteration(const MarkovGame& game,
                               const JointReward& reward, int max_iters = 5000,
                               double tol = 1e-8,
                               Execution exec = Execution::kParallel);

}  // namespace mairl

#endif  // MAIRL_EQUILIBRIUM_H_
