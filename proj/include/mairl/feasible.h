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

// Rewards under which an observed joint policy is a Nash equilibrium.
//
// A reward R is feasible for a policy pi when pi is a Nash equilibrium of the
// game under R. Two descriptions are provided: an implicit test on expected
// advantages, and an explicit parameterization
//
//   R^i(s,a) = -A^i(s,a) [s,a in E^i] + V^i(s) - gamma sum_s' P(s'|s,a) V^i(s')
//
// with A^i >= 0, where E^i marks joint actions whose own part is never played
// by agent i while the others' part is.

#ifndef MAIRL_FEASIBLE_H_
#define MAIRL_FEASIBLE_H_

#include <vector>

#include "mairl/markov_game.h"

namespace mairl {

struct FeasibleParams {
  std::vector<Table> advantage;  // A^i[s * J + a] >= 0
  std::vector<Table> value;      // V^i[s]
};

struct EventMask {
  // mask[i][s * J + a] is 1 iff pi^i(a^i|s) == 0 and pi^-i(a^-i|s) > 0.
  std::vector<std::vector<unsigned char>> mask;

  bool operator()(int agent, int k) const { return mask[agent][k] != 0; }
};

// Probabilities are compared against exactly zero.
EventMask ComputeEventMask(const MarkovGame& game, const JointPolicy& policy);

struct AdvantageViolation {
  int agent;
  int state;
  int action;
  double advantage;
  bool on_support;  // pi^i(action|state) > 0
};

struct ImplicitReport {
  bool feasible = true;
  std::vector<AdvantageViolation> violations;
};

// Expected advantages must vanish on the support of pi^i and be nonpositive
// off it.
ImplicitReport CheckImplicit(const MarkovGame& game, const JointReward& reward,
                             const JointPolicy& policy, double tol);

// The explicit formula without any range or feasibility check.
std::vector<Table> ExplicitReward(const MarkovGame& game, const EventMask& mask,
                                  const FeasibleParams& params);

// Explicit formula under the policy's own event mask. Throws OutOfRangeError
// when an entry leaves [0, rmax] and NotFeasibleError if the result fails the
// implicit test.
JointReward ConstructReward(const MarkovGame& game, const JointPolicy& policy,
                            const FeasibleParams& params,
                            const std::vector<double>& rmax);

// Canonical parameters V = V^pi and A = V - Q on masked entries (0
// elsewhere). Throws NotFeasibleError when the reward fails the implicit test
// or a masked entry has Q above V by more than `tol`, in which case the reward
// has no explicit representation.
FeasibleParams DecomposeReward(const MarkovGame& game, const JointPolicy& policy,
                               const JointReward& reward, double tol = 1e-9);

// Entrywise A |1_E - 1_Ehat| + gamma sum_s' |V(s')| |P - Phat|(s'|s,a).
std::vector<Table> ErrorPropagationBound(const FeasibleParams& params,
                                         const EventMask& mask,
                                         const EventMask& mask_hat,
                                         const MarkovGame& game,
                                         const MarkovGame& game_hat);

struct NashGapBoundResult {
  Table bound;   // per start state
  Table direct;  // V(deviation) - V(policy_hat) under the true problem
  double max_bound = 0.0;
  double max_direct = 0.0;
  double estimated_gap = 0.0;  // Nash gap of policy_hat in the estimate
};

// Two occupancy-weighted model-error sums, one under policy_hat and one under
// the deviation (agent plays `deviation`, the others keep policy_hat), both
// weighted by the estimated model's occupancy and the true model's values,
// plus the Nash gap of policy_hat in the estimated problem. Throws
// PreconditionError when that gap exceeds `tol`.
NashGapBoundResult NashGapBound(const MarkovGame& game,
                                const MarkovGame& game_hat,
                                const JointReward& reward,
                                const JointReward& reward_hat,
                                const JointPolicy& policy_hat, int agent,
                                const Table& deviation, double tol = 1e-6);

}  // namespace mairl

#endif  // MAIRL_FEASIBLE_H_
