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

// Selection of a single reward from the feasible set of an observed policy,
// and the behavior-cloning baseline.
//
// For agent i, every (state s, own action b) contributes the row
//
//   V^i(s) - sum_{a^-i} pi^-i(a^-i|s) Q^i(s, b a^-i) >= margin [pi^i(b|s) == 0]
//
// which is linear in R^i because V^i = (I - gamma P_pi)^-1 r_pi.

#ifndef MAIRL_REWARD_SELECT_H_
#define MAIRL_REWARD_SELECT_H_

#include <cstdint>
#include <vector>

#include "mairl/kernels.h"
#include "mairl/markov_game.h"

namespace mairl {

enum class SelectionMode { kMaxMargin, kDistance };

struct SelectionOptions {
  SelectionMode mode = SelectionMode::kMaxMargin;
  // Seeds the random target of the distance mode.
  std::uint64_t seed = 0;
  // The distance mode keeps margin >= best margin - margin_slack.
  double margin_slack = 1e-6;
  // Constraint violation accepted from the projection.
  double feasibility_tol = 1e-8;
  // Budget of active-set steps; the result is feasible even when it runs out.
  long max_projection_steps = 20000;
  Execution exec = Execution::kParallel;
};

struct SelectionResult {
  JointReward reward;
  std::vector<double> margins;  // per agent, as certified by the LP
  double margin = 0.0;          // min over agents
  JointReward target;           // distance mode only
  long lp_iterations = 0;
  long projection_steps = 0;
  // False when the step budget ran out before the projection was optimal.
  bool projection_optimal = true;
};

// Rows of the constraint system for one agent, over the flattened reward
// table [s * J + a]. row(s * |A^i| + b) . R^i = V^i(s) - Q^i_-i(s, b).
struct DeviationRows {
  int num_vars = 0;
  std::vector<double> coeffs;  // row-major, one row per (s, b)
  std::vector<unsigned char> off_support;  // pi^i(b|s) == 0

  const double* Row(int r) const {
    return coeffs.data() + static_cast<std::size_t>(r) * num_vars;
  }
  int num_rows() const { return static_cast<int>(off_support.size()); }
};

DeviationRows BuildDeviationRows(const MarkovGame& game,
                                 const JointPolicy& policy, int agent);

// Throws InfeasibleError when the LP has no solution and ConvergenceError
// when a solver runs out of budget or the output fails the implicit test.
SelectionResult MaxGapReward(const MarkovGame& game, const JointPolicy& policy,
                             double rmax, const SelectionOptions& options = {});

// The empirical expert policy itself.
JointPolicy BehaviorCloning(const JointPolicy& pi_hat);

}  // namespace mairl

#endif  // MAIRL_REWARD_SELECT_H_
