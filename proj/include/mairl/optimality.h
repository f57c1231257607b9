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

// Finite-family check of how well a recovered feasible set stands in for the
// true one. Both feasible sets are represented by sampled members.

#ifndef MAIRL_OPTIMALITY_H_
#define MAIRL_OPTIMALITY_H_

#include <cstdint>
#include <vector>

#include "mairl/equilibrium.h"
#include "mairl/markov_game.h"

namespace mairl {

// A game together with the joint policy its feasible set is built around.
struct FeasibleProblem {
  const MarkovGame* game;
  const JointPolicy* policy;
};

struct FamilyOptions {
  int members = 20;
  std::uint64_t seed = 0;
  // Values are drawn as rmax / (2 (1 - gamma)) + U[-w, w] with
  // w = value_spread * rmax / (1 + gamma), advantages as
  // U[0, advantage_scale * rmax].
  double value_spread = 0.5;
  double advantage_scale = 0.5;
  int max_attempts = 10000;
};

struct RewardFamilies {
  std::vector<JointReward> true_family;
  std::vector<JointReward> recovered_family;
  int rejected = 0;
};

// Member k of both families shares one random (A, V) draw; the explicit
// formula is applied in each problem under its own event mask. Draws whose
// reward leaves [0, rmax] in either problem are rejected. Throws
// ConvergenceError when max_attempts draws yield too few members.
RewardFamilies SamplePairedFamilies(const FeasibleProblem& truth,
                                    const FeasibleProblem& recovered,
                                    const std::vector<double>& rmax,
                                    const FamilyOptions& options);

struct OptimalityOptions {
  double epsilon = 0.5;
  GapMode gap_mode = GapMode::kMaxOverStates;
  int nvi_max_iters = 5000;
  double nvi_tol = 1e-10;
  // Tolerance for the membership precondition.
  double membership_tol = 1e-7;
};

struct OptimalityReport {
  // max over true R of min over recovered R' of the gap, under (P, R), of
  // the equilibrium Nash value iteration finds for R' in the recovered game.
  double supinf_true = 0.0;
  // The same with the roles of the two problems exchanged.
  double supinf_recovered = 0.0;
  bool pass = false;
  // gap_true[r][c]: true member r scored against recovered member c.
  std::vector<std::vector<double>> gap_true;
  std::vector<std::vector<double>> gap_recovered;
};

// Two-agent games only. Throws PreconditionError on an empty family or when
// a member fails the implicit feasibility test in its own problem.
OptimalityReport OptimalityCheck(const FeasibleProblem& truth,
                                 const FeasibleProblem& recovered,
                                 const std::vector<JointReward>& true_family,
                                 const std::vector<JointReward>& recovered_family,
                                 const OptimalityOptions& options);

}  // namespace mairl

#endif  // MAIRL_OPTIMALITY_H_
