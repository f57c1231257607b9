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

// Experiment configuration files:
//
//   [experiment]
//   seeds = 0 1 2
//   epsilon = 1.0
//   delta = 0.1
//   pi_min = 1
//   k_max = 500
//   checkpoints = 1 100 500
//   variants = deterministic obstacle-one
//   output_dir = results
//   selection = distance          # or max-margin
//   margin_slack = 1e-6
//   gap = mu-weighted             # or max-over-states
//   nvi_max_iters = 5000
//   nvi_tol = 1e-8
//   stop_at_tau = false
//
//   [grid]
//   width = 3
//   height = 3
//   start0 = 0 0
//   start1 = 2 0
//   goal0 = 2 2
//   goal1 = 0 2
//   up_success_prob = 0.5
//   goal_reward = 1
//   bounce = true
//   gamma = 0.9
//   rmax = 1
//
// Every key is optional. Unknown sections or keys and malformed values throw
// ConfigError.

#ifndef MAIRL_EXPERIMENT_CONFIG_H_
#define MAIRL_EXPERIMENT_CONFIG_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mairl/equilibrium.h"
#include "mairl/grid_game.h"
#include "mairl/reward_select.h"

namespace mairl {

struct ExperimentConfig {
  std::vector<std::uint64_t> seeds = {0};
  double epsilon = 1.0;
  double delta = 0.1;
  double pi_min = 1.0;
  long k_max = 500;
  // Rounds at which recovery and transfer are evaluated; k_max is always
  // evaluated.
  std::vector<long> checkpoints;
  std::vector<GridVariant> variants = {
      GridVariant::kDeterministic, GridVariant::kStochasticUp,
      GridVariant::kObstacleBoth, GridVariant::kObstacleOne};
  std::string output_dir = "results";
  SelectionMode selection = SelectionMode::kDistance;
  double margin_slack = 1e-6;
  GapMode gap_mode = GapMode::kMuWeighted;
  int nvi_max_iters = 5000;
  double nvi_tol = 1e-8;
  // Stop sampling at the first round meeting the stopping rule.
  bool stop_at_tau = false;
  GridGameSpec grid;

  // Throws ConfigError on out-of-range values.
  void Validate() const;
  // Sorted, deduplicated checkpoints capped at k_max, with k_max appended.
  std::vector<long> EvaluationRounds() const;
};

ExperimentConfig ParseConfig(std::string_view text);
// Throws ConfigError when the file cannot be read.
ExperimentConfig LoadConfig(const std::string& path);
// Canonical text form; ParseConfig(ConfigText(c)) reproduces c.
std::string ConfigText(const ExperimentConfig& config);

std::string_view SelectionName(SelectionMode mode);
std::string_view GapModeName(GapMode mode);

}  // namespace mairl

#endif  // MAIRL_EXPERIMENT_CONFIG_H_
