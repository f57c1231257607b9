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

// Dense tabular kernels over (state, joint action) tables. Every kernel has a
// serial reference and an OpenMP variant that must agree bit for bit, since
// each output entry is produced by the same sequence of operations in both.

#ifndef MAIRL_KERNELS_H_
#define MAIRL_KERNELS_H_

#include <span>

#include "mairl/markov_game.h"

namespace mairl {

enum class Execution { kSerial, kParallel };

namespace kernels {

// P_pi[s * S + s'] = sum_a pi(a|s) P(s'|s,a).
Table PolicyTransition(const MarkovGame& game, std::span<const double> joint_pi,
                       Execution exec = Execution::kParallel);

// r_pi[s] = sum_a pi(a|s) R(s,a).
Table PolicyReward(const MarkovGame& game, std::span<const double> joint_pi,
                   std::span<const double> reward,
                   Execution exec = Execution::kParallel);

// Q[s * J + a] = R(s,a) + gamma * sum_s' P(s'|s,a) V(s').
Table BellmanBackup(const MarkovGame& game, std::span<const double> reward,
                    std::span<const double> v,
                    Execution exec = Execution::kParallel);

// out[s * J + a] = sum_s' P(s'|s,a) f(s').
Table ExpectNext(const MarkovGame& game, std::span<const double> f,
                 Execution exec = Execution::kParallel);

// V[s] = sum_a pi(a|s) Q(s,a).
Table PolicyAverage(const MarkovGame& game, std::span<const double> joint_pi,
                    std::span<const double> q,
                    Execution exec = Execution::kParallel);

}  // namespace kernels
}  // namespace mairl

#endif  // MAIRL_KERNELS_H_
