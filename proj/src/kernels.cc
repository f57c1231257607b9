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

#include "mairl/kernels.h"

namespace mairl::kernels {
namespace {

// One row of P_pi. Shared by both variants so the arithmetic is identical.
inline void PolicyTransitionRow(const MarkovGame& game,
                                std::span<const double> joint_pi, int s,
                                double* out) {
  const int S = game.num_states();
  const int J = game.num_joint();
  for (int t = 0; t < S; ++t) out[t] = 0.0;
  for (int a = 0; a < J; ++a) {
    const double w = joint_pi[s * J + a];
    if (w == 0.0) continue;
    const double* row = game.transitions().data() + game.RowOffset(s, a);
    for (int t = 0; t < S; ++t) out[t] += w * row[t];
  }
}

inline double ExpectRow(const MarkovGame& game, int s, int a,
                        std::span<const double> f) {
  const double* row = game.transitions().data() + game.RowOffset(s, a);
  double acc = 0.0;
  for (int t = 0; t < game.num_states(); ++t) acc += row[t] * f[t];
  return acc;
}

}  // namespace

Table PolicyTransition(const MarkovGame& game, std::span<const double> joint_pi,
                       Execution exec) {
  const int S = game.num_states();
  Table out(static_cast<std::size_t>(S) * S);
  if (exec == Execution::kSerial) {
    for (int s = 0; s < S; ++s) {
      PolicyTransitionRow(game, joint_pi, s, out.data() + s * S);
    }
  } else {
#pragma omp parallel for schedule(static)
    for (int s = 0; s < S; ++s) {
      PolicyTransitionRow(game, joint_pi, s, out.data() + s * S);
    }
  }
  return out;
}

Table PolicyReward(const MarkovGame& game, std::span<const double> joint_pi,
                   std::span<const double> reward, Execution exec) {
  const int S = game.num_states();
  const int J = game.num_joint();
  Table out(S, 0.0);
  auto body = [&](int s) {
    double acc = 0.0;
    for (int a = 0; a < J; ++a) acc += joint_pi[s * J + a] * reward[s * J + a];
    out[s] = acc;
  };
  if (exec == Execution::kSerial) {
    for (int s = 0; s < S; ++s) body(s);
  } else {
#pragma omp parallel for schedule(static)
    for (int s = 0; s < S; ++s) body(s);
  }
  return out;
}

Table BellmanBackup(const MarkovGame& game, std::span<const double> reward,
                    std::span<const double> v, Execution exec) {
  const int S = game.num_states();
  const int J = game.num_joint();
  const double gamma = game.gamma();
  Table q(static_cast<std::size_t>(S) * J);
  auto body = [&](int s) {
    for (int a = 0; a < J; ++a) {
      q[s * J + a] = reward[s * J + a] + gamma * ExpectRow(game, s, a, v);
    }
  };
  if (exec == Execution::kSerial) {
    for (int s = 0; s < S; ++s) body(s);
  } else {
#pragma omp parallel for schedule(static)
    for (int s = 0; s < S; ++s) body(s);
  }
  return q;
}

Table ExpectNext(const MarkovGame& game, std::span<const double> f,
                 Execution exec) {
  const int S = game.num_states();
  const int J = game.num_joint();
  Table out(static_cast<std::size_t>(S) * J);
  auto body = [&](int s) {
    for (int a = 0; a < J; ++a) out[s * J + a] = ExpectRow(game, s, a, f);
  };
  if (exec == Execution::kSerial) {
    for (int s = 0; s < S; ++s) body(s);
  } else {
#pragma omp parallel for schedule(static)
    for (int s = 0; s < S; ++s) body(s);
  }
  return out;
}

Table PolicyAverage(const MarkovGame& game, std::span<const double> joint_pi,
                    std::span<const double> q, Execution exec) {
  return PolicyReward(game, joint_pi, q, exec);
}

}  // namespace mairl::kernels
