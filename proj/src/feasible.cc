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

#include "mairl/feasible.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mairl/dynamics.h"
#include "mairl/equilibrium.h"
#include "mairl/errors.h"
#include "mairl/kernels.h"

namespace mairl {
namespace {

constexpr double kSelfCheckTol = 1e-9;
constexpr double kInfinity = std::numeric_limits<double>::infinity();

void CheckParams(const MarkovGame& game, const FeasibleParams& params) {
  const int n = game.num_agents();
  if (static_cast<int>(params.advantage.size()) != n ||
      static_cast<int>(params.value.size()) != n) {
    throw DimensionError("parameters have the wrong number of agents");
  }
  for (int i = 0; i < n; ++i) {
    if (params.advantage[i].size() != static_cast<std::size_t>(game.NumPairs()) ||
        params.value[i].size() != static_cast<std::size_t>(game.num_states())) {
      throw DimensionError("parameter table has the wrong size");
    }
  }
}

}  // namespace

EventMask ComputeEventMask(const MarkovGame& game, const JointPolicy& policy) {
  ValidatePolicy(game, policy);
  const int S = game.num_states();
  const int J = game.num_joint();
  const auto& space = game.actions();
  EventMask out;
  for (int i = 0; i < game.num_agents(); ++i) {
    std::vector<unsigned char> m(static_cast<std::size_t>(S) * J, 0);
    const int n = space.count(i);
    for (int s = 0; s < S; ++s) {
      for (int a = 0; a < J; ++a) {
        const bool own_zero = policy.per_agent[i][s * n + space.ActionOf(a, i)] == 0.0;
        const bool others_pos = OthersProb(game, policy, i, s, a) > 0.0;
        m[s * J + a] = own_zero && others_pos;
      }
    }
    out.mask.push_back(std::move(m));
  }
  return out;
}

ImplicitReport CheckImplicit(const MarkovGame& game, const JointReward& reward,
                             const JointPolicy& policy, double tol) {
  ValueBundle vb = PolicyEvaluation(game, reward, policy);
  ImplicitReport report;
  const auto& space = game.actions();
  for (int i = 0; i < game.num_agents(); ++i) {
    const int n = space.count(i);
    for (int s = 0; s < game.num_states(); ++s) {
      for (int b = 0; b < n; ++b) {
        const double adv = ExpectedAdvantage(game, policy, vb, i, s, b, kInfinity);
        const bool on_support = policy.per_agent[i][s * n + b] > 0.0;
        const bool bad = on_support ? std::abs(adv) > tol : adv > tol;
        if (bad) {
          report.feasible = false;
          report.violations.push_back({i, s, b, adv, on_support});
        }
      }
    }
  }
  return report;
}

std::vector<Table> ExplicitReward(const MarkovGame& game, const EventMask& mask,
                                  const FeasibleParams& params) {
  CheckParams(game, params);
  const int S = game.num_states();
  const int J = game.num_joint();
  std::vector<Table> out;
  for (int i = 0; i < game.num_agents(); ++i) {
    const Table next = kernels::ExpectNext(game, params.value[i]);
    Table r(static_cast<std::size_t>(S) * J);
    for (int s = 0; s < S; ++s) {
      for (int a = 0; a < J; ++a) {
        const int k = s * J + a;
        r[k] = params.value[i][s] - game.gamma() * next[k];
        if (mask(i, k)) r[k] -= params.advantage[i][k];
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

JointReward ConstructReward(const MarkovGame& game, const JointPolicy& policy,
                            const FeasibleParams& params,
                            const std::vector<double>& rmax) {
  CheckParams(game, params);
  if (static_cast<int>(rmax.size()) != game.num_agents()) {
    throw DimensionError("rmax has the wrong number of agents");
  }
  for (const Table& a : params.advantage) {
    for (double x : a) {
      if (!(x >= 0.0)) throw OutOfRangeError("advantage parameter is negative");
    }
  }
  JointReward reward;
  reward.rmax = rmax;
  reward.tables = ExplicitReward(game, ComputeEventMask(game, policy), params);
  for (int i = 0; i < game.num_agents(); ++i) {
    for (double x : reward.tables[i]) {
      if (x < 0.0 || x > rmax[i]) {
        throw OutOfRangeError("constructed reward " + std::to_string(x) +
                              " leaves [0, rmax]");
      }
    }
  }
  if (!CheckImplicit(game, reward, policy, kSelfCheckTol).feasible) {
    throw NotFeasibleError("constructed reward fails the implicit test");
  }
  return reward;
}

FeasibleParams DecomposeReward(const MarkovGame& game, const JointPolicy& policy,
                               const JointReward& reward, double tol) {
  if (!CheckImplicit(game, reward, policy, tol).feasible) {
    throw NotFeasibleError("policy is not an equilibrium under the reward");
  }
  ValueBundle vb = PolicyEvaluation(game, reward, policy);
  const EventMask mask = ComputeEventMask(game, policy);
  const int S = game.num_states();
  const int J = game.num_joint();
  FeasibleParams params;
  params.value = vb.v;
  for (int i = 0; i < game.num_agents(); ++i) {
    Table a(static_cast<std::size_t>(S) * J, 0.0);
    for (int s = 0; s < S; ++s) {
      for (int b = 0; b < J; ++b) {
        const int k = s * J + b;
        if (!mask(i, k)) continue;
        const double gap = vb.v[i][s] - vb.q[i][k];
        if (gap < -tol) {
          throw NotFeasibleError(
              "masked joint action beats the equilibrium value; the reward has "
              "no explicit representation");
        }
        a[k] = std::max(gap, 0.0);
      }
    }
    params.advantage.push_back(std::move(a));
  }
  return params;
}

std::vector<Table> ErrorPropagationBound(const FeasibleParams& params,
                                         const EventMask& mask,
                                         const EventMask& mask_hat,
                                         const MarkovGame& game,
                                         const MarkovGame& game_hat) {
  CheckParams(game, params);
  if (!game.SameShape(game_hat)) throw DimensionError("models differ in shape");
  const int S = game.num_states();
  const int J = game.num_joint();
  std::vector<Table> out;
  for (int i = 0; i < game.num_agents(); ++i) {
    Table b(static_cast<std::size_t>(S) * J);
    for (int s = 0; s < S; ++s) {
      for (int a = 0; a < J; ++a) {
        const int k = s * J + a;
        double acc = mask(i, k) != mask_hat(i, k) ? params.advantage[i][k] : 0.0;
        auto p = game.Row(s, a);
        auto q = game_hat.Row(s, a);
        double drift = 0.0;
        for (int t = 0; t < S; ++t) {
          drift += std::abs(params.value[i][t]) * std::abs(p[t] - q[t]);
        }
        b[k] = acc + game.gamma() * drift;
      }
    }
    out.push_back(std::move(b));
  }
  return out;
}

NashGapBoundResult NashGapBound(const MarkovGame& game,
                                const MarkovGame& game_hat,
                                const JointReward& reward,
                                const JointReward& reward_hat,
                                const JointPolicy& policy_hat, int agent,
                                const Table& deviation, double tol) {
  if (!game.SameShape(game_hat) || game.gamma() != game_hat.gamma()) {
    throw DimensionError("models differ in shape or discount");
  }
  if (agent < 0 || agent >= game.num_agents()) {
    throw DimensionError("agent out of range");
  }
  NashGapBoundResult out;
  out.estimated_gap = NashGap(game_hat, reward_hat, policy_hat).gap;
  if (out.estimated_gap > tol) {
    throw PreconditionError("policy is not an equilibrium of the estimate");
  }
  JointPolicy deviated = policy_hat;
  deviated.per_agent[agent] = deviation;
  ValidatePolicy(game, deviated);

  const int S = game.num_states();
  const int J = game.num_joint();
  // sum_k w_hat_s(k) |Rhat - R + gamma (Phat - P) V|(k) for each start s.
  auto weighted_error = [&](const JointPolicy& pi, Table& value_out) {
    ValueBundle ref = PolicyEvaluation(game, reward, pi);
    value_out = ref.v[agent];
    const Table next = kernels::ExpectNext(game, value_out);
    const Table next_hat = kernels::ExpectNext(game_hat, value_out);
    Table err(static_cast<std::size_t>(S) * J);
    for (int k = 0; k < S * J; ++k) {
      err[k] = std::abs(reward_hat.tables[agent][k] - reward.tables[agent][k] +
                        game.gamma() * (next_hat[k] - next[k]));
    }
    Table per_state(S);
    for (int s = 0; s < S; ++s) {
      Occupancy occ = OccupancyMeasure(game_hat, pi, s);
      double acc = 0.0;
      for (int k = 0; k < S * J; ++k) acc += occ.w[k] * err[k];
      per_state[s] = acc;
    }
    return per_state;
  };
  Table v_hat, v_dev;
  const Table first = weighted_error(policy_hat, v_hat);
  const Table second = weighted_error(deviated, v_dev);
  out.bound.resize(S);
  out.direct.resize(S);
  out.max_bound = -kInfinity;
  out.max_direct = -kInfinity;
  for (int s = 0; s < S; ++s) {
    out.bound[s] = first[s] + second[s] + out.estimated_gap;
    out.direct[s] = v_dev[s] - v_hat[s];
    out.max_bound = std::max(out.max_bound, out.bound[s]);
    out.max_direct = std::max(out.max_direct, out.direct[s]);
  }
  return out;
}

}  // namespace mairl
