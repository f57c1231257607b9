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

#include "mairl/markov_game.h"

#include <cmath>
#include <string>
#include <utility>

#include "mairl/errors.h"

namespace mairl {
namespace {

void CheckDistribution(std::span<const double> row, const std::string& what) {
  double sum = 0.0;
  for (double p : row) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw NotStochasticError(what + " has a negative or non-finite entry");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kStochasticTol) {
    throw NotStochasticError(what + " sums to " + std::to_string(sum));
  }
}

}  // namespace

JointActionSpace::JointActionSpace(std::vector<int> action_counts)
    : counts_(std::move(action_counts)) {
  if (counts_.empty()) throw DimensionError("a game needs at least one agent");
  strides_.assign(counts_.size(), 1);
  num_joint_ = 1;
  for (int i = static_cast<int>(counts_.size()) - 1; i >= 0; --i) {
    if (counts_[i] <= 0) throw DimensionError("action counts must be positive");
    strides_[i] = num_joint_;
    num_joint_ *= counts_[i];
  }
}

int JointActionSpace::Flatten(std::span<const int> per_agent) const {
  if (per_agent.size() != counts_.size()) {
    throw DimensionError("joint action has the wrong number of agents");
  }
  int flat = 0;
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    if (per_agent[i] < 0 || per_agent[i] >= counts_[i]) {
      throw DimensionError("action index out of range");
    }
    flat += per_agent[i] * strides_[i];
  }
  return flat;
}

std::vector<int> JointActionSpace::Split(int flat) const {
  if (flat < 0 || flat >= num_joint_) {
    throw DimensionError("joint action index out of range");
  }
  std::vector<int> out(counts_.size());
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    out[i] = ActionOf(flat, static_cast<int>(i));
  }
  return out;
}

MarkovGame::MarkovGame(int num_states, std::vector<int> action_counts,
                       Table transitions, double gamma, Table mu)
    : num_states_(num_states),
      actions_(std::move(action_counts)),
      transitions_(std::move(transitions)),
      gamma_(gamma),
      mu_(std::move(mu)) {
  if (num_states_ <= 0) throw DimensionError("a game needs at least one state");
  if (!(gamma_ >= 0.0 && gamma_ < 1.0)) {
    throw OutOfRangeError("discount must lie in [0, 1)");
  }
  if (transitions_.size() !=
      static_cast<std::size_t>(NumPairs()) * num_states_) {
    throw DimensionError("transition table has the wrong size");
  }
  if (mu_.size() != static_cast<std::size_t>(num_states_)) {
    throw DimensionError("initial distribution has the wrong size");
  }
  CheckDistribution(mu_, "initial distribution");
  for (int s = 0; s < num_states_; ++s) {
    for (int a = 0; a < num_joint(); ++a) {
      CheckDistribution(Row(s, a), "transition row (" + std::to_string(s) +
                                       ", " + std::to_string(a) + ")");
    }
  }
}

MarkovGame MarkovGame::WithTransitions(Table transitions) const {
  return MarkovGame(num_states_, actions_.counts(), std::move(transitions),
                    gamma_, mu_);
}

bool MarkovGame::SameShape(const MarkovGame& other) const {
  return num_states_ == other.num_states_ &&
         actions_.counts() == other.actions_.counts();
}

void ValidateReward(const MarkovGame& game, const JointReward& reward) {
  if (reward.num_agents() != game.num_agents() ||
      reward.rmax.size() != reward.tables.size()) {
    throw DimensionError("reward has the wrong number of agents");
  }
  for (int i = 0; i < reward.num_agents(); ++i) {
    if (reward.tables[i].size() != static_cast<std::size_t>(game.NumPairs())) {
      throw DimensionError("reward table has the wrong size");
    }
    if (!(reward.rmax[i] >= 0.0)) throw OutOfRangeError("negative Rmax");
    for (double r : reward.tables[i]) {
      if (!(r >= 0.0 && r <= reward.rmax[i])) {
        throw OutOfRangeError("reward entry " + std::to_string(r) +
                              " outside [0, Rmax]");
      }
    }
  }
}

void ValidatePolicy(const MarkovGame& game, const JointPolicy& policy) {
  if (policy.num_agents() != game.num_agents()) {
    throw DimensionError("policy has the wrong number of agents");
  }
  for (int i = 0; i < policy.num_agents(); ++i) {
    const int n = game.actions().count(i);
    if (policy.per_agent[i].size() !=
        static_cast<std::size_t>(game.num_states()) * n) {
      throw DimensionError("policy table has the wrong size");
    }
    for (int s = 0; s < game.num_states(); ++s) {
      CheckDistribution(
          std::span<const double>(policy.per_agent[i].data() + s * n, n),
          "policy row (agent " + std::to_string(i) + ", state " +
              std::to_string(s) + ")");
    }
  }
}

double JointProb(const MarkovGame& game, const JointPolicy& policy, int s,
                 int a) {
  const auto& space = game.actions();
  double p = 1.0;
  for (int i = 0; i < space.num_agents(); ++i) {
    p *= policy.per_agent[i][s * space.count(i) + space.ActionOf(a, i)];
  }
  return p;
}

double OthersProb(const MarkovGame& game, const JointPolicy& policy, int agent,
                  int s, int a) {
  const auto& space = game.actions();
  double p = 1.0;
  for (int j = 0; j < space.num_agents(); ++j) {
    if (j == agent) continue;
    p *= policy.per_agent[j][s * space.count(j) + space.ActionOf(a, j)];
  }
  return p;
}

Table JointPolicyTable(const MarkovGame& game, const JointPolicy& policy) {
  Table out(game.NumPairs());
  for (int s = 0; s < game.num_states(); ++s) {
    for (int a = 0; a < game.num_joint(); ++a) {
      out[s * game.num_joint() + a] = JointProb(game, policy, s, a);
    }
  }
  return out;
}

JointPolicy UniformPolicy(const MarkovGame& game) {
  JointPolicy policy;
  for (int i = 0; i < game.num_agents(); ++i) {
    const int n = game.actions().count(i);
    policy.per_agent.emplace_back(static_cast<std::size_t>(game.num_states()) * n,
                                  1.0 / n);
  }
  return policy;
}

JointPolicy DeterministicPolicy(const MarkovGame& game,
                                const std::vector<std::vector<int>>& actions) {
  if (static_cast<int>(actions.size()) != game.num_agents()) {
    throw DimensionError("deterministic policy has the wrong number of agents");
  }
  JointPolicy policy;
  for (int i = 0; i < game.num_agents(); ++i) {
    const int n = game.actions().count(i);
    if (static_cast<int>(actions[i].size()) != game.num_states()) {
      throw DimensionError("deterministic policy has the wrong number of states");
    }
    Table table(static_cast<std::size_t>(game.num_states()) * n, 0.0);
    for (int s = 0; s < game.num_states(); ++s) {
      if (actions[i][s] < 0 || actions[i][s] >= n) {
        throw DimensionError("action index out of range");
      }
      table[s * n + actions[i][s]] = 1.0;
    }
    policy.per_agent.push_back(std::move(table));
  }
  return policy;
}

JointReward ConstantReward(const MarkovGame& game, double value, double rmax) {
  JointReward reward;
  reward.rmax.assign(game.num_agents(), rmax);
  reward.tables.assign(game.num_agents(), Table(game.NumPairs(), value));
  return reward;
}

}  // namespace mairl
