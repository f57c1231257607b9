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

#ifndef MAIRL_MARKOV_GAME_H_
#define MAIRL_MARKOV_GAME_H_

#include <cstddef>
#include <span>
#include <vector>

namespace mairl {

using Table = std::vector<double>;

// Tolerance on row sums of probability tables.
inline constexpr double kStochasticTol = 1e-12;

// Joint actions are ranked lexicographically with agent 0 most significant
// and the last agent varying fastest.
class JointActionSpace {
 public:
  JointActionSpace() = default;
  explicit JointActionSpace(std::vector<int> action_counts);

  int num_agents() const { return static_cast<int>(counts_.size()); }
  int num_joint() const { return num_joint_; }
  int count(int agent) const { return counts_[agent]; }
  const std::vector<int>& counts() const { return counts_; }

  int Flatten(std::span<const int> per_agent) const;
  std::vector<int> Split(int flat) const;
  // Action of `agent` inside joint action `flat`.
  int ActionOf(int flat, int agent) const {
    return (flat / strides_[agent]) % counts_[agent];
  }
  // Replaces the action of `agent` inside `flat` by `action`.
  int WithAction(int flat, int agent, int action) const {
    return flat + (action - ActionOf(flat, agent)) * strides_[agent];
  }
  int stride(int agent) const { return strides_[agent]; }

  // Number of joint actions of all agents other than `agent`.
  int num_others(int agent) const { return num_joint_ / counts_[agent]; }

 private:
  std::vector<int> counts_;
  std::vector<int> strides_;
  int num_joint_ = 0;
};

// A finite discounted Markov game without reward. Immutable once built.
class MarkovGame {
 public:
  // Validates every invariant and throws DimensionError / NotStochasticError /
  // OutOfRangeError on violation. `transitions` is laid out as
  // [(s * J + a) * S + s'].
  MarkovGame(int num_states, std::vector<int> action_counts, Table transitions,
             double gamma, Table mu);

  int num_agents() const { return actions_.num_agents(); }
  int num_states() const { return num_states_; }
  int num_joint() const { return actions_.num_joint(); }
  const JointActionSpace& actions() const { return actions_; }
  const std::vector<int>& action_counts() const { return actions_.counts(); }
  double gamma() const { return gamma_; }
  const Table& mu() const { return mu_; }
  const Table& transitions() const { return transitions_; }

  // Next-state distribution of (s, a).
  std::span<const double> Row(int s, int a) const {
    return {transitions_.data() + RowOffset(s, a),
            static_cast<std::size_t>(num_states_)};
  }
  double P(int s, int a, int next) const {
    return transitions_[RowOffset(s, a) + next];
  }
  std::size_t RowOffset(int s, int a) const {
    return (static_cast<std::size_t>(s) * num_joint() + a) * num_states_;
  }
  int NumPairs() const { return num_states_ * num_joint(); }

  // Same game with a different transition table (estimated models).
  MarkovGame WithTransitions(Table transitions) const;

  bool SameShape(const MarkovGame& other) const;

 private:
  int num_states_;
  JointActionSpace actions_;
  Table transitions_;
  double gamma_;
  Table mu_;
};

// Per-agent reward tables R^i[s * J + a] bounded in [0, rmax_i].
struct JointReward {
  std::vector<double> rmax;
  std::vector<Table> tables;

  double operator()(int agent, int s, int a, int num_joint) const {
    return tables[agent][static_cast<std::size_t>(s) * num_joint + a];
  }
  int num_agents() const { return static_cast<int>(tables.size()); }
};

// Per-agent stochastic tables pi^i[s * |A^i| + a^i].
struct JointPolicy {
  std::vector<Table> per_agent;

  int num_agents() const { return static_cast<int>(per_agent.size()); }
};

// Shape and range checks shared by every operation.
void ValidateReward(const MarkovGame& game, const JointReward& reward);
void ValidatePolicy(const MarkovGame& game, const JointPolicy& policy);

// Probability of joint action `a` in state `s`.
double JointProb(const MarkovGame& game, const JointPolicy& policy, int s,
                 int a);
// Probability of the other agents' part of `a`, i.e. prod_{j != agent}.
double OthersProb(const MarkovGame& game, const JointPolicy& policy, int agent,
                  int s, int a);
// Joint action distribution table pi(a|s) laid out as [s * J + a].
Table JointPolicyTable(const MarkovGame& game, const JointPolicy& policy);

JointPolicy UniformPolicy(const MarkovGame& game);
// Deterministic policy from one action index per (agent, state).
JointPolicy DeterministicPolicy(const MarkovGame& game,
                                const std::vector<std::vector<int>>& actions);
JointReward ConstantReward(const MarkovGame& game, double value, double rmax);

}  // namespace mairl

#endif  // MAIRL_MARKOV_GAME_H_
