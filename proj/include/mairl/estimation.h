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

// Estimation of the transition model and the expert policy from a generative
// model, with confidence radii, the reward-uncertainty table and the uniform
// sampling loop with its stopping rule.

#ifndef MAIRL_ESTIMATION_H_
#define MAIRL_ESTIMATION_H_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mairl/kernels.h"
#include "mairl/markov_game.h"

namespace mairl {

// Answers transition and expert queries. Both answers are deterministic
// functions of (seed, query index).
class GenerativeModel {
 public:
  virtual ~GenerativeModel() = default;
  virtual int num_states() const = 0;
  virtual const std::vector<int>& action_counts() const = 0;
  virtual int Transition(int s, int joint_action, std::uint64_t query) const = 0;
  // One sampled action per agent, written into `out`.
  virtual void Expert(int s, std::uint64_t query, std::span<int> out) const = 0;
};

// Simulates queries against a known game and expert policy.
class SimulatedOracle : public GenerativeModel {
 public:
  SimulatedOracle(const MarkovGame& game, JointPolicy expert,
                  std::uint64_t seed);

  int num_states() const override { return game_.num_states(); }
  const std::vector<int>& action_counts() const override {
    return game_.action_counts();
  }
  int Transition(int s, int joint_action, std::uint64_t query) const override;
  void Expert(int s, std::uint64_t query, std::span<int> out) const override;

 private:
  MarkovGame game_;
  JointPolicy expert_;
  std::uint64_t seed_;
};

struct CountBook {
  CountBook(int num_states, std::vector<int> action_counts);

  int num_states;
  JointActionSpace actions;
  std::vector<long> n_sas;  // [(s * J + a) * S + s']
  std::vector<long> n_sa;   // [s * J + a]
  std::vector<std::vector<long>> n_i_sa;  // per agent [s * |A^i| + a^i]
  std::vector<long> n_s;
  long iteration = 0;
};

// One sample for every (s, a) and one joint expert action for every state.
// Query indices are k * S * J + s * J + a for transitions and k * S + s for
// the expert, where k is the round being sampled.
void SampleRound(const GenerativeModel& oracle, CountBook& book,
                 Execution exec = Execution::kParallel);

struct EstimatedProblem {
  Table p_hat;
  JointPolicy pi_hat;
  CountBook counts;

  // Game with the estimated transitions and the structure's discount and
  // initial distribution.
  MarkovGame Game(const MarkovGame& structure) const;
};

// Empirical frequencies; rows with no data fall back to uniform.
EstimatedProblem Estimate(const CountBook& book);

struct ConfidenceParams {
  double delta = 0.1;
  double pi_min = 1.0;
  double rmax = 1.0;
  double gamma = 0.9;

  // Throws OutOfRangeError on invalid values.
  void Validate() const;
};

// log(2 S J (n - 1) N^2 / delta_eff) / log(1 / (1 - pi_min)); 0 when
// pi_min == 1 or N == 0. Single-agent games use n - 1 = 1.
double XiThresholdAt(long n_s, double delta_eff, double pi_min, int num_states,
                     int num_joint, int num_agents);
// Same with delta_eff = delta / 2.
double XiThreshold(long n_s, const ConfidenceParams& params, int num_states,
                   const std::vector<int>& action_counts);

// log(12 S J max(1, N)^2 / delta).
double ConfidenceLog(long n_sa, double delta, int num_states, int num_joint);
// (Rmax / (1 - gamma)) sqrt(2 l / max(1, N)).
double TransitionRadius(long n_sa, const ConfidenceParams& params,
                        int num_states, const std::vector<int>& action_counts);

// True while the expert estimate at a state with `n_s` observations is not
// yet trusted: n_s <= max(1, xi). Pure experts (pi_min == 1) clear after the
// first observation.
bool PolicyIndicator(long n_s, const ConfidenceParams& params, int num_states,
                     const std::vector<int>& action_counts);

struct UncertaintyTable {
  Table c;  // [s * J + a]
  double epsilon_k = 0.0;
  double max_c = 0.0;
  double max_radius = 0.0;
  int indicator_active_states = 0;
};

// C(s,a) = (Rmax / (1 - gamma)) (indicator(s) + gamma sqrt(2 l / N+)) and
// epsilon_k = max C / (1 - gamma).
UncertaintyTable Uncertainty(const CountBook& book,
                             const ConfidenceParams& params,
                             Execution exec = Execution::kParallel);

struct RunLogRow {
  long k;
  double epsilon_k;
  double max_c;
  double max_radius;
  int indicator_active_states;
  double wall_time_ms;
};

struct SamplingResult {
  EstimatedProblem problem;
  UncertaintyTable uncertainty;
  long tau = 0;
  bool converged = false;
  std::vector<RunLogRow> log;
};

// Samples rounds until epsilon_k <= epsilon / 2 or k == k_max.
SamplingResult UniformSampling(const GenerativeModel& oracle,
                               const ConfidenceParams& params, double epsilon,
                               long k_max,
                               Execution exec = Execution::kParallel,
                               const std::function<void(const RunLogRow&)>&
                                   on_round = nullptr);

// Counts under uniform sampling are all equal to k after k rounds, so the
// stopping round does not depend on the samples. Returns the round uniform
// sampling stops at, or -1 when it exceeds k_max.
long PredictStoppingIteration(const ConfidenceParams& params, int num_states,
                              const std::vector<int>& action_counts,
                              double epsilon, long k_max);

struct SampleBound {
  double total = 0.0;  // max of the two terms
  double transition_term = 0.0;
  double policy_term = 0.0;
};

SampleBound TheoreticalSampleBound(const ConfidenceParams& params,
                                   int num_states,
                                   const std::vector<int>& action_counts,
                                   double epsilon);

// Smallest N >= 1 with N >= (log(1/delta) + log(n - 1)) / log(1/(1 - p_min)).
long PolicyEstimationThreshold(int num_agents, double delta, double p_min);

}  // namespace mairl

#endif  // MAIRL_ESTIMATION_H_
