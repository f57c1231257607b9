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

#include "mairl/estimation.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <utility>

#include "mairl/errors.h"
#include "mairl/rng.h"

namespace mairl {
namespace {

constexpr std::uint64_t kTransitionStream = 0x7472616e73ULL;
constexpr std::uint64_t kExpertStream = 0x657870657274ULL;

int JointCount(const std::vector<int>& counts) {
  int j = 1;
  for (int c : counts) j *= c;
  return j;
}

}  // namespace

SimulatedOracle::SimulatedOracle(const MarkovGame& game, JointPolicy expert,
                                 std::uint64_t seed)
    : game_(game), expert_(std::move(expert)), seed_(seed) {
  ValidatePolicy(game_, expert_);
}

int SimulatedOracle::Transition(int s, int joint_action,
                                std::uint64_t query) const {
  const double u = CounterUniform(seed_, kTransitionStream, query);
  return DrawIndex(game_.Row(s, joint_action), u);
}

void SimulatedOracle::Expert(int s, std::uint64_t query,
                             std::span<int> out) const {
  const int n = game_.num_agents();
  for (int i = 0; i < n; ++i) {
    const int c = game_.actions().count(i);
    const double u = CounterUniform(seed_, kExpertStream,
                                    query * static_cast<std::uint64_t>(n) + i);
    out[i] = DrawIndex(std::span<const double>(expert_.per_agent[i])
                           .subspan(static_cast<std::size_t>(s) * c, c),
                       u);
  }
}

CountBook::CountBook(int states, std::vector<int> action_counts)
    : num_states(states), actions(std::move(action_counts)) {
  if (states <= 0) throw DimensionError("state count must be positive");
  const std::size_t pairs = static_cast<std::size_t>(states) * actions.num_joint();
  n_sas.assign(pairs * states, 0);
  n_sa.assign(pairs, 0);
  for (int i = 0; i < actions.num_agents(); ++i) {
    n_i_sa.emplace_back(static_cast<std::size_t>(states) * actions.count(i), 0);
  }
  n_s.assign(states, 0);
}

void SampleRound(const GenerativeModel& oracle, CountBook& book,
                 Execution exec) {
  const int S = book.num_states;
  const int J = book.actions.num_joint();
  const int n = book.actions.num_agents();
  if (oracle.num_states() != S || oracle.action_counts() != book.actions.counts()) {
    throw DimensionError("oracle does not match the count book");
  }
  const std::uint64_t k = static_cast<std::uint64_t>(book.iteration);
  // Each state touches only its own rows, so states are independent.
  auto state_round = [&](int s) {
    for (int a = 0; a < J; ++a) {
      const std::uint64_t q = k * S * J + static_cast<std::uint64_t>(s) * J + a;
      const int next = oracle.Transition(s, a, q);
      if (next < 0 || next >= S) throw Error("oracle returned an invalid state");
      ++book.n_sas[(static_cast<std::size_t>(s) * J + a) * S + next];
      ++book.n_sa[static_cast<std::size_t>(s) * J + a];
    }
    std::vector<int> acts(n);
    oracle.Expert(s, k * S + s, acts);
    for (int i = 0; i < n; ++i) {
      if (acts[i] < 0 || acts[i] >= book.actions.count(i)) {
        throw Error("oracle returned an invalid action");
      }
      ++book.n_i_sa[i][static_cast<std::size_t>(s) * book.actions.count(i) + acts[i]];
    }
    ++book.n_s[s];
  };
  if (exec == Execution::kSerial) {
    for (int s = 0; s < S; ++s) state_round(s);
  } else {
    std::exception_ptr error;
#pragma omp parallel for schedule(static)
    for (int s = 0; s < S; ++s) {
      try {
        state_round(s);
      } catch (...) {
#pragma omp critical
        error = std::current_exception();
      }
    }
    if (error) std::rethrow_exception(error);
  }
  ++book.iteration;
}

MarkovGame EstimatedProblem::Game(const MarkovGame& structure) const {
  return structure.WithTransitions(p_hat);
}

EstimatedProblem Estimate(const CountBook& book) {
  const int S = book.num_states;
  const int J = book.actions.num_joint();
  EstimatedProblem out{Table(static_cast<std::size_t>(S) * J * S), JointPolicy(),
                       book};
  for (int k = 0; k < S * J; ++k) {
    const long total = book.n_sa[k];
    double* row = &out.p_hat[static_cast<std::size_t>(k) * S];
    for (int t = 0; t < S; ++t) {
      row[t] = total > 0 ? static_cast<double>(book.n_sas[static_cast<std::size_t>(k) * S + t]) / total
                         : 1.0 / S;
    }
  }
  for (int i = 0; i < book.actions.num_agents(); ++i) {
    const int c = book.actions.count(i);
    Table t(static_cast<std::size_t>(S) * c);
    for (int s = 0; s < S; ++s) {
      for (int b = 0; b < c; ++b) {
        t[s * c + b] = book.n_s[s] > 0
                           ? static_cast<double>(book.n_i_sa[i][s * c + b]) / book.n_s[s]
                           : 1.0 / c;
      }
    }
    out.pi_hat.per_agent.push_back(std::move(t));
  }
  return out;
}

void ConfidenceParams::Validate() const {
  if (!(delta > 0.0 && delta < 1.0)) throw OutOfRangeError("delta must be in (0, 1)");
  if (!(pi_min > 0.0 && pi_min <= 1.0)) {
    throw OutOfRangeError("pi_min must be in (0, 1]");
  }
  if (!(rmax >= 0.0) || !std::isfinite(rmax)) throw OutOfRangeError("rmax must be >= 0");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw OutOfRangeError("gamma must be in [0, 1)");
}

double XiThresholdAt(long n_s, double delta_eff, double pi_min, int num_states,
                     int num_joint, int num_agents) {
  if (!(pi_min > 0.0 && pi_min <= 1.0)) {
    throw OutOfRangeError("pi_min must be in (0, 1]");
  }
  if (pi_min == 1.0 || n_s <= 0) return 0.0;
  const double others = std::max(1, num_agents - 1);
  const double n = static_cast<double>(n_s);
  return std::log(2.0 * num_states * num_joint * others * n * n / delta_eff) /
         std::log(1.0 / (1.0 - pi_min));
}

double XiThreshold(long n_s, const ConfidenceParams& params, int num_states,
                   const std::vector<int>& action_counts) {
  return XiThresholdAt(n_s, params.delta / 2.0, params.pi_min, num_states,
                       JointCount(action_counts),
                       static_cast<int>(action_counts.size()));
}

double ConfidenceLog(long n_sa, double delta, int num_states, int num_joint) {
  const double n = static_cast<double>(std::max(1L, n_sa));
  return std::log(12.0 * num_states * num_joint * n * n / delta);
}

double TransitionRadius(long n_sa, const ConfidenceParams& params,
                        int num_states, const std::vector<int>& action_counts) {
  const double l = ConfidenceLog(n_sa, params.delta, num_states,
                                 JointCount(action_counts));
  const double n = static_cast<double>(std::max(1L, n_sa));
  return params.rmax / (1.0 - params.gamma) * std::sqrt(2.0 * l / n);
}

bool PolicyIndicator(long n_s, const ConfidenceParams& params, int num_states,
                     const std::vector<int>& action_counts) {
  if (params.pi_min == 1.0) return n_s < 1;
  const double xi = XiThreshold(n_s, params, num_states, action_counts);
  return static_cast<double>(n_s) <= std::max(1.0, xi);
}

UncertaintyTable Uncertainty(const CountBook& book,
                             const ConfidenceParams& params, Execution exec) {
  params.Validate();
  const int S = book.num_states;
  const int J = book.actions.num_joint();
  const auto& counts = book.actions.counts();
  const double scale = params.rmax / (1.0 - params.gamma);
  UncertaintyTable out;
  out.c.assign(static_cast<std::size_t>(S) * J, 0.0);
  std::vector<unsigned char> active(S);
  for (int s = 0; s < S; ++s) {
    active[s] = PolicyIndicator(book.n_s[s], params, S, counts);
  }
  auto fill = [&](int s) {
    for (int a = 0; a < J; ++a) {
      const long n = book.n_sa[static_cast<std::size_t>(s) * J + a];
      const double l = ConfidenceLog(n, params.delta, S, J);
      const double nplus = static_cast<double>(std::max(1L, n));
      out.c[s * J + a] =
          scale * ((active[s] ? 1.0 : 0.0) + params.gamma * std::sqrt(2.0 * l / nplus));
    }
  };
  if (exec == Execution::kSerial) {
    for (int s = 0; s < S; ++s) fill(s);
  } else {
#pragma omp parallel for schedule(static)
    for (int s = 0; s < S; ++s) fill(s);
  }
  for (int s = 0; s < S; ++s) {
    out.indicator_active_states += active[s];
    for (int a = 0; a < J; ++a) {
      out.max_c = std::max(out.max_c, out.c[s * J + a]);
      out.max_radius = std::max(
          out.max_radius,
          TransitionRadius(book.n_sa[static_cast<std::size_t>(s) * J + a], params, S, counts));
    }
  }
  out.epsilon_k = out.max_c / (1.0 - params.gamma);
  return out;
}

SamplingResult UniformSampling(const GenerativeModel& oracle,
                               const ConfidenceParams& params, double epsilon,
                               long k_max, Execution exec,
                               const std::function<void(const RunLogRow&)>& on_round) {
  params.Validate();
  if (!(epsilon > 0.0)) throw OutOfRangeError("epsilon must be positive");
  if (k_max < 1) throw OutOfRangeError("k_max must be at least 1");
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  CountBook book(oracle.num_states(), oracle.action_counts());
  SamplingResult out{Estimate(book), UncertaintyTable(), 0, false, {}};
  while (book.iteration < k_max) {
    SampleRound(oracle, book, exec);
    out.uncertainty = Uncertainty(book, params, exec);
    const double ms =
        std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    RunLogRow row{book.iteration, out.uncertainty.epsilon_k, out.uncertainty.max_c,
                  out.uncertainty.max_radius,
                  out.uncertainty.indicator_active_states, ms};
    out.log.push_back(row);
    if (on_round) on_round(row);
    if (out.uncertainty.epsilon_k <= epsilon / 2.0) {
      out.converged = true;
      break;
    }
  }
  out.tau = book.iteration;
  out.problem = Estimate(book);
  return out;
}

long PredictStoppingIteration(const ConfidenceParams& params, int num_states,
                              const std::vector<int>& action_counts,
                              double epsilon, long k_max) {
  params.Validate();
  const int J = JointCount(action_counts);
  const double scale = params.rmax / (1.0 - params.gamma);
  for (long k = 1; k <= k_max; ++k) {
    const bool active = PolicyIndicator(k, params, num_states, action_counts);
    const double l = ConfidenceLog(k, params.delta, num_states, J);
    const double c = scale * ((active ? 1.0 : 0.0) +
                              params.gamma * std::sqrt(2.0 * l / static_cast<double>(k)));
    if (c / (1.0 - params.gamma) <= epsilon / 2.0) return k;
  }
  return -1;
}

SampleBound TheoreticalSampleBound(const ConfidenceParams& params,
                                   int num_states,
                                   const std::vector<int>& action_counts,
                                   double epsilon) {
  params.Validate();
  if (!(epsilon > 0.0)) throw OutOfRangeError("epsilon must be positive");
  const double S = num_states;
  const double J = JointCount(action_counts);
  const double n = static_cast<double>(action_counts.size());
  const double g = params.gamma;
  const double base = g * g * params.rmax * params.rmax /
                      (std::pow(1.0 - g, 4) * epsilon * epsilon);
  SampleBound out;
  if (base > 0.0) {
    const double log_term = std::log(64.0 * base * std::sqrt(12.0 * S * J / params.delta));
    out.transition_term = std::max(0.0, 128.0 * S * J * base * log_term);
  }
  if (params.pi_min == 1.0) {
    out.policy_term = n * S;
  } else {
    const double L = std::log(1.0 / (1.0 - params.pi_min));
    const double x = std::log(2.0 * S * J * std::max(1.0, n - 1.0) / params.delta);
    out.policy_term = n * S + n * S / L * (x + 2.0 * (x + 2.0) / L);
  }
  out.total = std::max(out.transition_term, out.policy_term);
  return out;
}

long PolicyEstimationThreshold(int num_agents, double delta, double p_min) {
  if (num_agents < 2) throw PreconditionError("needs at least two agents");
  if (!(delta > 0.0 && delta <= 1.0)) throw OutOfRangeError("delta must be in (0, 1]");
  if (!(p_min > 0.0 && p_min <= 1.0)) throw OutOfRangeError("p_min must be in (0, 1]");
  if (p_min == 1.0) return 1;
  const double need = (std::log(1.0 / delta) + std::log(num_agents - 1.0)) /
                      std::log(1.0 / (1.0 - p_min));
  return std::max(1L, static_cast<long>(std::ceil(need)));
}

}  // namespace mairl
