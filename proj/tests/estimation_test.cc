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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>

#include "mairl/errors.h"
#include "mairl/estimation.h"
#include "test_games.h"

namespace mairl {
namespace {

using testing::RandomGame;
using testing::RandomPolicy;

// s0 -> s1 under every joint action, s1 -> s0.
MarkovGame Flip() {
  Table p;
  for (int s = 0; s < 2; ++s) {
    for (int a = 0; a < 4; ++a) {
      p.push_back(s == 0 ? 0.0 : 1.0);
      p.push_back(s == 0 ? 1.0 : 0.0);
    }
  }
  return MarkovGame(2, {2, 2}, p, 0.5, {1.0, 0.0});
}

TEST_CASE("sample rounds on deterministic inputs") {
  MarkovGame game = Flip();
  JointPolicy expert = DeterministicPolicy(game, {{1, 0}, {0, 1}});
  SimulatedOracle oracle(game, expert, 1);
  CountBook book(2, {2, 2});
  for (int k = 0; k < 7; ++k) SampleRound(oracle, book);
  CHECK(book.iteration == 7);
  for (int s = 0; s < 2; ++s) {
    CHECK(book.n_s[s] == 7);
    for (int a = 0; a < 4; ++a) {
      CHECK(book.n_sa[s * 4 + a] == 7);
      CHECK(book.n_sas[(s * 4 + a) * 2 + (1 - s)] == 7);
      CHECK(book.n_sas[(s * 4 + a) * 2 + s] == 0);
    }
  }
  CHECK(book.n_i_sa[0][0 * 2 + 1] == 7);
  CHECK(book.n_i_sa[0][1 * 2 + 0] == 7);
  CHECK(book.n_i_sa[1][1 * 2 + 1] == 7);

  EstimatedProblem est = Estimate(book);
  CHECK(est.pi_hat.per_agent[0] == Table{0.0, 1.0, 1.0, 0.0});
  CHECK(est.pi_hat.per_agent[1] == Table{1.0, 0.0, 0.0, 1.0});
}

TEST_CASE("estimates and fallbacks") {
  CountBook book(2, {1});
  EstimatedProblem empty = Estimate(book);
  for (double x : empty.p_hat) CHECK(x == 0.5);
  CHECK(empty.pi_hat.per_agent[0] == Table{1.0, 1.0});

  CountBook three(2, {1});
  three.n_sas = {2, 1, 0, 0};
  three.n_sa = {3, 0};
  EstimatedProblem e = Estimate(three);
  CHECK(e.p_hat[0] == doctest::Approx(2.0 / 3.0));
  CHECK(e.p_hat[1] == doctest::Approx(1.0 / 3.0));
  CHECK(e.p_hat[2] == 0.5);
}

TEST_CASE("serial and parallel rounds agree") {
  std::mt19937_64 rng(3);
  MarkovGame game = RandomGame(rng, 6, {3, 2}, 0.9);
  SimulatedOracle oracle(game, RandomPolicy(game, rng), 99);
  CountBook a(6, {3, 2}), b(6, {3, 2});
  for (int k = 0; k < 20; ++k) {
    SampleRound(oracle, a, Execution::kSerial);
    SampleRound(oracle, b, Execution::kParallel);
  }
  CHECK(a.n_sas == b.n_sas);
  CHECK(a.n_i_sa == b.n_i_sa);
  ConfidenceParams params{0.1, 0.2, 1.0, 0.9};
  CHECK(Uncertainty(a, params, Execution::kSerial).c ==
        Uncertainty(a, params, Execution::kParallel).c);
}

TEST_CASE("xi threshold") {
  // log(2 * 2 * 4 * 1 * 16 / 0.5) / log 2 = log2(512).
  CHECK(XiThresholdAt(4, 0.5, 0.5, 2, 4, 2) == doctest::Approx(9.0).epsilon(1e-12));
  CHECK(XiThresholdAt(4, 0.5, 1.0, 2, 4, 2) == 0.0);
  CHECK(XiThresholdAt(1, 2.0 * 2 * 4, 0.5, 2, 4, 2) == doctest::Approx(0.0));
  ConfidenceParams params{1.0, 0.5, 1.0, 0.9};
  CHECK(XiThreshold(4, params, 2, {2, 2}) == doctest::Approx(9.0).epsilon(1e-12));
  CHECK_THROWS_AS(XiThresholdAt(4, 0.5, 0.0, 2, 4, 2), OutOfRangeError);
}

TEST_CASE("transition radius") {
  ConfidenceParams params{0.5, 1.0, 1.0, 0.9};
  CHECK(ConfidenceLog(1, 0.5, 2, 4) == doctest::Approx(std::log(192.0)));
  CHECK(TransitionRadius(0, params, 2, {2, 2}) ==
        doctest::Approx(10.0 * std::sqrt(2.0 * std::log(192.0))).epsilon(1e-12));
  for (long n = 8; n < 100000; n *= 3) {
    CHECK(TransitionRadius(4 * n, params, 2, {2, 2}) <
          TransitionRadius(n, params, 2, {2, 2}));
  }
  params.rmax = 0.0;
  CHECK(TransitionRadius(5, params, 2, {2, 2}) == 0.0);
}

TEST_CASE("uncertainty table") {
  ConfidenceParams params{0.5, 0.5, 1.0, 0.9};
  CountBook fresh(2, {2, 2});
  UncertaintyTable u = Uncertainty(fresh, params);
  const double expected = 10.0 * (1.0 + 0.9 * std::sqrt(2.0 * std::log(192.0)));
  CHECK(expected == doctest::Approx(39.19).epsilon(1e-3));
  for (double c : u.c) CHECK(c == doctest::Approx(expected).epsilon(1e-12));
  CHECK(u.indicator_active_states == 2);
  CHECK(u.epsilon_k == doctest::Approx(expected / 0.1));

  // Large counts: indicator gone and C small.
  CountBook big(2, {2, 2});
  for (long& x : big.n_sa) x = 100000000;
  for (long& x : big.n_s) x = 100000000;
  UncertaintyTable ub = Uncertainty(big, params);
  CHECK(ub.indicator_active_states == 0);
  CHECK(ub.max_c < 0.01);

  // Pure expert clears after one round.
  ConfidenceParams pure{0.5, 1.0, 1.0, 0.9};
  CountBook one(2, {2, 2});
  for (long& x : one.n_sa) x = 1;
  for (long& x : one.n_s) x = 1;
  CHECK(Uncertainty(one, pure).indicator_active_states == 0);
  CHECK(Uncertainty(fresh, pure).indicator_active_states == 2);
}

TEST_CASE("uniform sampling stopping rule") {
  MarkovGame game = Flip();
  JointPolicy expert = DeterministicPolicy(game, {{1, 0}, {0, 1}});
  SimulatedOracle oracle(game, expert, 4);
  ConfidenceParams pure{0.1, 1.0, 1.0, 0.5};

  SamplingResult inf =
      UniformSampling(oracle, pure, std::numeric_limits<double>::infinity(), 10);
  CHECK(inf.tau == 1);
  CHECK(inf.converged);

  SamplingResult run = UniformSampling(oracle, pure, 2.0, 100000);
  REQUIRE(run.converged);
  CHECK(run.tau == PredictStoppingIteration(pure, 2, {2, 2}, 2.0, 100000));
  // Only the transition radius is left after round 1.
  CHECK(run.log.front().indicator_active_states == 0);
  const double radius_eps =
      0.5 * TransitionRadius(run.tau, pure, 2, {2, 2}) / 0.5;
  CHECK(radius_eps <= 1.0 + 1e-12);
  CHECK(0.5 * TransitionRadius(run.tau - 1, pure, 2, {2, 2}) / 0.5 > 1.0);
  CHECK(run.problem.pi_hat.per_agent[0] == expert.per_agent[0]);
  CHECK(static_cast<long>(run.log.size()) == run.tau);

  SamplingResult capped = UniformSampling(oracle, pure, 2.0, 5);
  CHECK_FALSE(capped.converged);
  CHECK(capped.tau == 5);
  CHECK(PredictStoppingIteration(pure, 2, {2, 2}, 2.0, 5) == -1);
}

TEST_CASE("prediction matches a stochastic run") {
  std::mt19937_64 rng(5);
  MarkovGame game = RandomGame(rng, 2, {2, 2}, 0.5);
  JointPolicy expert = UniformPolicy(game);
  ConfidenceParams params{0.1, 0.5, 1.0, 0.5};
  SimulatedOracle oracle(game, expert, 8);
  SamplingResult run = UniformSampling(oracle, params, 3.0, 1000000);
  REQUIRE(run.converged);
  CHECK(run.tau == PredictStoppingIteration(params, 2, {2, 2}, 3.0, 1000000));
}

TEST_CASE("estimates are consistent") {
  std::mt19937_64 rng(7);
  MarkovGame game = RandomGame(rng, 3, {2, 2}, 0.9);
  JointPolicy expert = RandomPolicy(game, rng);
  SimulatedOracle oracle(game, expert, 11);
  CountBook book(3, {2, 2});
  for (int k = 0; k < 10000; ++k) SampleRound(oracle, book);
  EstimatedProblem est = Estimate(book);
  for (std::size_t k = 0; k < est.p_hat.size(); ++k) {
    CHECK(std::abs(est.p_hat[k] - game.transitions()[k]) <= 0.02);
  }
  for (int i = 0; i < 2; ++i) {
    for (std::size_t k = 0; k < expert.per_agent[i].size(); ++k) {
      CHECK(std::abs(est.pi_hat.per_agent[i][k] - expert.per_agent[i][k]) <= 0.02);
      // Exact zeros stay exact.
      if (expert.per_agent[i][k] == 0.0) CHECK(est.pi_hat.per_agent[i][k] == 0.0);
    }
  }
}

TEST_CASE("theoretical sample bound") {
  ConfidenceParams params{0.1, 1.0, 1.0, 0.9};
  SampleBound b = TheoreticalSampleBound(params, 72, {4, 4}, 0.5);
  const double base = 0.81 / (std::pow(0.1, 4) * 0.25);
  const double expected =
      128.0 * 72 * 16 * base * std::log(64.0 * base * std::sqrt(12.0 * 72 * 16 / 0.1));
  CHECK(b.transition_term == doctest::Approx(expected).epsilon(1e-12));
  CHECK(b.policy_term == 2.0 * 72);
  CHECK(b.total == b.transition_term);

  ConfidenceParams mixed{0.1, 0.3, 1.0, 0.9};
  SampleBound far = TheoreticalSampleBound(mixed, 3, {2, 2}, 1e9);
  CHECK(far.transition_term == 0.0);
  CHECK(far.total == far.policy_term);
  const double L = std::log(1.0 / 0.7);
  const double x = std::log(2.0 * 3 * 4 * 1 / 0.1);
  CHECK(far.policy_term == doctest::Approx(6.0 + 6.0 / L * (x + 2.0 * (x + 2.0) / L)));

  for (double eps : {0.5, 1.0, 2.0}) {
    const double small = TheoreticalSampleBound(params, 10, {2, 2}, eps).transition_term;
    const double large = TheoreticalSampleBound(params, 10, {4, 2}, eps).transition_term;
    CHECK(large / small >= 2.0);
    CHECK(large / small <= 2.2);
  }
}

TEST_CASE("policy estimation threshold") {
  CHECK(PolicyEstimationThreshold(2, 0.1, 0.5) == 4);
  CHECK(PolicyEstimationThreshold(2, 1.0, 0.5) == 1);
  CHECK(PolicyEstimationThreshold(3, 0.1, 0.3) == 9);
  CHECK_THROWS_AS(PolicyEstimationThreshold(1, 0.1, 0.5), PreconditionError);
}

}  // namespace
}  // namespace mairl
