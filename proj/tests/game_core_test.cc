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
#include <numeric>
#include <random>

#include "mairl/dynamics.h"
#include "mairl/errors.h"
#include "mairl/kernels.h"
#include "mairl/markov_game.h"
#include "test_games.h"

namespace mairl {
namespace {

using testing::MatchingPennies;
using testing::PrisonersDilemma;
using testing::RandomGame;
using testing::RandomPolicy;
using testing::RandomReward;
using testing::SingleState;

TEST_CASE("joint index round trip") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<int> counts;
    int joint = 1;
    const int n = std::uniform_int_distribution<int>(1, 4)(rng);
    for (int i = 0; i < n; ++i) {
      counts.push_back(std::uniform_int_distribution<int>(1, 9)(rng));
      joint *= counts.back();
    }
    if (joint > 10000) continue;
    JointActionSpace space(counts);
    for (int a = 0; a < space.num_joint(); ++a) {
      std::vector<int> parts = space.Split(a);
      CHECK(space.Flatten(parts) == a);
    }
  }
  // Agent 0 is the most significant digit.
  JointActionSpace space({2, 3});
  CHECK(space.Flatten(std::vector<int>{1, 0}) == 3);
  CHECK(space.Flatten(std::vector<int>{0, 2}) == 2);
}

TEST_CASE("game validation") {
  CHECK_THROWS_AS(MarkovGame(1, {2}, {1.0, 0.9}, 0.5, {1.0}),
                  NotStochasticError);
  CHECK_THROWS_AS(MarkovGame(1, {2}, {1.0, 1.0}, 1.0, {1.0}), OutOfRangeError);
  CHECK_THROWS_AS(MarkovGame(1, {2}, {1.0}, 0.5, {1.0}), DimensionError);
  CHECK_THROWS_AS(MarkovGame(1, {2}, {1.0, 1.0}, 0.5, {0.5}),
                  NotStochasticError);
}

TEST_CASE("constant reward has geometric value") {
  std::mt19937_64 rng(1);
  MarkovGame game = RandomGame(rng, 4, {2, 3}, 0.8);
  ValueBundle vb = PolicyEvaluation(game, ConstantReward(game, 0.3, 1.0),
                                    RandomPolicy(game, rng));
  for (const Table& v : vb.v) {
    for (double x : v) CHECK(x == doctest::Approx(0.3 / 0.2).epsilon(1e-12));
  }
}

TEST_CASE("cooperation value in the dilemma") {
  MarkovGame game = SingleState({2, 2}, 0.5);
  JointPolicy cc = DeterministicPolicy(game, {{0}, {0}});
  ValueBundle vb = PolicyEvaluation(game, PrisonersDilemma(), cc);
  CHECK(vb.v[0][0] == doctest::Approx(1.2).epsilon(1e-12));
  CHECK(vb.v[1][0] == doctest::Approx(1.2).epsilon(1e-12));
}

TEST_CASE("value matches Monte-Carlo rollouts") {
  std::mt19937_64 rng(3);
  MarkovGame game = RandomGame(rng, 3, {2, 2}, 0.5);
  JointReward reward = RandomReward(game, rng);
  JointPolicy pi = RandomPolicy(game, rng);
  ValueBundle vb = PolicyEvaluation(game, reward, pi);
  const Table joint = JointPolicyTable(game, pi);
  const int J = game.num_joint();
  // 40 steps leave a tail below 0.5^40 / 0.5; 25000 episodes give 10^6 steps.
  const int horizon = 40;
  const int episodes = 25000;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto draw = [&](std::span<const double> p) {
    double u = unit(rng), acc = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
      acc += p[k];
      if (u < acc) return static_cast<int>(k);
    }
    return static_cast<int>(p.size()) - 1;
  };
  for (int start = 0; start < game.num_states(); ++start) {
    double sum = 0.0, sum_sq = 0.0;
    for (int e = 0; e < episodes; ++e) {
      int s = start;
      double g = 0.0, discount = 1.0;
      for (int t = 0; t < horizon; ++t) {
        const int a = draw(std::span<const double>(joint).subspan(s * J, J));
        g += discount * reward.tables[0][s * J + a];
        discount *= game.gamma();
        s = draw(game.Row(s, a));
      }
      sum += g;
      sum_sq += g * g;
    }
    const double mean = sum / episodes;
    const double se = std::sqrt((sum_sq / episodes - mean * mean) / episodes);
    CHECK(std::abs(mean - vb.v[0][start]) <= 3.0 * se + 1e-10);
  }
}

TEST_CASE("Bellman consistency and value range") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    MarkovGame game = RandomGame(rng, 5, {3, 2}, 0.9);
    JointReward reward = RandomReward(game, rng);
    ValueBundle vb = PolicyEvaluation(game, reward, RandomPolicy(game, rng));
    CHECK(vb.residual <= 1e-10);
    for (const Table& v : vb.v) {
      for (double x : v) {
        CHECK(x >= -1e-12);
        CHECK(x <= 10.0 + 1e-9);
      }
    }
  }
}

TEST_CASE("expected advantage examples") {
  MarkovGame game = SingleState({2, 2}, 0.5);
  JointPolicy dd = DeterministicPolicy(game, {{1}, {1}});
  ValueBundle vb = PolicyEvaluation(game, PrisonersDilemma(), dd);
  // Q(C,D) - Q(D,D) = (0 + 0.5 * 0.4) - (0.2 + 0.5 * 0.4).
  CHECK(ExpectedAdvantage(game, dd, vb, 0, 0, 0) ==
        doctest::Approx(-0.2).epsilon(1e-12));
  CHECK(ExpectedAdvantage(game, dd, vb, 0, 0, 1) ==
        doctest::Approx(0.0).epsilon(1e-12));

  MarkovGame mp = SingleState({2, 2}, 0.9);
  JointPolicy uni = UniformPolicy(mp);
  ValueBundle vm = PolicyEvaluation(mp, MatchingPennies(), uni);
  for (int i = 0; i < 2; ++i) {
    for (int a = 0; a < 2; ++a) {
      CHECK(std::abs(ExpectedAdvantage(mp, uni, vm, i, 0, a)) < 1e-12);
    }
  }

  std::mt19937_64 rng(5);
  MarkovGame rg = RandomGame(rng, 3, {2, 3}, 0.7);
  JointPolicy pi = RandomPolicy(rg, rng);
  ValueBundle vc = PolicyEvaluation(rg, ConstantReward(rg, 0.5, 1.0), pi);
  for (int s = 0; s < 3; ++s) {
    CHECK(std::abs(ExpectedAdvantage(rg, pi, vc, 1, s, 2)) < 1e-12);
  }

  vb.residual = 1.0;
  CHECK_THROWS_AS(ExpectedAdvantage(game, dd, vb, 0, 0, 0), StaleValuesError);
}

TEST_CASE("occupancy examples") {
  MarkovGame absorbing = SingleState({1}, 0.9);
  Occupancy occ = OccupancyMeasure(absorbing, UniformPolicy(absorbing), 0);
  CHECK(occ.w[0] == doctest::Approx(10.0).epsilon(1e-12));

  // s0 -> s1 -> s1.
  MarkovGame chain(2, {1}, {0.0, 1.0, 0.0, 1.0}, 0.5, {1.0, 0.0});
  Occupancy c = OccupancyMeasure(chain, UniformPolicy(chain), 0);
  CHECK(c.w[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c.w[1] == doctest::Approx(1.0).epsilon(1e-12));

  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    MarkovGame game = RandomGame(rng, 4, {2, 2}, 0.95);
    JointPolicy pi = RandomPolicy(game, rng);
    Occupancy o = OccupancyMeasure(game, pi, game.mu());
    const double total = std::accumulate(o.w.begin(), o.w.end(), 0.0);
    CHECK(std::abs(total - 20.0) <= 1e-9);
    for (double x : o.w) CHECK(x >= 0.0);
  }
}

TEST_CASE("simulation identity") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const int S = std::uniform_int_distribution<int>(1, 5)(rng);
    const int a0 = std::uniform_int_distribution<int>(1, 3)(rng);
    const int a1 = std::uniform_int_distribution<int>(1, 3)(rng);
    MarkovGame game = RandomGame(rng, S, {a0, a1}, 0.8);
    MarkovGame hat = RandomGame(rng, S, {a0, a1}, 0.8);
    JointReward r = RandomReward(game, rng);
    JointReward rh = RandomReward(game, rng);
    JointPolicy pi = RandomPolicy(game, rng);
    for (int agent = 0; agent < 2; ++agent) {
      SimulationSides sides = SimulationDecomposition(game, hat, r, rh, pi, agent);
      for (int s = 0; s < S; ++s) {
        CHECK(std::abs(sides.lhs[s] - sides.rhs[s]) <= 1e-8);
      }
    }
  }
}

TEST_CASE("simulation identity closed forms") {
  std::mt19937_64 rng(17);
  MarkovGame game = RandomGame(rng, 3, {2, 2}, 0.6);
  JointReward r = RandomReward(game, rng, 0.8);
  JointPolicy pi = RandomPolicy(game, rng);
  SimulationSides same = SimulationDecomposition(game, game, r, r, pi, 0);
  for (int s = 0; s < 3; ++s) {
    CHECK(std::abs(same.lhs[s]) < 1e-12);
    CHECK(std::abs(same.rhs[s]) < 1e-12);
  }
  JointReward shifted = r;
  for (Table& t : shifted.tables) {
    for (double& x : t) x += 0.1;
  }
  SimulationSides shift = SimulationDecomposition(game, game, r, shifted, pi, 1);
  for (int s = 0; s < 3; ++s) {
    CHECK(shift.lhs[s] == doctest::Approx(0.1 / 0.4).epsilon(1e-10));
    CHECK(shift.rhs[s] == doctest::Approx(0.1 / 0.4).epsilon(1e-10));
  }
  MarkovGame other = RandomGame(rng, 4, {2, 2}, 0.6);
  CHECK_THROWS_AS(SimulationDecomposition(game, other, r, r, pi, 0),
                  DimensionError);
}

TEST_CASE("serial and parallel kernels agree bit for bit") {
  std::mt19937_64 rng(19);
  MarkovGame game = RandomGame(rng, 30, {4, 4}, 0.9);
  JointReward r = RandomReward(game, rng);
  const Table joint = JointPolicyTable(game, RandomPolicy(game, rng));
  Table v(30);
  for (double& x : v) x = std::uniform_real_distribution<double>(0, 5)(rng);
  using kernels::BellmanBackup;
  using kernels::ExpectNext;
  using kernels::PolicyAverage;
  using kernels::PolicyReward;
  using kernels::PolicyTransition;
  CHECK(PolicyTransition(game, joint, Execution::kSerial) ==
        PolicyTransition(game, joint, Execution::kParallel));
  CHECK(PolicyReward(game, joint, r.tables[0], Execution::kSerial) ==
        PolicyReward(game, joint, r.tables[0], Execution::kParallel));
  CHECK(BellmanBackup(game, r.tables[1], v, Execution::kSerial) ==
        BellmanBackup(game, r.tables[1], v, Execution::kParallel));
  CHECK(ExpectNext(game, v, Execution::kSerial) ==
        ExpectNext(game, v, Execution::kParallel));
  const Table q = BellmanBackup(game, r.tables[1], v);
  CHECK(PolicyAverage(game, joint, q, Execution::kSerial) ==
        PolicyAverage(game, joint, q, Execution::kParallel));
}

}  // namespace
}  // namespace mairl
