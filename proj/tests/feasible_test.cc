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
#include <random>

#include "mairl/dynamics.h"
#include "mairl/equilibrium.h"
#include "mairl/errors.h"
#include "mairl/feasible.h"
#include "test_games.h"

namespace mairl {
namespace {

using testing::MatchingPennies;
using testing::PrisonersDilemma;
using testing::RandomDistribution;
using testing::RandomGame;
using testing::RandomParams;
using testing::RandomPolicy;
using testing::RandomReward;
using testing::SingleState;

int CountMasked(const EventMask& m, int agent) {
  int c = 0;
  for (unsigned char x : m.mask[agent]) c += x;
  return c;
}

TEST_CASE("event mask examples") {
  MarkovGame game = SingleState({2, 2}, 0.5);
  EventMask mixed = ComputeEventMask(game, UniformPolicy(game));
  CHECK(CountMasked(mixed, 0) == 0);
  CHECK(CountMasked(mixed, 1) == 0);

  EventMask det = ComputeEventMask(game, DeterministicPolicy(game, {{0}, {1}}));
  CHECK(CountMasked(det, 0) == 1);
  CHECK(CountMasked(det, 1) == 1);
  CHECK(det(0, 3));  // (1, 1): agent 0 deviates against the played 1
  CHECK(det(1, 0));  // (0, 0): agent 1 deviates against the played 0

  // Agent 1 never plays action 2: nothing containing it is masked for agent 0.
  MarkovGame g3 = SingleState({2, 3}, 0.5);
  JointPolicy pi = UniformPolicy(g3);
  pi.per_agent[0] = {0.0, 1.0};
  pi.per_agent[1] = {0.5, 0.5, 0.0};
  EventMask m = ComputeEventMask(g3, pi);
  for (int a = 0; a < 6; ++a) {
    if (g3.actions().ActionOf(a, 1) == 2) CHECK_FALSE(m(0, a));
  }
}

TEST_CASE("implicit test examples") {
  MarkovGame game = SingleState({2, 2}, 0.5);
  CHECK(CheckImplicit(game, ConstantReward(game, 0.3, 1.0),
                      DeterministicPolicy(game, {{0}, {1}}), 1e-9)
            .feasible);
  CHECK(CheckImplicit(game, PrisonersDilemma(),
                      DeterministicPolicy(game, {{1}, {1}}), 1e-9)
            .feasible);
  ImplicitReport cc = CheckImplicit(game, PrisonersDilemma(),
                                    DeterministicPolicy(game, {{0}, {0}}), 1e-9);
  CHECK_FALSE(cc.feasible);
  REQUIRE(cc.violations.size() == 2);
  CHECK(cc.violations[0].action == 1);
  CHECK(cc.violations[0].advantage == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(CheckImplicit(game, MatchingPennies(), UniformPolicy(game), 1e-9).feasible);
}

TEST_CASE("construct reward examples") {
  std::mt19937_64 rng(3);
  MarkovGame game = RandomGame(rng, 3, {2, 2}, 0.9);
  JointPolicy pi = RandomPolicy(game, rng);
  FeasibleParams p;
  p.advantage.assign(2, Table(game.NumPairs(), 0.0));
  p.value.assign(2, Table(3, 1.0));
  JointReward r = ConstructReward(game, pi, p, {1.0, 1.0});
  for (const Table& t : r.tables) {
    for (double x : t) CHECK(x == doctest::Approx(0.1).epsilon(1e-12));
  }
  CHECK(NashGap(game, r, RandomPolicy(game, rng)).gap < 1e-10);
  p.value.assign(2, Table(3, 0.0));
  r = ConstructReward(game, pi, p, {1.0, 1.0});
  for (const Table& t : r.tables) {
    for (double x : t) CHECK(x == 0.0);
  }

  // One state, Nash (0, 0), gamma 0.5, V = 0.4: masked entries get 0.2 - A.
  MarkovGame one = SingleState({2, 2}, 0.5);
  JointPolicy nash = DeterministicPolicy(one, {{0}, {0}});
  FeasibleParams q;
  q.value.assign(2, Table{0.4});
  q.advantage.assign(2, Table(4, 0.4));
  CHECK_THROWS_AS(ConstructReward(one, nash, q, {1.0, 1.0}), OutOfRangeError);
  q.advantage.assign(2, Table(4, 0.2));
  JointReward rn = ConstructReward(one, nash, q, {1.0, 1.0});
  CHECK(rn.tables[0][0] == doctest::Approx(0.2));  // Nash joint action
  CHECK(rn.tables[0][1] == doctest::Approx(0.2));  // agent 1 deviates only
  CHECK(std::abs(rn.tables[0][2]) < 1e-15);        // masked for agent 0
  CHECK(std::abs(rn.tables[1][1]) < 1e-15);        // masked for agent 1
  CHECK(NashGap(one, rn, nash).gap < 1e-12);

  q.advantage[0][2] = -0.1;
  CHECK_THROWS_AS(ConstructReward(one, nash, q, {1.0, 1.0}), OutOfRangeError);
}

TEST_CASE("decompose reward examples") {
  std::mt19937_64 rng(5);
  MarkovGame game = RandomGame(rng, 3, {2, 3}, 0.7);
  JointPolicy pi = RandomPolicy(game, rng);
  FeasibleParams c = DecomposeReward(game, pi, ConstantReward(game, 0.6, 1.0));
  for (const Table& v : c.value) {
    for (double x : v) CHECK(x == doctest::Approx(2.0).epsilon(1e-12));
  }
  for (const Table& a : c.advantage) {
    for (double x : a) CHECK(std::abs(x) < 1e-12);
  }

  MarkovGame pd = SingleState({2, 2}, 0.5);
  JointPolicy dd = DeterministicPolicy(pd, {{1}, {1}});
  FeasibleParams d = DecomposeReward(pd, dd, PrisonersDilemma());
  // V - Q(C,D) = 0.4 - (0 + 0.5 * 0.4).
  CHECK(d.advantage[0][1] == doctest::Approx(0.2).epsilon(1e-12));
  CHECK_THROWS_AS(DecomposeReward(pd, DeterministicPolicy(pd, {{0}, {0}}),
                                  PrisonersDilemma()),
                  NotFeasibleError);
}

TEST_CASE("construct and decompose round trip") {
  std::mt19937_64 rng(7);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int S = std::uniform_int_distribution<int>(1, 4)(rng);
    const int n = std::uniform_int_distribution<int>(2, 3)(rng);
    std::vector<int> counts;
    for (int i = 0; i < n; ++i) counts.push_back(std::uniform_int_distribution<int>(1, 3)(rng));
    MarkovGame game = RandomGame(rng, S, counts, 0.8);
    JointPolicy pi = RandomPolicy(game, rng);
    JointReward r = ConstructReward(game, pi, RandomParams(game, rng),
                                    std::vector<double>(n, 1.0));
    FeasibleParams back = DecomposeReward(game, pi, r);
    JointReward again = ConstructReward(game, pi, back, r.rmax);
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < game.NumPairs(); ++k) {
        worst = std::max(worst, std::abs(again.tables[i][k] - r.tables[i][k]));
      }
    }
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("implicit, matrix and gap tests agree") {
  std::mt19937_64 rng(11);
  const double tol = 1e-6;
  int feasible_count = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int S = std::uniform_int_distribution<int>(1, 4)(rng);
    std::vector<int> counts = {std::uniform_int_distribution<int>(1, 3)(rng),
                               std::uniform_int_distribution<int>(1, 3)(rng)};
    MarkovGame game = RandomGame(rng, S, counts, 0.8);
    JointPolicy pi = RandomPolicy(game, rng);
    JointReward r = trial % 2 == 0
                        ? ConstructReward(game, pi, RandomParams(game, rng), {1.0, 1.0})
                        : RandomReward(game, rng);
    const bool implicit = CheckImplicit(game, r, pi, tol).feasible;
    const bool matrix = MatrixNeCheck(game, r, pi, tol).is_equilibrium;
    const bool gap = NashGap(game, r, pi).gap <= tol / (1.0 - game.gamma());
    CHECK(implicit == matrix);
    CHECK(implicit == gap);
    feasible_count += implicit;
  }
  CHECK(feasible_count >= 50);
}

TEST_CASE("error propagation examples") {
  std::mt19937_64 rng(13);
  MarkovGame game = RandomGame(rng, 3, {2, 2}, 0.8);
  JointPolicy pi = RandomPolicy(game, rng);
  EventMask mask = ComputeEventMask(game, pi);
  FeasibleParams params = RandomParams(game, rng);
  for (const Table& b : ErrorPropagationBound(params, mask, mask, game, game)) {
    for (double x : b) CHECK(x == 0.0);
  }
  MarkovGame other = RandomGame(rng, 3, {2, 2}, 0.8);
  params.value.assign(2, Table(3, 1.5));
  std::vector<Table> b = ErrorPropagationBound(params, mask, mask, game, other);
  for (int s = 0; s < 3; ++s) {
    for (int a = 0; a < 4; ++a) {
      double l1 = 0.0;
      for (int t = 0; t < 3; ++t) l1 += std::abs(game.P(s, a, t) - other.P(s, a, t));
      CHECK(b[0][s * 4 + a] == doctest::Approx(0.8 * 1.5 * l1).epsilon(1e-12));
    }
  }
}

TEST_CASE("error propagation witness stays within the bound") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const int S = std::uniform_int_distribution<int>(1, 4)(rng);
    MarkovGame game = RandomGame(rng, S, {2, 3}, 0.8);
    // Perturbed model and policy estimate.
    Table p = game.transitions();
    const int rows = game.NumPairs();
    for (int k = 0; k < rows; ++k) {
      Table noise = RandomDistribution(S, rng);
      for (int t = 0; t < S; ++t) {
        p[k * S + t] = 0.8 * p[k * S + t] + 0.2 * noise[t];
      }
    }
    MarkovGame hat = game.WithTransitions(p);
    JointPolicy pi = RandomPolicy(game, rng);
    JointPolicy pi_hat = RandomPolicy(game, rng);
    FeasibleParams params = RandomParams(game, rng);
    EventMask e = ComputeEventMask(game, pi);
    EventMask e_hat = ComputeEventMask(game, pi_hat);
    std::vector<Table> r = ExplicitReward(game, e, params);
    std::vector<Table> r_hat = ExplicitReward(hat, e_hat, params);
    std::vector<Table> bound = ErrorPropagationBound(params, e, e_hat, game, hat);
    for (int i = 0; i < 2; ++i) {
      for (int k = 0; k < rows; ++k) {
        CHECK(std::abs(r[i][k] - r_hat[i][k]) <= bound[i][k] + 1e-12);
      }
    }
  }
}

TEST_CASE("Nash gap bound examples") {
  std::mt19937_64 rng(19);
  MarkovGame game = RandomGame(rng, 3, {2, 2}, 0.8);
  JointReward r = RandomReward(game, rng, 0.8);
  JointPolicy nash = NashValueIteration(game, r).policy;
  const Table dev = DeterministicPolicy(game, {{0, 1, 0}, {0, 0, 0}}).per_agent[0];
  NashGapBoundResult same = NashGapBound(game, game, r, r, nash, 0, dev);
  CHECK(same.max_bound >= 0.0);
  CHECK(same.max_direct <= 1e-9);

  JointReward shifted = r;
  for (Table& t : shifted.tables) {
    for (double& x : t) x += 0.1;
  }
  BestResponseResult br = BestResponse(game, r, nash, 1);
  Table br_table(3 * 2, 0.0);
  for (int s = 0; s < 3; ++s) br_table[s * 2 + br.policy[s]] = 1.0;
  NashGapBoundResult shift = NashGapBound(game, game, r, shifted, nash, 1, br_table);
  for (int s = 0; s < 3; ++s) {
    CHECK(shift.bound[s] == doctest::Approx(2.0 * 0.1 / 0.2).epsilon(1e-6));
    CHECK(std::abs(shift.direct[s]) <= 1e-6);
  }

  CHECK_THROWS_AS(NashGapBound(game, game, r, r, UniformPolicy(game), 0, dev),
                  PreconditionError);
}

TEST_CASE("Nash gap bound dominates the true deviation gain") {
  std::mt19937_64 rng(23);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    MarkovGame game = RandomGame(rng, 3, {2, 2}, 0.8);
    JointReward r = RandomReward(game, rng, 0.8);
    Table p = game.transitions();
    for (int k = 0; k < game.NumPairs(); ++k) {
      Table noise = RandomDistribution(3, rng);
      for (int t = 0; t < 3; ++t) p[k * 3 + t] = 0.9 * p[k * 3 + t] + 0.1 * noise[t];
    }
    MarkovGame hat = game.WithTransitions(p);
    JointReward r_hat = r;
    std::uniform_real_distribution<double> jitter(-0.05, 0.05);
    for (Table& t : r_hat.tables) {
      for (double& x : t) x = std::clamp(x + jitter(rng), 0.0, 1.0);
    }
    NashQResult eq = NashValueIteration(hat, r_hat);
    if (!eq.converged) continue;
    for (int agent = 0; agent < 2; ++agent) {
      BestResponseResult br = BestResponse(game, r, eq.policy, agent);
      Table dev(6, 0.0);
      for (int s = 0; s < 3; ++s) dev[s * 2 + br.policy[s]] = 1.0;
      NashGapBoundResult res = NashGapBound(game, hat, r, r_hat, eq.policy, agent, dev);
      for (int s = 0; s < 3; ++s) CHECK(res.bound[s] >= res.direct[s] - 1e-9);
      ++checked;
    }
  }
  CHECK(checked >= 150);
}

}  // namespace
}  // namespace mairl
