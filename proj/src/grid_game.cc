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

#include "mairl/grid_game.h"

#include <cstdlib>
#include <string>
#include <vector>

#include "mairl/errors.h"

namespace mairl {
namespace {

struct Outcome {
  Cell cell;
  double prob;
};

constexpr std::array<std::string_view, 4> kVariantNames = {
    "deterministic", "stochastic-up", "obstacle-both", "obstacle-one"};

}  // namespace

std::string_view VariantName(GridVariant variant) {
  return kVariantNames[static_cast<int>(variant)];
}

GridVariant ParseVariant(std::string_view name) {
  for (std::size_t k = 0; k < kVariantNames.size(); ++k) {
    if (kVariantNames[k] == name) return static_cast<GridVariant>(k);
  }
  throw ConfigError("unknown grid variant '" + std::string(name) + "'");
}

void GridGameSpec::Validate() const {
  if (width < 1 || height < 1 || width * height < 2) {
    throw OutOfRangeError("grid needs at least two cells");
  }
  auto inside = [&](Cell c) {
    return c.x >= 0 && c.x < width && c.y >= 0 && c.y < height;
  };
  for (int i = 0; i < 2; ++i) {
    if (!inside(start[i]) || !inside(goal[i])) {
      throw OutOfRangeError("start or goal cell off the grid");
    }
  }
  if (start[0] == start[1]) throw OutOfRangeError("agents share a start cell");
  if (goal[0] == goal[1]) throw OutOfRangeError("agents share a goal cell");
  if (!(up_success_prob >= 0.0 && up_success_prob <= 1.0)) {
    throw OutOfRangeError("up_success_prob must lie in [0, 1]");
  }
  if (!(rmax > 0.0) || !(goal_reward >= 0.0 && goal_reward <= rmax)) {
    throw OutOfRangeError("goal_reward must lie in [0, rmax] with rmax > 0");
  }
  if (!(gamma >= 0.0 && gamma < 1.0)) {
    throw OutOfRangeError("gamma must lie in [0, 1)");
  }
}

GridWorld::GridWorld(GridGameSpec spec) : spec_(std::move(spec)) {
  spec_.Validate();
}

int GridWorld::StateIndex(Cell agent0, Cell agent1) const {
  const int c0 = CellIndex(agent0);
  const int c1 = CellIndex(agent1);
  const int cells = num_cells();
  if (c0 < 0 || c0 >= cells || c1 < 0 || c1 >= cells || c0 == c1) {
    throw OutOfRangeError("invalid agent positions");
  }
  return c0 * (cells - 1) + (c1 < c0 ? c1 : c1 - 1);
}

std::pair<Cell, Cell> GridWorld::Positions(int state) const {
  const int cells = num_cells();
  const int c0 = state / (cells - 1);
  int c1 = state % (cells - 1);
  if (c1 >= c0) ++c1;
  return {CellAt(c0), CellAt(c1)};
}

bool GridWorld::Wall(Cell from, Cell to) const {
  const bool walled = spec_.variant == GridVariant::kObstacleBoth ||
                      spec_.variant == GridVariant::kObstacleOne;
  if (!walled || from.x != to.x || std::abs(from.y - to.y) != 1) return false;
  const Cell lower = from.y < to.y ? from : to;
  for (int i = 0; i < 2; ++i) {
    if (spec_.variant == GridVariant::kObstacleOne && i == 1) break;
    if (lower == spec_.start[i]) return true;
  }
  return false;
}

std::pair<MarkovGame, JointReward> GridWorld::Build() const {
  const int S = num_states();
  const int J = kNumGridActions * kNumGridActions;
  const double q = spec_.up_success_prob;
  Table transitions(static_cast<std::size_t>(S) * J * S, 0.0);
  JointReward reward;
  reward.rmax = {spec_.rmax, spec_.rmax};
  reward.tables.assign(2, Table(static_cast<std::size_t>(S) * J, 0.0));

  auto moves = [&](Cell at, int agent, int action) {
    std::vector<Outcome> out;
    if (at == spec_.goal[agent]) return std::vector<Outcome>{{at, 1.0}};
    Cell to = at;
    switch (action) {
      case kUp: ++to.y; break;
      case kDown: --to.y; break;
      case kLeft: --to.x; break;
      default: ++to.x; break;
    }
    if (to.x < 0 || to.x >= spec_.width || to.y < 0 || to.y >= spec_.height ||
        Wall(at, to)) {
      return std::vector<Outcome>{{at, 1.0}};
    }
    const bool slippery = spec_.variant == GridVariant::kStochasticUp &&
                          action == kUp &&
                          (at == spec_.start[0] || at == spec_.start[1]);
    if (slippery && q < 1.0) {
      if (q > 0.0) out.push_back({to, q});
      out.push_back({at, 1.0 - q});
      return out;
    }
    return std::vector<Outcome>{{to, 1.0}};
  };

  for (int s = 0; s < S; ++s) {
    const auto [p0, p1] = Positions(s);
    for (int a0 = 0; a0 < kNumGridActions; ++a0) {
      for (int a1 = 0; a1 < kNumGridActions; ++a1) {
        const int a = a0 * kNumGridActions + a1;
        const std::size_t row = (static_cast<std::size_t>(s) * J + a) * S;
        for (const Outcome& o0 : moves(p0, 0, a0)) {
          for (const Outcome& o1 : moves(p1, 1, a1)) {
            Cell n0 = o0.cell;
            Cell n1 = o1.cell;
            if (n0 == p1) n0 = p0;
            if (n1 == p0) n1 = p1;
            if (n0 == n1) {
              if (spec_.bounce_on_collision) n0 = p0;
              n1 = p1;
            }
            const double prob = o0.prob * o1.prob;
            transitions[row + StateIndex(n0, n1)] += prob;
            if (n0 == spec_.goal[0] && !(p0 == spec_.goal[0])) {
              reward.tables[0][s * J + a] += prob * spec_.goal_reward;
            }
            if (n1 == spec_.goal[1] && !(p1 == spec_.goal[1])) {
              reward.tables[1][s * J + a] += prob * spec_.goal_reward;
            }
          }
        }
      }
    }
  }

  Table mu(S, 0.0);
  mu[StateIndex(spec_.start[0], spec_.start[1])] = 1.0;
  MarkovGame game(S, {kNumGridActions, kNumGridActions}, std::move(transitions),
                  spec_.gamma, std::move(mu));
  return {std::move(game), std::move(reward)};
}

std::pair<MarkovGame, JointReward> BuildGridGame(const GridGameSpec& spec) {
  return GridWorld(spec).Build();
}

}  // namespace mairl
