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

// Two-agent grid worlds. A state is an ordered pair of distinct cells, so a
// w x h grid has (wh)^2 - wh states. Cells are numbered y * width + x with
// y = 0 the bottom row; "up" increases y.
//
// Movement rules, applied to every outcome of the agents' individual moves:
//   * moves off the grid or through a wall leave the agent in place;
//   * a move into the cell the other agent currently occupies is blocked;
//   * if both agents land on the same cell, both bounce back (agent 0 takes
//     the cell when bouncing is disabled);
//   * an agent on its goal stays there.
// An agent earns goal_reward when it enters its own goal.

#ifndef MAIRL_GRID_GAME_H_
#define MAIRL_GRID_GAME_H_

#include <array>
#include <string>
#include <string_view>
#include <utility>

#include "mairl/markov_game.h"

namespace mairl {

enum class GridVariant { kDeterministic, kStochasticUp, kObstacleBoth, kObstacleOne };

enum GridAction { kUp = 0, kDown = 1, kLeft = 2, kRight = 3 };
inline constexpr int kNumGridActions = 4;

std::string_view VariantName(GridVariant variant);
// Throws ConfigError on an unknown name.
GridVariant ParseVariant(std::string_view name);

struct Cell {
  int x = 0;
  int y = 0;
  bool operator==(const Cell&) const = default;
};

struct GridGameSpec {
  int width = 3;
  int height = 3;
  std::array<Cell, 2> start = {Cell{0, 0}, Cell{2, 0}};
  std::array<Cell, 2> goal = {Cell{2, 2}, Cell{0, 2}};
  GridVariant variant = GridVariant::kDeterministic;
  // Success probability of "up" out of the start cells in kStochasticUp.
  double up_success_prob = 0.5;
  double goal_reward = 1.0;
  // Same-cell landings bounce both agents; when false agent 0 gets the cell
  // and agent 1 stays.
  bool bounce_on_collision = true;
  double gamma = 0.9;
  double rmax = 1.0;

  // Throws OutOfRangeError on cells off the grid, shared goals or starts,
  // or probabilities and rewards out of range.
  void Validate() const;
};

class GridWorld {
 public:
  explicit GridWorld(GridGameSpec spec);

  const GridGameSpec& spec() const { return spec_; }
  int num_cells() const { return spec_.width * spec_.height; }
  int num_states() const { return num_cells() * (num_cells() - 1); }

  int CellIndex(Cell c) const { return c.y * spec_.width + c.x; }
  Cell CellAt(int index) const {
    return {index % spec_.width, index / spec_.width};
  }
  // Throws OutOfRangeError for equal or invalid cells.
  int StateIndex(Cell agent0, Cell agent1) const;
  std::pair<Cell, Cell> Positions(int state) const;

  // True when a wall separates the two cells (adjacent or not).
  bool Wall(Cell from, Cell to) const;

  // Game with the start state as the initial distribution, and the goal
  // reward taken in expectation over next states.
  std::pair<MarkovGame, JointReward> Build() const;

 private:
  GridGameSpec spec_;
};

std::pair<MarkovGame, JointReward> BuildGridGame(const GridGameSpec& spec);

}  // namespace mairl

#endif  // MAIRL_GRID_GAME_H_
