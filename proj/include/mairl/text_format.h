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

// Plain-text serialization of games, rewards and policies.
//
//   [game]
//   n = 2
//   S = 3
//   gamma = 0.90000000000000002
//   action_counts = 2 2
//   mu = 1 0 0
//   [transitions]
//   0 0 : p(0) p(1) p(2)        one line per (s, joint action)
//   [reward]
//   rmax = 1 1
//   0 0 : R(0,0) ... R(0,J-1)   one line per (agent, s)
//   [policy]
//   0 0 : pi(0|0) ...           one line per (agent, s)
//   [provenance]
//   key = value
//
// Numbers are written with 17 significant digits, which round-trips every
// double exactly. Lines starting with '#' are comments.

#ifndef MAIRL_TEXT_FORMAT_H_
#define MAIRL_TEXT_FORMAT_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mairl/markov_game.h"

namespace mairl {

struct GameShape {
  int num_states = 0;
  std::vector<int> action_counts;
  double gamma = 0.0;
  Table mu;
};

struct TextDocument {
  GameShape shape;
  std::optional<MarkovGame> game;  // present when [transitions] is
  std::optional<JointReward> reward;
  std::optional<JointPolicy> policy;
  std::map<std::string, std::string> provenance;
};

GameShape ShapeOf(const MarkovGame& game);

// Any of the optional parts may be null. Provenance keys are written in
// sorted order.
std::string WriteText(const GameShape& shape, const MarkovGame* game,
                      const JointReward* reward, const JointPolicy* policy,
                      const std::map<std::string, std::string>& provenance = {});

// Throws ConfigError on malformed input and the game's own validation errors
// on inconsistent content.
TextDocument ParseText(std::string_view text);

// File helpers; throw ConfigError when the file cannot be opened.
void WriteTextFile(const std::string& path, const std::string& contents);
std::string ReadTextFile(const std::string& path);

// "%.17g" formatting.
std::string FormatDouble(double x);

}  // namespace mairl

#endif  // MAIRL_TEXT_FORMAT_H_
