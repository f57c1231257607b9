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

#include "mairl/experiment_config.h"

#include <algorithm>

#include "mairl/errors.h"
#include "mairl/text_format.h"
#include "parse_util.h"

namespace mairl {
namespace {

using internal::ParseList;
using internal::ParseNumber;
using internal::Split;
using internal::Trim;

bool ParseBool(std::string_view value, int line) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("line " + std::to_string(line) + ": expected a boolean");
}

Cell ParseCell(std::string_view value, int line) {
  const std::vector<int> xy = ParseList<int>(value, line);
  if (xy.size() != 2) {
    throw ConfigError("line " + std::to_string(line) + ": expected 'x y'");
  }
  return {xy[0], xy[1]};
}

void ApplyExperimentKey(ExperimentConfig& c, const std::string& key,
                        std::string_view value, int line) {
  if (key == "seeds") {
    c.seeds = ParseList<std::uint64_t>(value, line);
  } else if (key == "epsilon") {
    c.epsilon = ParseNumber<double>(value, line);
  } else if (key == "delta") {
    c.delta = ParseNumber<double>(value, line);
  } else if (key == "pi_min") {
    c.pi_min = ParseNumber<double>(value, line);
  } else if (key == "k_max") {
    c.k_max = ParseNumber<long>(value, line);
  } else if (key == "checkpoints") {
    c.checkpoints = ParseList<long>(value, line);
  } else if (key == "variants") {
    c.variants.clear();
    for (std::string_view name : Split(value)) c.variants.push_back(ParseVariant(name));
  } else if (key == "output_dir") {
    c.output_dir = std::string(value);
  } else if (key == "selection") {
    if (value == "distance") {
      c.selection = SelectionMode::kDistance;
    } else if (value == "max-margin") {
      c.selection = SelectionMode::kMaxMargin;
    } else {
      throw ConfigError("line " + std::to_string(line) + ": unknown selection");
    }
  } else if (key == "margin_slack") {
    c.margin_slack = ParseNumber<double>(value, line);
  } else if (key == "gap") {
    if (value == "mu-weighted") {
      c.gap_mode = GapMode::kMuWeighted;
    } else if (value == "max-over-states") {
      c.gap_mode = GapMode::kMaxOverStates;
    } else {
      throw ConfigError("line " + std::to_string(line) + ": unknown gap mode");
    }
  } else if (key == "nvi_max_iters") {
    c.nvi_max_iters = ParseNumber<int>(value, line);
  } else if (key == "nvi_tol") {
    c.nvi_tol = ParseNumber<double>(value, line);
  } else if (key == "stop_at_tau") {
    c.stop_at_tau = ParseBool(value, line);
  } else {
    throw ConfigError("line " + std::to_string(line) + ": unknown key '" + key +
                      "' in [experiment]");
  }
}

void ApplyGridKey(GridGameSpec& g, const std::string& key,
                  std::string_view value, int line) {
  if (key == "width") {
    g.width = ParseNumber<int>(value, line);
  } else if (key == "height") {
    g.height = ParseNumber<int>(value, line);
  } else if (key == "start0") {
    g.start[0] = ParseCell(value, line);
  } else if (key == "start1") {
    g.start[1] = ParseCell(value, line);
  } else if (key == "goal0") {
    g.goal[0] = ParseCell(value, line);
  } else if (key == "goal1") {
    g.goal[1] = ParseCell(value, line);
  } else if (key == "up_success_prob") {
    g.up_success_prob = ParseNumber<double>(value, line);
  } else if (key == "goal_reward") {
    g.goal_reward = ParseNumber<double>(value, line);
  } else if (key == "bounce") {
    g.bounce_on_collision = ParseBool(value, line);
  } else if (key == "gamma") {
    g.gamma = ParseNumber<double>(value, line);
  } else if (key == "rmax") {
    g.rmax = ParseNumber<double>(value, line);
  } else {
    throw ConfigError("line " + std::to_string(line) + ": unknown key '" + key +
                      "' in [grid]");
  }
}

std::string Join(const auto& values) {
  std::string out;
  for (const auto& v : values) {
    if (!out.empty()) out += ' ';
    out += std::to_string(v);
  }
  return out;
}

}  // namespace

std::string_view SelectionName(SelectionMode mode) {
  return mode == SelectionMode::kDistance ? "distance" : "max-margin";
}

std::string_view GapModeName(GapMode mode) {
  return mode == GapMode::kMuWeighted ? "mu-weighted" : "max-over-states";
}

void ExperimentConfig::Validate() const {
  auto fail = [](const std::string& what) { throw ConfigError(what); };
  if (seeds.empty()) fail("seeds must not be empty");
  if (!(epsilon > 0.0)) fail("epsilon must be positive");
  if (!(delta > 0.0 && delta < 1.0)) fail("delta must lie in (0, 1)");
  if (!(pi_min > 0.0 && pi_min <= 1.0)) fail("pi_min must lie in (0, 1]");
  if (k_max < 1) fail("k_max must be at least 1");
  for (long k : checkpoints) {
    if (k < 1) fail("checkpoints must be at least 1");
  }
  if (variants.empty()) fail("variants must not be empty");
  if (output_dir.empty()) fail("output_dir must not be empty");
  if (!(margin_slack >= 0.0)) fail("margin_slack must be nonnegative");
  if (nvi_max_iters < 1 || !(nvi_tol > 0.0)) {
    fail("nvi_max_iters and nvi_tol must be positive");
  }
  try {
    grid.Validate();
  } catch (const Error& e) {
    fail(std::string("[grid] ") + e.what());
  }
}

std::vector<long> ExperimentConfig::EvaluationRounds() const {
  std::vector<long> out;
  for (long k : checkpoints) {
    if (k <= k_max) out.push_back(k);
  }
  out.push_back(k_max);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ExperimentConfig ParseConfig(std::string_view text) {
  ExperimentConfig config;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = Trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("line " + std::to_string(line_no) +
                          ": unterminated section header");
      }
      section = std::string(line.substr(1, line.size() - 2));
      if (section != "experiment" && section != "grid") {
        throw ConfigError("unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) +
                        ": expected key = value");
    }
    if (section.empty()) {
      throw ConfigError("line " + std::to_string(line_no) +
                        ": key outside a section");
    }
    const std::string key(Trim(line.substr(0, eq)));
    const std::string_view value = Trim(line.substr(eq + 1));
    if (section == "experiment") {
      ApplyExperimentKey(config, key, value, line_no);
    } else {
      ApplyGridKey(config.grid, key, value, line_no);
    }
  }
  config.Validate();
  return config;
}

ExperimentConfig LoadConfig(const std::string& path) {
  return ParseConfig(ReadTextFile(path));
}

std::string ConfigText(const ExperimentConfig& c) {
  std::string out = "[experiment]\n";
  out += "seeds = " + Join(c.seeds) + "\n";
  out += "epsilon = " + FormatDouble(c.epsilon) + "\n";
  out += "delta = " + FormatDouble(c.delta) + "\n";
  out += "pi_min = " + FormatDouble(c.pi_min) + "\n";
  out += "k_max = " + std::to_string(c.k_max) + "\n";
  if (!c.checkpoints.empty()) out += "checkpoints = " + Join(c.checkpoints) + "\n";
  out += "variants =";
  for (GridVariant v : c.variants) out += " " + std::string(VariantName(v));
  out += "\noutput_dir = " + c.output_dir + "\n";
  out += "selection = " + std::string(SelectionName(c.selection)) + "\n";
  out += "margin_slack = " + FormatDouble(c.margin_slack) + "\n";
  out += "gap = " + std::string(GapModeName(c.gap_mode)) + "\n";
  out += "nvi_max_iters = " + std::to_string(c.nvi_max_iters) + "\n";
  out += "nvi_tol = " + FormatDouble(c.nvi_tol) + "\n";
  out += std::string("stop_at_tau = ") + (c.stop_at_tau ? "true" : "false") + "\n";
  const GridGameSpec& g = c.grid;
  out += "\n[grid]\n";
  out += "width = " + std::to_string(g.width) + "\n";
  out += "height = " + std::to_string(g.height) + "\n";
  for (int i = 0; i < 2; ++i) {
    out += "start" + std::to_string(i) + " = " + std::to_string(g.start[i].x) +
           " " + std::to_string(g.start[i].y) + "\n";
  }
  for (int i = 0; i < 2; ++i) {
    out += "goal" + std::to_string(i) + " = " + std::to_string(g.goal[i].x) +
           " " + std::to_string(g.goal[i].y) + "\n";
  }
  out += "up_success_prob = " + FormatDouble(g.up_success_prob) + "\n";
  out += "goal_reward = " + FormatDouble(g.goal_reward) + "\n";
  out += std::string("bounce = ") + (g.bounce_on_collision ? "true" : "false") + "\n";
  out += "gamma = " + FormatDouble(g.gamma) + "\n";
  out += "rmax = " + FormatDouble(g.rmax) + "\n";
  return out;
}

}  // namespace mairl
