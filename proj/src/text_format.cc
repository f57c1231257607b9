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

#include "mairl/text_format.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mairl/errors.h"
#include "parse_util.h"

namespace mairl {
namespace {

using internal::Split;
using internal::Trim;

Table ParseDoubles(std::string_view s, int line) {
  return internal::ParseList<double>(s, line);
}

int ParseInt(std::string_view token, int line) {
  return internal::ParseNumber<int>(token, line);
}

double ParseDouble(std::string_view token, int line) {
  return internal::ParseNumber<double>(token, line);
}

void AppendRow(std::string& out, std::string_view prefix,
               const double* values, int count) {
  out += prefix;
  out += ':';
  for (int k = 0; k < count; ++k) {
    out += ' ';
    out += FormatDouble(values[k]);
  }
  out += '\n';
}

// Keyed rows "i s : values" of a per-agent table.
struct RowTable {
  std::vector<std::vector<Table>> rows;  // [agent][state]
};

}  // namespace

std::string FormatDouble(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

GameShape ShapeOf(const MarkovGame& game) {
  return {game.num_states(), game.action_counts(), game.gamma(), game.mu()};
}

std::string WriteText(const GameShape& shape, const MarkovGame* game,
                      const JointReward* reward, const JointPolicy* policy,
                      const std::map<std::string, std::string>& provenance) {
  const int S = shape.num_states;
  const int n = static_cast<int>(shape.action_counts.size());
  int J = 1;
  for (int c : shape.action_counts) J *= c;

  std::string out = "[game]\n";
  out += "n = " + std::to_string(n) + "\n";
  out += "S = " + std::to_string(S) + "\n";
  out += "gamma = " + FormatDouble(shape.gamma) + "\n";
  out += "action_counts =";
  for (int c : shape.action_counts) out += " " + std::to_string(c);
  out += "\nmu =";
  for (double m : shape.mu) out += " " + FormatDouble(m);
  out += "\n";

  if (game != nullptr) {
    out += "[transitions]\n";
    for (int s = 0; s < S; ++s) {
      for (int a = 0; a < J; ++a) {
        AppendRow(out, std::to_string(s) + " " + std::to_string(a) + " ",
                  game->transitions().data() + game->RowOffset(s, a), S);
      }
    }
  }
  if (reward != nullptr) {
    out += "[reward]\nrmax =";
    for (double r : reward->rmax) out += " " + FormatDouble(r);
    out += "\n";
    for (int i = 0; i < reward->num_agents(); ++i) {
      for (int s = 0; s < S; ++s) {
        AppendRow(out, std::to_string(i) + " " + std::to_string(s) + " ",
                  reward->tables[i].data() + static_cast<std::size_t>(s) * J, J);
      }
    }
  }
  if (policy != nullptr) {
    out += "[policy]\n";
    for (int i = 0; i < policy->num_agents(); ++i) {
      const int na = shape.action_counts[i];
      for (int s = 0; s < S; ++s) {
        AppendRow(out, std::to_string(i) + " " + std::to_string(s) + " ",
                  policy->per_agent[i].data() + static_cast<std::size_t>(s) * na,
                  na);
      }
    }
  }
  if (!provenance.empty()) {
    out += "[provenance]\n";
    for (const auto& [key, value] : provenance) out += key + " = " + value + "\n";
  }
  return out;
}

TextDocument ParseText(std::string_view text) {
  TextDocument doc;
  std::string section;
  bool have_n = false, have_s = false, have_gamma = false, have_counts = false,
       have_mu = false;
  int n = 0;
  Table transitions;
  std::vector<bool> seen_transition;
  RowTable reward_rows, policy_rows;
  Table rmax;
  bool have_transitions = false, have_reward = false, have_policy = false;

  auto require_shape = [&](int line) {
    if (!(have_n && have_s && have_gamma && have_counts && have_mu)) {
      throw ConfigError("line " + std::to_string(line) +
                        ": [game] must precede other sections");
    }
  };
  auto num_joint = [&] {
    int J = 1;
    for (int c : doc.shape.action_counts) J *= c;
    return J;
  };

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = Trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') {
      if (end == text.size()) break;
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("unterminated section header");
      section = std::string(line.substr(1, line.size() - 2));
      if (section != "game") require_shape(line_no);
      const int S = doc.shape.num_states;
      if (section == "transitions") {
        have_transitions = true;
        transitions.assign(static_cast<std::size_t>(S) * num_joint() * S, 0.0);
        seen_transition.assign(static_cast<std::size_t>(S) * num_joint(), false);
      } else if (section == "reward") {
        have_reward = true;
        reward_rows.rows.assign(n, std::vector<Table>(S));
      } else if (section == "policy") {
        have_policy = true;
        policy_rows.rows.assign(n, std::vector<Table>(S));
      } else if (section != "game" && section != "provenance") {
        throw ConfigError("unknown section [" + section + "]");
      }
      continue;
    }

    const auto eq = line.find('=');
    const auto colon = line.find(':');
    if (section == "game" || section == "provenance" ||
        (section == "reward" && eq != std::string_view::npos &&
         colon == std::string_view::npos)) {
      if (eq == std::string_view::npos) {
        throw ConfigError("line " + std::to_string(line_no) +
                          ": expected key = value");
      }
      const std::string key(Trim(line.substr(0, eq)));
      const std::string_view value = Trim(line.substr(eq + 1));
      if (section == "provenance") {
        doc.provenance[key] = std::string(value);
      } else if (section == "reward") {
        if (key != "rmax") throw ConfigError("unknown reward key " + key);
        rmax = ParseDoubles(value, line_no);
      } else if (key == "n") {
        n = ParseInt(value, line_no);
        have_n = true;
      } else if (key == "S") {
        doc.shape.num_states = ParseInt(value, line_no);
        have_s = true;
      } else if (key == "gamma") {
        doc.shape.gamma = ParseDouble(value, line_no);
        have_gamma = true;
      } else if (key == "action_counts") {
        doc.shape.action_counts.clear();
        for (auto tok : Split(value)) {
          doc.shape.action_counts.push_back(ParseInt(tok, line_no));
        }
        have_counts = true;
      } else if (key == "mu") {
        doc.shape.mu = ParseDoubles(value, line_no);
        have_mu = true;
      } else {
        throw ConfigError("unknown game key " + key);
      }
      continue;
    }

    if (colon == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) +
                        ": expected 'index index : values'");
    }
    const auto keys = Split(line.substr(0, colon));
    if (keys.size() != 2) {
      throw ConfigError("line " + std::to_string(line_no) +
                        ": expected two indices");
    }
    const int first = ParseInt(keys[0], line_no);
    const int second = ParseInt(keys[1], line_no);
    Table values = ParseDoubles(line.substr(colon + 1), line_no);
    const int S = doc.shape.num_states;
    const int J = num_joint();
    auto bad_index = [&] {
      return ConfigError("line " + std::to_string(line_no) +
                         ": index out of range");
    };
    if (section == "transitions") {
      if (first < 0 || first >= S || second < 0 || second >= J) throw bad_index();
      if (static_cast<int>(values.size()) != S) {
        throw ConfigError("line " + std::to_string(line_no) +
                          ": expected S probabilities");
      }
      const std::size_t row = static_cast<std::size_t>(first) * J + second;
      seen_transition[row] = true;
      std::copy(values.begin(), values.end(), transitions.begin() + row * S);
    } else {
      RowTable& target = section == "reward" ? reward_rows : policy_rows;
      if (first < 0 || first >= n || second < 0 || second >= S) throw bad_index();
      const int width = section == "reward" ? J : doc.shape.action_counts[first];
      if (static_cast<int>(values.size()) != width) {
        throw ConfigError("line " + std::to_string(line_no) +
                          ": wrong number of values");
      }
      target.rows[first][second] = std::move(values);
    }
    if (end == text.size()) break;
  }

  require_shape(line_no);
  if (static_cast<int>(doc.shape.action_counts.size()) != n) {
    throw ConfigError("action_counts does not list n agents");
  }
  if (have_transitions) {
    for (bool seen : seen_transition) {
      if (!seen) throw ConfigError("missing transition rows");
    }
    doc.game.emplace(doc.shape.num_states, doc.shape.action_counts,
                     std::move(transitions), doc.shape.gamma, doc.shape.mu);
  }
  auto flatten = [&](const RowTable& rows) {
    std::vector<Table> tables(n);
    for (int i = 0; i < n; ++i) {
      for (int s = 0; s < doc.shape.num_states; ++s) {
        const Table& row = rows.rows[i][s];
        if (row.empty()) throw ConfigError("missing rows in a table section");
        tables[i].insert(tables[i].end(), row.begin(), row.end());
      }
    }
    return tables;
  };
  if (have_reward) {
    JointReward reward;
    reward.tables = flatten(reward_rows);
    reward.rmax = rmax;
    if (static_cast<int>(reward.rmax.size()) != n) {
      throw ConfigError("[reward] needs rmax for every agent");
    }
    doc.reward = std::move(reward);
  }
  if (have_policy) {
    JointPolicy policy;
    policy.per_agent = flatten(policy_rows);
    doc.policy = std::move(policy);
  }
  return doc;
}

void WriteTextFile(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open " + path + " for writing");
  out << contents;
  if (!out) throw ConfigError("failed writing " + path);
}

std::string ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace mairl
