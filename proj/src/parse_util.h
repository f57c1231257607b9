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

// Tokenizing helpers shared by the text readers. Internal to the library.

#ifndef MAIRL_SRC_PARSE_UTIL_H_
#define MAIRL_SRC_PARSE_UTIL_H_

#include <charconv>
#include <string>
#include <string_view>
#include <vector>

#include "mairl/errors.h"

namespace mairl::internal {

inline std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> Split(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t k = 0;
  while (k < s.size()) {
    while (k < s.size() && (s[k] == ' ' || s[k] == '\t')) ++k;
    std::size_t end = k;
    while (end < s.size() && s[end] != ' ' && s[end] != '\t') ++end;
    if (end > k) out.push_back(s.substr(k, end - k));
    k = end;
  }
  return out;
}

// Whole-token numeric parse; throws ConfigError naming the line.
template <typename T>
T ParseNumber(std::string_view token, int line) {
  T value{};
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ConfigError("line " + std::to_string(line) + ": bad number '" +
                      std::string(token) + "'");
  }
  return value;
}

template <typename T>
std::vector<T> ParseList(std::string_view s, int line) {
  std::vector<T> out;
  for (std::string_view tok : Split(s)) out.push_back(ParseNumber<T>(tok, line));
  return out;
}

}  // namespace mairl::internal

#endif  // MAIRL_SRC_PARSE_UTIL_H_
