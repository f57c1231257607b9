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

// Counter-based random numbers: every draw is a pure function of
// (seed, stream, counter), so parallel sampling is reproducible regardless of
// thread scheduling.

#ifndef MAIRL_RNG_H_
#define MAIRL_RNG_H_

#include <cstdint>
#include <span>

namespace mairl {

inline std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t CounterHash(std::uint64_t seed, std::uint64_t stream,
                                 std::uint64_t counter) {
  return SplitMix64(SplitMix64(SplitMix64(seed) ^ stream) ^ counter);
}

// Uniform in [0, 1) with 53 random bits.
inline double CounterUniform(std::uint64_t seed, std::uint64_t stream,
                             std::uint64_t counter) {
  return static_cast<double>(CounterHash(seed, stream, counter) >> 11) *
         0x1.0p-53;
}

// Inverse-CDF draw from a distribution; never returns a zero-probability
// index.
inline int DrawIndex(std::span<const double> probs, double u) {
  double acc = 0.0;
  int last_positive = 0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    if (probs[k] <= 0.0) continue;
    acc += probs[k];
    last_positive = static_cast<int>(k);
    if (u < acc) return last_positive;
  }
  return last_positive;
}

}  // namespace mairl

#endif  // MAIRL_RNG_H_
