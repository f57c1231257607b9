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

#ifndef MAIRL_ERRORS_H_
#define MAIRL_ERRORS_H_

#include <stdexcept>
#include <string>

namespace mairl {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shapes of games, rewards, policies or tables do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A probability row or distribution is not a distribution.
class NotStochasticError : public Error {
 public:
  using Error::Error;
};

// A value left its admissible range (e.g. a reward outside [0, Rmax]).
class OutOfRangeError : public Error {
 public:
  using Error::Error;
};

// A reward is not in the feasible set of the given policy.
class NotFeasibleError : public Error {
 public:
  using Error::Error;
};

// A value bundle does not belong to the inputs it is used with.
class StaleValuesError : public Error {
 public:
  using Error::Error;
};

// An optimization problem has no feasible point.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// An iterative procedure hit its budget.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// A precondition stated by an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Malformed configuration or serialized file.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace mairl

#endif  // MAIRL_ERRORS_H_
