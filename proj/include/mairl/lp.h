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

#ifndef MAIRL_LP_H_
#define MAIRL_LP_H_

#include <limits>
#include <vector>

namespace mairl {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { kLessEqual, kEqual, kGreaterEqual };

struct Constraint {
  std::vector<double> coeffs;
  Sense sense = Sense::kLessEqual;
  double rhs = 0.0;
};

// maximize (or minimize) objective . x subject to rows and lo <= x <= hi.
struct LinearProgram {
  std::vector<double> objective;
  bool maximize = true;
  std::vector<Constraint> constraints;
  std::vector<double> lo;
  std::vector<double> hi;

  int num_vars() const { return static_cast<int>(objective.size()); }

  // Adds a variable with bounds; returns its index and pads existing rows.
  int AddVariable(double lower, double upper, double cost = 0.0);
  void AddConstraint(std::vector<double> coeffs, Sense sense, double rhs);
  // Throws DimensionError / OutOfRangeError when the program is malformed.
  void Validate() const;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> x;
  double objective = 0.0;
  long iterations = 0;
};

struct SimplexOptions {
  double tol = 1e-9;
  long max_iterations = 200000;
};

// Two-phase primal simplex on a dense tableau with implicit variable bounds.
// Entering and leaving variables follow Bland's smallest-index rule, so the
// method terminates on degenerate programs.
LpSolution SolveLinearProgram(const LinearProgram& lp,
                              const SimplexOptions& options = {});

}  // namespace mairl

#endif  // MAIRL_LP_H_
