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

#include "mairl/optimality.h"

#include <algorithm>
#include <limits>
#include <string>

#include "mairl/errors.h"
#include "mairl/feasible.h"
#include "mairl/rng.h"

namespace mairl {
namespace {

constexpr std::uint64_t kValueStream = 0x66616d696c795631ULL;
constexpr std::uint64_t kAdvantageStream = 0x66616d696c794131ULL;

void CheckMembers(const FeasibleProblem& problem,
                  const std::vector<JointReward>& family, double tol,
                  const char* which) {
  if (family.empty()) {
    throw PreconditionError(std::string(which) + " family is empty");
  }
  for (std::size_t m = 0; m < family.size(); ++m) {
    if (!CheckImplicit(*problem.game, family[m], *problem.policy, tol).feasible) {
      throw PreconditionError(std::string(which) + " family member " +
                              std::to_string(m) + " is not feasible");
    }
  }
}

std::vector<JointPolicy> Equilibria(const MarkovGame& game,
                                    const std::vector<JointReward>& family,
                                    const OptimalityOptions& options) {
  std::vector<JointPolicy> out;
  out.reserve(family.size());
  for (const JointReward& reward : family) {
    out.push_back(
        NashValueIteration(game, reward, options.nvi_max_iters, options.nvi_tol)
            .policy);
  }
  return out;
}

// max over rows of min over columns, where entry (r, c) is the gap of
// policies[c] in `game` under family[r].
double SupInf(const MarkovGame& game, const std::vector<JointReward>& family,
              const std::vector<JointPolicy>& policies, GapMode mode,
              std::vector<std::vector<double>>& table) {
  table.assign(family.size(), std::vector<double>(policies.size(), 0.0));
  double sup = 0.0;
  for (std::size_t r = 0; r < family.size(); ++r) {
    double inf = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < policies.size(); ++c) {
      table[r][c] = NashGap(game, family[r], policies[c], mode).gap;
      inf = std::min(inf, table[r][c]);
    }
    sup = std::max(sup, inf);
  }
  return sup;
}

}  // namespace

RewardFamilies SamplePairedFamilies(const FeasibleProblem& truth,
                                    const FeasibleProblem& recovered,
                                    const std::vector<double>& rmax,
                                    const FamilyOptions& options) {
  const MarkovGame& game = *truth.game;
  if (options.members <= 0) throw PreconditionError("members must be positive");
  if (recovered.game->num_states() != game.num_states() ||
      recovered.game->action_counts() != game.action_counts()) {
    throw DimensionError("problems differ in shape");
  }
  const int n = game.num_agents();
  const int S = game.num_states();
  const int J = game.num_joint();
  if (static_cast<int>(rmax.size()) != n) {
    throw DimensionError("rmax needs one entry per agent");
  }

  RewardFamilies out;
  for (std::uint64_t draw = 0; static_cast<int>(out.true_family.size()) <
                               options.members;
       ++draw) {
    if (draw >= static_cast<std::uint64_t>(options.max_attempts)) {
      throw ConvergenceError("reward family sampling rejected too many draws");
    }
    FeasibleParams params;
    params.value.assign(n, Table(S));
    params.advantage.assign(n, Table(static_cast<std::size_t>(S) * J));
    const std::uint64_t base = draw * static_cast<std::uint64_t>(n);
    for (int i = 0; i < n; ++i) {
      const double center = rmax[i] / (2.0 * (1.0 - game.gamma()));
      const double spread = options.value_spread * rmax[i] / (1.0 + game.gamma());
      for (int s = 0; s < S; ++s) {
        const double u = CounterUniform(options.seed, kValueStream + base + i, s);
        params.value[i][s] = center + spread * (2.0 * u - 1.0);
      }
      for (int k = 0; k < S * J; ++k) {
        params.advantage[i][k] =
            options.advantage_scale * rmax[i] *
            CounterUniform(options.seed, kAdvantageStream + base + i, k);
      }
    }
    try {
      JointReward r_true = ConstructReward(game, *truth.policy, params, rmax);
      JointReward r_rec =
          ConstructReward(*recovered.game, *recovered.policy, params, rmax);
      out.true_family.push_back(std::move(r_true));
      out.recovered_family.push_back(std::move(r_rec));
    } catch (const OutOfRangeError&) {
      ++out.rejected;
    }
  }
  return out;
}

OptimalityReport OptimalityCheck(const FeasibleProblem& truth,
                                 const FeasibleProblem& recovered,
                                 const std::vector<JointReward>& true_family,
                                 const std::vector<JointReward>& recovered_family,
                                 const OptimalityOptions& options) {
  CheckMembers(truth, true_family, options.membership_tol, "true");
  CheckMembers(recovered, recovered_family, options.membership_tol, "recovered");

  const std::vector<JointPolicy> from_recovered =
      Equilibria(*recovered.game, recovered_family, options);
  const std::vector<JointPolicy> from_true =
      Equilibria(*truth.game, true_family, options);

  OptimalityReport report;
  report.supinf_true = SupInf(*truth.game, true_family, from_recovered,
                              options.gap_mode, report.gap_true);
  report.supinf_recovered = SupInf(*recovered.game, recovered_family, from_true,
                                   options.gap_mode, report.gap_recovered);
  report.pass = report.supinf_true <= options.epsilon &&
                report.supinf_recovered <= options.epsilon;
  return report;
}

}  // namespace mairl
