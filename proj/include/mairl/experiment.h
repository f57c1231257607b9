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

// Grid transfer experiment: an expert is computed on the deterministic grid,
// sampled through a simulated generative model, a reward is recovered from
// the estimate and re-solved in altered grids, and both the re-solved policy
// and the cloned expert are scored under the altered grid's true reward.

#ifndef MAIRL_EXPERIMENT_H_
#define MAIRL_EXPERIMENT_H_

#include <cstdint>
#include <string>
#include <vector>

#include "mairl/estimation.h"
#include "mairl/experiment_config.h"
#include "mairl/kernels.h"
#include "mairl/markov_game.h"

namespace mairl {

struct ExpertBundle {
  MarkovGame game;
  JointReward reward;
  JointPolicy expert;
};

// Nash value iteration on the given grid. Throws ConvergenceError when it
// does not converge.
ExpertBundle SynthesizeExpert(const GridGameSpec& spec, int max_iters = 5000,
                              double tol = 1e-8);

struct TransferResult {
  double gap_mairl = 0.0;
  double gap_bc = 0.0;
  std::vector<double> agent_gap_mairl;
  std::vector<double> agent_gap_bc;
  bool nvi_converged = false;
  int nvi_iterations = 0;
};

// Re-solves `recovered` in `game` by Nash value iteration and scores the
// result and `cloned` under `true_reward`.
TransferResult Transfer(const MarkovGame& game, const JointReward& true_reward,
                        const JointReward& recovered, const JointPolicy& cloned,
                        GapMode gap_mode, int nvi_max_iters, double nvi_tol);

struct CurveRow {
  std::uint64_t seed;
  GridVariant variant;
  long k;
  long samples_total;  // k * S * J transition queries
  double gap_mairl;
  double gap_bc;
  double epsilon_k;
};

struct TransferRow {
  std::uint64_t seed;
  GridVariant variant;
  long k;
  double margin;
  long lp_iterations;
  long projection_steps;
  bool projection_optimal;
  bool nvi_converged;
  int nvi_iterations;
  std::vector<double> agent_gap_mairl;
  std::vector<double> agent_gap_bc;
};

struct RunLogEntry {
  std::uint64_t seed;
  long k;
  double epsilon_k;
  double max_c;
  double max_radius;
  int indicator_active_states;
};

struct BoundRow {
  std::uint64_t seed;
  int num_states;
  int num_joint;
  double gamma;
  double delta;
  double pi_min;
  double rmax;
  double epsilon;
  double transition_term;
  double policy_term;
  double theoretical_bound;
  long predicted_tau;       // -1 beyond the search cap
  long empirical_tau;       // -1 when the run stopped before the rule held
  double empirical_samples; // empirical_tau * S * J, or -1
};

struct SummaryRow {
  GridVariant variant;
  long k;
  int runs;
  double mairl_mean, mairl_lower, mairl_upper;
  double bc_mean, bc_lower, bc_upper;
};

struct FailureRow {
  std::uint64_t seed;
  long k;
  std::string stage;
  std::string message;
};

struct ExperimentResult {
  std::vector<CurveRow> curve;
  std::vector<TransferRow> transfer;
  std::vector<RunLogEntry> run_log;
  std::vector<BoundRow> bound;
  std::vector<FailureRow> failures;
};

// Seeds run concurrently under kParallel; output order and content do not
// depend on the execution mode. Stage failures are recorded and the run
// continues. Throws ConvergenceError when the expert cannot be computed.
ExperimentResult RunExperiment(const ExperimentConfig& config,
                               Execution exec = Execution::kParallel);

// Mean with a 95% normal band per (variant, k); lower ends clipped at 0.
std::vector<SummaryRow> Summarize(const std::vector<CurveRow>& curve);

// Bound row for the config's grid, without an empirical run.
BoundRow BoundFor(const ExperimentConfig& config, std::uint64_t seed,
                  long empirical_tau);

// CSV text for each table; the first line is a '#' comment recording gamma
// and the selection settings.
std::string CurveCsv(const ExperimentResult& result, const ExperimentConfig& config);
std::string TransferCsv(const ExperimentResult& result,
                        const ExperimentConfig& config);
std::string RunLogCsv(const ExperimentResult& result,
                      const ExperimentConfig& config);
std::string BoundCsv(const std::vector<BoundRow>& rows,
                     const ExperimentConfig& config);
std::string SummaryCsv(const ExperimentResult& result,
                       const ExperimentConfig& config);
std::string FailuresCsv(const ExperimentResult& result,
                        const ExperimentConfig& config);

// Writes curve.csv, transfer.csv, run_log.csv, bound.csv, summary.csv,
// failures.csv and config.txt into `dir`, creating it if needed.
void WriteExperiment(const ExperimentResult& result,
                     const ExperimentConfig& config, const std::string& dir);

}  // namespace mairl

#endif  // MAIRL_EXPERIMENT_H_
