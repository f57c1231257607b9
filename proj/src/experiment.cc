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

#include "mairl/experiment.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <utility>

#include "mairl/equilibrium.h"
#include "mairl/errors.h"
#include "mairl/grid_game.h"
#include "mairl/reward_select.h"
#include "mairl/text_format.h"

namespace mairl {
namespace {

// Cap on the stopping-round search used for the bound table.
constexpr long kPredictionCap = 1000000000L;

struct Altered {
  GridVariant variant;
  MarkovGame game;
  JointReward reward;
};

struct SeedOutput {
  std::vector<CurveRow> curve;
  std::vector<TransferRow> transfer;
  std::vector<RunLogEntry> run_log;
  std::vector<FailureRow> failures;
  long tau = -1;
};

ConfidenceParams ParamsFor(const ExperimentConfig& config) {
  ConfidenceParams params;
  params.delta = config.delta;
  params.pi_min = config.pi_min;
  params.rmax = config.grid.rmax;
  params.gamma = config.grid.gamma;
  return params;
}

void Evaluate(const ExperimentConfig& config, const ExpertBundle& bundle,
              const std::vector<Altered>& altered, const CountBook& book,
              std::uint64_t seed, double epsilon_k, Execution exec,
              SeedOutput& out) {
  const long k = book.iteration;
  const MarkovGame& game = bundle.game;
  SelectionResult selection;
  JointPolicy cloned;
  try {
    const EstimatedProblem estimate = Estimate(book);
    const MarkovGame game_hat = estimate.Game(game);
    cloned = BehaviorCloning(estimate.pi_hat);
    SelectionOptions options;
    options.mode = config.selection;
    options.seed = seed;
    options.margin_slack = config.margin_slack;
    options.exec = exec;
    selection = MaxGapReward(game_hat, cloned, config.grid.rmax, options);
  } catch (const Error& e) {
    out.failures.push_back({seed, k, "recover", e.what()});
    return;
  }
  for (const Altered& target : altered) {
    try {
      TransferResult t =
          Transfer(target.game, target.reward, selection.reward, cloned,
                   config.gap_mode, config.nvi_max_iters, config.nvi_tol);
      out.curve.push_back({seed, target.variant, k,
                           k * game.num_states() * game.num_joint(),
                           t.gap_mairl, t.gap_bc, epsilon_k});
      out.transfer.push_back({seed, target.variant, k, selection.margin,
                              selection.lp_iterations,
                              selection.projection_steps,
                              selection.projection_optimal, t.nvi_converged,
                              t.nvi_iterations, t.agent_gap_mairl,
                              t.agent_gap_bc});
    } catch (const Error& e) {
      out.failures.push_back(
          {seed, k, "transfer:" + std::string(VariantName(target.variant)),
           e.what()});
    }
  }
}

SeedOutput RunSeed(const ExperimentConfig& config, const ExpertBundle& bundle,
                   const std::vector<Altered>& altered, std::uint64_t seed,
                   Execution exec) {
  SeedOutput out;
  const ConfidenceParams params = ParamsFor(config);
  const std::vector<long> rounds = config.EvaluationRounds();
  try {
    SimulatedOracle oracle(bundle.game, bundle.expert, seed);
    CountBook book(bundle.game.num_states(), bundle.game.action_counts());
    std::size_t next = 0;
    for (long k = 1; k <= config.k_max; ++k) {
      SampleRound(oracle, book, exec);
      const UncertaintyTable u = Uncertainty(book, params, exec);
      out.run_log.push_back({seed, k, u.epsilon_k, u.max_c, u.max_radius,
                             u.indicator_active_states});
      const bool stops = u.epsilon_k <= config.epsilon / 2.0;
      if (stops && out.tau < 0) out.tau = k;
      const bool scheduled = next < rounds.size() && rounds[next] == k;
      if (scheduled) ++next;
      const bool final_round = config.stop_at_tau && stops;
      if (scheduled || final_round) {
        Evaluate(config, bundle, altered, book, seed, u.epsilon_k, exec, out);
      }
      if (final_round) break;
    }
  } catch (const Error& e) {
    out.failures.push_back({seed, 0, "sample", e.what()});
  }
  return out;
}

std::string Header(const ExperimentConfig& config) {
  return "# gamma=" + FormatDouble(config.grid.gamma) +
         " rmax=" + FormatDouble(config.grid.rmax) +
         " selection=" + std::string(SelectionName(config.selection)) +
         " margin_slack=" + FormatDouble(config.margin_slack) +
         " gap=" + std::string(GapModeName(config.gap_mode)) + "\n";
}

std::string Quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    if (c == '\n') {
      out += ' ';
      continue;
    }
    out += c;
  }
  return out + "\"";
}

std::string JoinRow(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (k) out += ',';
    out += cells[k];
  }
  return out + "\n";
}

std::string Num(double x) { return FormatDouble(x); }

}  // namespace

ExpertBundle SynthesizeExpert(const GridGameSpec& spec, int max_iters,
                              double tol) {
  auto [game, reward] = BuildGridGame(spec);
  NashQResult nvi = NashValueIteration(game, reward, max_iters, tol);
  if (!nvi.converged) {
    throw ConvergenceError("expert Nash value iteration did not converge");
  }
  return {std::move(game), std::move(reward), std::move(nvi.policy)};
}

TransferResult Transfer(const MarkovGame& game, const JointReward& true_reward,
                        const JointReward& recovered, const JointPolicy& cloned,
                        GapMode gap_mode, int nvi_max_iters, double nvi_tol) {
  NashQResult nvi = NashValueIteration(game, recovered, nvi_max_iters, nvi_tol);
  const NashGapReport mairl = NashGap(game, true_reward, nvi.policy, gap_mode);
  const NashGapReport bc = NashGap(game, true_reward, cloned, gap_mode);
  TransferResult out;
  out.gap_mairl = mairl.gap;
  out.gap_bc = bc.gap;
  out.agent_gap_mairl = mairl.per_agent_gap;
  out.agent_gap_bc = bc.per_agent_gap;
  out.nvi_converged = nvi.converged;
  out.nvi_iterations = nvi.iterations;
  return out;
}

ExperimentResult RunExperiment(const ExperimentConfig& config, Execution exec) {
  config.Validate();
  GridGameSpec base = config.grid;
  base.variant = GridVariant::kDeterministic;
  const ExpertBundle bundle =
      SynthesizeExpert(base, config.nvi_max_iters, config.nvi_tol);
  std::vector<Altered> altered;
  for (GridVariant v : config.variants) {
    GridGameSpec spec = config.grid;
    spec.variant = v;
    auto [game, reward] = BuildGridGame(spec);
    altered.push_back({v, std::move(game), std::move(reward)});
  }

  const int num_seeds = static_cast<int>(config.seeds.size());
  std::vector<SeedOutput> per_seed(num_seeds);
  if (exec == Execution::kParallel) {
    // Seeds are the parallel unit; the stages inside each run serially.
#pragma omp parallel for schedule(dynamic)
    for (int j = 0; j < num_seeds; ++j) {
      per_seed[j] = RunSeed(config, bundle, altered, config.seeds[j],
                            Execution::kSerial);
    }
  } else {
    for (int j = 0; j < num_seeds; ++j) {
      per_seed[j] = RunSeed(config, bundle, altered, config.seeds[j],
                            Execution::kSerial);
    }
  }

  ExperimentResult result;
  for (int j = 0; j < num_seeds; ++j) {
    SeedOutput& s = per_seed[j];
    auto append = [](auto& to, auto& from) {
      to.insert(to.end(), std::make_move_iterator(from.begin()),
                std::make_move_iterator(from.end()));
    };
    append(result.curve, s.curve);
    append(result.transfer, s.transfer);
    append(result.run_log, s.run_log);
    append(result.failures, s.failures);
    result.bound.push_back(BoundFor(config, config.seeds[j], s.tau));
  }
  return result;
}

BoundRow BoundFor(const ExperimentConfig& config, std::uint64_t seed,
                  long empirical_tau) {
  GridWorld grid(config.grid);
  const int S = grid.num_states();
  const std::vector<int> counts = {kNumGridActions, kNumGridActions};
  const int J = kNumGridActions * kNumGridActions;
  const ConfidenceParams params = ParamsFor(config);
  const SampleBound bound =
      TheoreticalSampleBound(params, S, counts, config.epsilon);
  BoundRow row;
  row.seed = seed;
  row.num_states = S;
  row.num_joint = J;
  row.gamma = params.gamma;
  row.delta = params.delta;
  row.pi_min = params.pi_min;
  row.rmax = params.rmax;
  row.epsilon = config.epsilon;
  row.transition_term = bound.transition_term;
  row.policy_term = bound.policy_term;
  row.theoretical_bound = bound.total;
  row.predicted_tau =
      PredictStoppingIteration(params, S, counts, config.epsilon, kPredictionCap);
  row.empirical_tau = empirical_tau;
  row.empirical_samples =
      empirical_tau > 0 ? static_cast<double>(empirical_tau) * S * J : -1.0;
  return row;
}

std::vector<SummaryRow> Summarize(const std::vector<CurveRow>& curve) {
  std::map<std::pair<int, long>, std::vector<const CurveRow*>> groups;
  for (const CurveRow& r : curve) {
    groups[{static_cast<int>(r.variant), r.k}].push_back(&r);
  }
  std::vector<SummaryRow> out;
  for (const auto& [key, rows] : groups) {
    auto band = [&](double CurveRow::*field, double& mean, double& lo,
                    double& hi) {
      const double n = static_cast<double>(rows.size());
      double sum = 0.0;
      for (const CurveRow* r : rows) sum += r->*field;
      mean = sum / n;
      double ss = 0.0;
      for (const CurveRow* r : rows) ss += (r->*field - mean) * (r->*field - mean);
      const double half =
          rows.size() > 1 ? 1.96 * std::sqrt(ss / (n - 1.0)) / std::sqrt(n) : 0.0;
      lo = std::max(0.0, mean - half);
      hi = mean + half;
    };
    SummaryRow row;
    row.variant = static_cast<GridVariant>(key.first);
    row.k = key.second;
    row.runs = static_cast<int>(rows.size());
    band(&CurveRow::gap_mairl, row.mairl_mean, row.mairl_lower, row.mairl_upper);
    band(&CurveRow::gap_bc, row.bc_mean, row.bc_lower, row.bc_upper);
    out.push_back(row);
  }
  return out;
}

std::string CurveCsv(const ExperimentResult& result,
                     const ExperimentConfig& config) {
  std::string out = Header(config);
  out += "seed,variant,k,samples_total,nash_gap_mairl,nash_gap_bc,epsilon_k\n";
  for (const CurveRow& r : result.curve) {
    out += JoinRow({std::to_string(r.seed), std::string(VariantName(r.variant)),
                    std::to_string(r.k), std::to_string(r.samples_total),
                    Num(r.gap_mairl), Num(r.gap_bc), Num(r.epsilon_k)});
  }
  return out;
}

std::string TransferCsv(const ExperimentResult& result,
                        const ExperimentConfig& config) {
  std::string out = Header(config);
  out += "seed,variant,k,margin,lp_iterations,projection_steps,"
         "projection_optimal,nvi_converged,nvi_iterations,"
         "mairl_gap_agent0,mairl_gap_agent1,bc_gap_agent0,bc_gap_agent1\n";
  for (const TransferRow& r : result.transfer) {
    out += JoinRow({std::to_string(r.seed), std::string(VariantName(r.variant)),
                    std::to_string(r.k), Num(r.margin),
                    std::to_string(r.lp_iterations),
                    std::to_string(r.projection_steps),
                    r.projection_optimal ? "1" : "0", r.nvi_converged ? "1" : "0",
                    std::to_string(r.nvi_iterations), Num(r.agent_gap_mairl[0]),
                    Num(r.agent_gap_mairl[1]), Num(r.agent_gap_bc[0]),
                    Num(r.agent_gap_bc[1])});
  }
  return out;
}

std::string RunLogCsv(const ExperimentResult& result,
                      const ExperimentConfig& config) {
  std::string out = Header(config);
  out += "seed,k,epsilon_k,max_c,max_radius,indicator_active_states\n";
  for (const RunLogEntry& r : result.run_log) {
    out += JoinRow({std::to_string(r.seed), std::to_string(r.k),
                    Num(r.epsilon_k), Num(r.max_c), Num(r.max_radius),
                    std::to_string(r.indicator_active_states)});
  }
  return out;
}

std::string BoundCsv(const std::vector<BoundRow>& rows,
                     const ExperimentConfig& config) {
  std::string out = Header(config);
  out += "seed,num_states,num_joint,gamma,delta,pi_min,rmax,epsilon,"
         "transition_term,policy_term,theoretical_bound,predicted_tau,"
         "predicted_samples,empirical_tau,empirical_samples\n";
  for (const BoundRow& r : rows) {
    const double predicted_samples =
        r.predicted_tau > 0
            ? static_cast<double>(r.predicted_tau) * r.num_states * r.num_joint
            : -1.0;
    out += JoinRow({std::to_string(r.seed), std::to_string(r.num_states),
                    std::to_string(r.num_joint), Num(r.gamma), Num(r.delta),
                    Num(r.pi_min), Num(r.rmax), Num(r.epsilon),
                    Num(r.transition_term), Num(r.policy_term),
                    Num(r.theoretical_bound), std::to_string(r.predicted_tau),
                    Num(predicted_samples), std::to_string(r.empirical_tau),
                    Num(r.empirical_samples)});
  }
  return out;
}

std::string SummaryCsv(const ExperimentResult& result,
                       const ExperimentConfig& config) {
  std::string out = Header(config);
  out += "variant,k,runs,mairl_mean,mairl_lower,mairl_upper,bc_mean,bc_lower,"
         "bc_upper\n";
  for (const SummaryRow& r : Summarize(result.curve)) {
    out += JoinRow({std::string(VariantName(r.variant)), std::to_string(r.k),
                    std::to_string(r.runs), Num(r.mairl_mean),
                    Num(r.mairl_lower), Num(r.mairl_upper), Num(r.bc_mean),
                    Num(r.bc_lower), Num(r.bc_upper)});
  }
  return out;
}

std::string FailuresCsv(const ExperimentResult& result,
                        const ExperimentConfig& config) {
  std::string out = Header(config);
  out += "seed,k,stage,message\n";
  for (const FailureRow& r : result.failures) {
    out += JoinRow({std::to_string(r.seed), std::to_string(r.k), r.stage,
                    Quote(r.message)});
  }
  return out;
}

void WriteExperiment(const ExperimentResult& result,
                     const ExperimentConfig& config, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create " + dir + ": " + ec.message());
  const std::filesystem::path root(dir);
  WriteTextFile((root / "curve.csv").string(), CurveCsv(result, config));
  WriteTextFile((root / "transfer.csv").string(), TransferCsv(result, config));
  WriteTextFile((root / "run_log.csv").string(), RunLogCsv(result, config));
  WriteTextFile((root / "bound.csv").string(), BoundCsv(result.bound, config));
  WriteTextFile((root / "summary.csv").string(), SummaryCsv(result, config));
  WriteTextFile((root / "failures.csv").string(), FailuresCsv(result, config));
  WriteTextFile((root / "config.txt").string(), ConfigText(config));
}

}  // namespace mairl
