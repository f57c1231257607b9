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

// Command-line front end. Exit codes: 0 success, 2 configuration error,
// 3 convergence or recovery failure, 1 anything else.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mairl/equilibrium.h"
#include "mairl/errors.h"
#include "mairl/estimation.h"
#include "mairl/experiment.h"
#include "mairl/grid_game.h"
#include "mairl/reward_select.h"
#include "mairl/text_format.h"

namespace mairl {
namespace {

constexpr int kExitConfig = 2;
constexpr int kExitConvergence = 3;

struct GlobalFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
};

ExperimentConfig ResolveConfig(const GlobalFlags& flags) {
  ExperimentConfig config =
      flags.config_path.empty() ? ExperimentConfig{} : LoadConfig(flags.config_path);
  if (flags.seed) config.seeds = {*flags.seed};
  if (!flags.out_dir.empty()) config.output_dir = flags.out_dir;
  config.Validate();
  return config;
}

std::string OutPath(const ExperimentConfig& config, const std::string& name) {
  std::error_code ec;
  std::filesystem::create_directories(config.output_dir, ec);
  if (ec) throw ConfigError("cannot create " + config.output_dir);
  return (std::filesystem::path(config.output_dir) / name).string();
}

std::string PathOr(const std::string& given, const ExperimentConfig& config,
                   const char* name) {
  return given.empty()
             ? (std::filesystem::path(config.output_dir) / name).string()
             : given;
}

TextDocument Load(const std::string& path) {
  return ParseText(ReadTextFile(path));
}

int GenExpert(const ExperimentConfig& config, const std::string& variant) {
  GridGameSpec spec = config.grid;
  spec.variant = ParseVariant(variant);
  ExpertBundle bundle =
      SynthesizeExpert(spec, config.nvi_max_iters, config.nvi_tol);
  const std::string path = OutPath(config, "expert.txt");
  WriteTextFile(path, WriteText(ShapeOf(bundle.game), &bundle.game,
                                &bundle.reward, &bundle.expert,
                                {{"variant", variant}}));
  std::printf("expert written to %s\n", path.c_str());
  return 0;
}

int Sample(const ExperimentConfig& config, const std::string& expert_path) {
  TextDocument doc = Load(PathOr(expert_path, config, "expert.txt"));
  if (!doc.game || !doc.policy) {
    throw ConfigError("expert file needs [transitions] and [policy]");
  }
  const std::uint64_t seed = config.seeds.front();
  SimulatedOracle oracle(*doc.game, *doc.policy, seed);
  ConfidenceParams params;
  params.delta = config.delta;
  params.pi_min = config.pi_min;
  params.rmax = config.grid.rmax;
  params.gamma = doc.game->gamma();
  SamplingResult run =
      UniformSampling(oracle, params, config.epsilon, config.k_max);
  const MarkovGame estimate = run.problem.Game(*doc.game);
  const long k = run.problem.counts.iteration;
  WriteTextFile(
      OutPath(config, "estimate.txt"),
      WriteText(ShapeOf(estimate), &estimate, nullptr, &run.problem.pi_hat,
                {{"seed", std::to_string(seed)},
                 {"rounds", std::to_string(k)},
                 {"tau", std::to_string(run.converged ? run.tau : -1)},
                 {"epsilon_k", FormatDouble(run.uncertainty.epsilon_k)}}));
  std::string log = "k,epsilon_k,max_c,max_radius,indicator_active_states\n";
  for (const RunLogRow& r : run.log) {
    log += std::to_string(r.k) + "," + FormatDouble(r.epsilon_k) + "," +
           FormatDouble(r.max_c) + "," + FormatDouble(r.max_radius) + "," +
           std::to_string(r.indicator_active_states) + "\n";
  }
  WriteTextFile(OutPath(config, "run_log.csv"), log);
  std::printf("sampled %ld rounds, epsilon_k = %.6g, stopping rule %s\n", k,
              run.uncertainty.epsilon_k, run.converged ? "met" : "not met");
  return 0;
}

int Recover(const ExperimentConfig& config, const std::string& estimate_path) {
  TextDocument doc = Load(PathOr(estimate_path, config, "estimate.txt"));
  if (!doc.game || !doc.policy) {
    throw ConfigError("estimate file needs [transitions] and [policy]");
  }
  SelectionOptions options;
  options.mode = config.selection;
  options.seed = config.seeds.front();
  options.margin_slack = config.margin_slack;
  SelectionResult sel =
      MaxGapReward(*doc.game, BehaviorCloning(*doc.policy), config.grid.rmax,
                   options);
  const std::string path = OutPath(config, "reward.txt");
  WriteTextFile(path,
                WriteText(doc.shape, nullptr, &sel.reward, nullptr,
                          {{"seed", std::to_string(options.seed)},
                           {"mode", std::string(SelectionName(options.mode))},
                           {"margin", FormatDouble(sel.margin)},
                           {"lp_iterations", std::to_string(sel.lp_iterations)},
                           {"projection_steps",
                            std::to_string(sel.projection_steps)}}));
  std::printf("recovered reward with margin %.6g written to %s\n", sel.margin,
              path.c_str());
  return 0;
}

int Evaluate(const ExperimentConfig& config, const std::string& reward_path,
             const std::string& estimate_path) {
  TextDocument reward_doc = Load(PathOr(reward_path, config, "reward.txt"));
  TextDocument estimate_doc = Load(PathOr(estimate_path, config, "estimate.txt"));
  if (!reward_doc.reward || !estimate_doc.policy) {
    throw ConfigError("need a [reward] file and an estimate with [policy]");
  }
  std::string csv = "variant,nash_gap_mairl,nash_gap_bc,nvi_converged\n";
  for (GridVariant v : config.variants) {
    GridGameSpec spec = config.grid;
    spec.variant = v;
    auto [game, reward] = BuildGridGame(spec);
    TransferResult t =
        Transfer(game, reward, *reward_doc.reward,
                 BehaviorCloning(*estimate_doc.policy), config.gap_mode,
                 config.nvi_max_iters, config.nvi_tol);
    csv += std::string(VariantName(v)) + "," + FormatDouble(t.gap_mairl) + "," +
           FormatDouble(t.gap_bc) + "," + (t.nvi_converged ? "1" : "0") + "\n";
    std::printf("%-14s mairl %.6f  bc %.6f\n", std::string(VariantName(v)).c_str(),
                t.gap_mairl, t.gap_bc);
  }
  WriteTextFile(OutPath(config, "evaluate.csv"), csv);
  return 0;
}

int Experiment(const ExperimentConfig& config) {
  ExperimentResult result = RunExperiment(config);
  WriteExperiment(result, config, config.output_dir);
  std::printf("%zu curve rows, %zu failures, results in %s\n",
              result.curve.size(), result.failures.size(),
              config.output_dir.c_str());
  return result.failures.empty() ? 0 : kExitConvergence;
}

int Bound(const ExperimentConfig& config) {
  std::vector<BoundRow> rows = {BoundFor(config, config.seeds.front(), -1)};
  WriteTextFile(OutPath(config, "bound.csv"), BoundCsv(rows, config));
  const BoundRow& r = rows.front();
  std::printf("theoretical bound %.6g samples, predicted stopping round %ld "
              "(%.6g samples)\n",
              r.theoretical_bound, r.predicted_tau,
              static_cast<double>(r.predicted_tau) * r.num_states * r.num_joint);
  return 0;
}

int Main(int argc, char** argv) {
  CLI::App app{"Multi-agent inverse reinforcement learning on grid games"};
  app.fallthrough();
  app.require_subcommand(1);
  GlobalFlags flags;
  app.add_option("--config", flags.config_path, "Experiment config file");
  app.add_option("--seed", flags.seed, "Override the seed list with one seed");
  app.add_option("--out-dir", flags.out_dir, "Output directory");

  std::string variant = "deterministic";
  std::string expert_path, estimate_path, reward_path;
  auto* gen = app.add_subcommand("gen-expert", "Compute the grid expert");
  gen->add_option("--variant", variant, "Grid variant");
  auto* sample = app.add_subcommand("sample", "Run uniform sampling");
  sample->add_option("--expert", expert_path, "Expert file");
  auto* recover = app.add_subcommand("recover", "Select a feasible reward");
  recover->add_option("--estimate", estimate_path, "Estimate file");
  auto* evaluate = app.add_subcommand("evaluate", "Transfer and score");
  evaluate->add_option("--reward", reward_path, "Recovered reward file");
  evaluate->add_option("--estimate", estimate_path, "Estimate file");
  auto* experiment = app.add_subcommand("experiment", "Full transfer experiment");
  auto* bound = app.add_subcommand("bound", "Sample-complexity bound");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    const ExperimentConfig config = ResolveConfig(flags);
    if (*gen) return GenExpert(config, variant);
    if (*sample) return Sample(config, expert_path);
    if (*recover) return Recover(config, estimate_path);
    if (*evaluate) return Evaluate(config, reward_path, estimate_path);
    if (*experiment) return Experiment(config);
    if (*bound) return Bound(config);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const ConvergenceError& e) {
    std::fprintf(stderr, "convergence failure: %s\n", e.what());
    return kExitConvergence;
  } catch (const InfeasibleError& e) {
    std::fprintf(stderr, "recovery failure: %s\n", e.what());
    return kExitConvergence;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}

}  // namespace
}  // namespace mairl

int main(int argc, char** argv) { return mairl::Main(argc, argv); }
