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

// Serial against OpenMP timings for the tabular kernels and the stages of
// the grid pipeline. The second benchmark argument selects the execution
// mode: 0 serial, 1 parallel.

#include <random>

#include <benchmark/benchmark.h>

#include "mairl/equilibrium.h"
#include "mairl/estimation.h"
#include "mairl/grid_game.h"
#include "mairl/kernels.h"
#include "mairl/reward_select.h"

namespace mairl {
namespace {

Table RandomRows(std::mt19937_64& rng, int rows, int width) {
  std::uniform_real_distribution<double> unit(0.01, 1.0);
  Table out;
  out.reserve(static_cast<std::size_t>(rows) * width);
  for (int r = 0; r < rows; ++r) {
    Table row(width);
    double total = 0.0;
    for (double& x : row) total += (x = unit(rng));
    for (double x : row) out.push_back(x / total);
  }
  return out;
}

MarkovGame RandomGame(int states, int actions) {
  std::mt19937_64 rng(states * 31 + actions);
  const int J = actions * actions;
  return MarkovGame(states, {actions, actions}, RandomRows(rng, states * J, states),
                    0.9, RandomRows(rng, 1, states));
}

Execution Mode(const benchmark::State& state) {
  return state.range(1) == 0 ? Execution::kSerial : Execution::kParallel;
}

void BM_BellmanBackup(benchmark::State& state) {
  const MarkovGame game = RandomGame(static_cast<int>(state.range(0)), 4);
  const Table reward(game.NumPairs(), 0.5);
  const Table v(game.num_states(), 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::BellmanBackup(game, reward, v, Mode(state)));
  }
  state.SetItemsProcessed(state.iterations() * game.NumPairs() * game.num_states());
}
BENCHMARK(BM_BellmanBackup)->ArgsProduct({{72, 256, 512}, {0, 1}});

void BM_PolicyTransition(benchmark::State& state) {
  const MarkovGame game = RandomGame(static_cast<int>(state.range(0)), 4);
  const Table pi(game.NumPairs(), 1.0 / game.num_joint());
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::PolicyTransition(game, pi, Mode(state)));
  }
}
BENCHMARK(BM_PolicyTransition)->ArgsProduct({{72, 256, 512}, {0, 1}});

void BM_ExpectNext(benchmark::State& state) {
  const MarkovGame game = RandomGame(static_cast<int>(state.range(0)), 4);
  const Table f(game.num_states(), 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::ExpectNext(game, f, Mode(state)));
  }
}
BENCHMARK(BM_ExpectNext)->ArgsProduct({{72, 256, 512}, {0, 1}});

void BM_GridExpert(benchmark::State& state) {
  auto [game, reward] = BuildGridGame(GridGameSpec{});
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        NashValueIteration(game, reward, 5000, 1e-8, Mode(state)));
  }
}
BENCHMARK(BM_GridExpert)->ArgsProduct({{72}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_GridSampling(benchmark::State& state) {
  auto [game, reward] = BuildGridGame(GridGameSpec{});
  const JointPolicy expert = NashValueIteration(game, reward).policy;
  SimulatedOracle oracle(game, expert, 0);
  ConfidenceParams params;
  for (auto _ : state) {
    CountBook book(game.num_states(), game.action_counts());
    for (int k = 0; k < 50; ++k) {
      SampleRound(oracle, book, Mode(state));
      benchmark::DoNotOptimize(Uncertainty(book, params, Mode(state)));
    }
  }
}
BENCHMARK(BM_GridSampling)->ArgsProduct({{72}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_GridMaxMargin(benchmark::State& state) {
  auto [game, reward] = BuildGridGame(GridGameSpec{});
  const JointPolicy expert = NashValueIteration(game, reward).policy;
  SelectionOptions options;
  options.exec = Mode(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(MaxGapReward(game, expert, 1.0, options));
  }
}
BENCHMARK(BM_GridMaxMargin)
    ->ArgsProduct({{72}, {0, 1}})
    ->Unit(benchmark::kMillisecond)
    ->Iterations(2);

}  // namespace
}  // namespace mairl

BENCHMARK_MAIN();
