// Copyright 2026 The condq Authors
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

// Serial reference against the OpenMP sweep on a phase-map grid and on the
// cross-engine verification grid. Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include "condq/config.hpp"
#include "condq/sweep.hpp"
#include "condq/verify.hpp"

using namespace condq::explorer;

namespace {

SweepSpec phase_map(int points, Engine engine, double hi) {
    auto s = sweep_spec_from(preset_config("fig4-eta50"));
    for (auto &axis : s.axes) {
        axis.points = points;
        axis.hi = hi;
    }
    s.engine = engine;
    return s;
}

void BM_AnalyticPhaseMap(benchmark::State &state) {
    const auto spec = phase_map(static_cast<int>(state.range(0)), Engine::analytic, 1.5);
    const auto exec = static_cast<Execution>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(run_sweep(spec, exec));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(spec.size()));
}

void BM_NumericPhaseMap(benchmark::State &state) {
    const auto spec = phase_map(static_cast<int>(state.range(0)), Engine::numeric, 0.9);
    const auto exec = static_cast<Execution>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(run_sweep(spec, exec));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(spec.size()));
}

void BM_VerifyGrid(benchmark::State &state) {
    const auto exec = static_cast<Execution>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(verify_grid(standard_grid(), std::nullopt, exec));
}

const long kSerial = static_cast<long>(Execution::serial);
const long kParallel = static_cast<long>(Execution::parallel);

}  // namespace

BENCHMARK(BM_AnalyticPhaseMap)->ArgsProduct({{60, 200}, {kSerial, kParallel}})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_NumericPhaseMap)->ArgsProduct({{12}, {kSerial, kParallel}})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_VerifyGrid)->Args({kSerial})->Args({kParallel})->Unit(benchmark::kSecond)->UseRealTime()->Iterations(1);

BENCHMARK_MAIN();
