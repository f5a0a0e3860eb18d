// Copyright 2026 The Biphoton Authors
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

#include <cmath>
#include <numbers>

#include "benchmark/benchmark.h"
#include "biphoton/experiments.h"
#include "biphoton/measurement.h"
#include "biphoton/numerics.h"
#include "biphoton/optics.h"
#include "biphoton/qstate.h"

namespace {

using namespace biphoton;

ComplexMatrix test_hermitian(std::size_t n) {
    ComplexMatrix::Builder b(n, n);
    for (std::size_t r = 0; r < n; r++) {
        for (std::size_t c = r; c < n; c++) {
            Complex z(std::sin(1.0 + r * 7.0 + c), r == c ? 0.0 : std::cos(3.0 * r + c));
            b(r, c) = z;
            b(c, r) = std::conj(z);
        }
    }
    return std::move(b).build();
}

void BM_HermitianEigensystem(benchmark::State &state) {
    auto h = test_hermitian(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(hermitian_eigensystem(h));
    }
}
BENCHMARK(BM_HermitianEigensystem)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

void BM_SchmidtMeasurementState(benchmark::State &state) {
    auto ms = premeasure(PureState(ComplexVector{std::sqrt(0.3), std::sqrt(0.7)}, SubsystemLayout::single(2, "S")),
                         ApparatusSpec{});
    for (auto _ : state) {
        benchmark::DoNotOptimize(schmidt(ms));
    }
}
BENCHMARK(BM_SchmidtMeasurementState);

void BM_PartialTrace(benchmark::State &state) {
    auto full = densify(PureState(ComplexVector::basis(16, 3), SubsystemLayout({2, 2, 2, 2}, {"S", "E1", "E2", "E3"})));
    for (auto _ : state) {
        benchmark::DoNotOptimize(partial_trace(full, "S"));
    }
}
BENCHMARK(BM_PartialTrace);

void BM_RunTrials(benchmark::State &state) {
    auto cal = calibrate();
    const auto n = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_trials({std::numbers::pi / 3, 0}, cal, n, 42));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * state.range(0));
}
BENCHMARK(BM_RunTrials)->Arg(10000)->Arg(100000);

void BM_AnalyticPhaseScan(benchmark::State &state) {
    auto cal = calibrate();
    for (auto _ : state) {
        benchmark::DoNotOptimize(phase_scan(360, 0, 42, cal));
    }
}
BENCHMARK(BM_AnalyticPhaseScan);

}  // namespace

BENCHMARK_MAIN();
