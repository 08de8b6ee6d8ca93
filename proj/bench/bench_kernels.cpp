/*
    Copyright (c) 2026 The limitlens Authors

    Licensed under the Apache License, Version 2.0 (the "License");
    you may not use this file except in compliance with the License.
    You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

    Unless required by applicable law or agreed to in writing, software
    distributed under the License is distributed on an "AS IS" BASIS,
    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
    See the License for the specific language governing permissions and
    limitations under the License.
*/

// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <filesystem>
#include <string>
#include <vector>

#include "limitlens/archive.hpp"
#include "limitlens/cramsim.hpp"
#include "limitlens/ingest.hpp"
#include "limitlens/series.hpp"

using namespace limitlens;

namespace {

SimConfig sim_config() {
    SimConfig c;
    c.seed = 42;
    return c;
}

void BM_SimulateSerial(benchmark::State& state) {
    const SimConfig c = sim_config();
    for (auto _ : state) {
        benchmark::DoNotOptimize(serial::simulate(c, state.range(0)));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SimulateParallel(benchmark::State& state) {
    const SimConfig c = sim_config();
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate(c, state.range(0), static_cast<int>(state.range(1))));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

// A year of simulated days, one cohort per day.
const HistogramStore& year_store() {
    static const HistogramStore store = [] {
        HistogramStore s;
        SimConfig c = sim_config();
        Day day = parse_day("2017-01-01");
        for (int i = 0; i < 365; ++i) {
            c.seed = static_cast<std::uint64_t>(i);
            s.add({day, "en", DeviceClass::web}, simulate(c, 20000).histogram);
            day += std::chrono::days{1};
        }
        return s;
    }();
    return store;
}

SeriesParams series_params(int workers) {
    SeriesParams p;
    p.quantity = Quantity::cramming;
    p.limit = 140;
    p.workers = workers;
    return p;
}

const std::vector<std::string> kLangs{"en"};
const std::vector<DeviceClass> kDevices{DeviceClass::web};

void BM_DailySeriesSerial(benchmark::State& state) {
    const HistogramStore& store = year_store();
    const SeriesParams p = series_params(1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(serial::daily_series(store, kDevices, kLangs, p));
    }
}

void BM_DailySeriesParallel(benchmark::State& state) {
    const HistogramStore& store = year_store();
    const SeriesParams p = series_params(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(daily_series(store, kDevices, kLangs, p));
    }
}

std::vector<std::filesystem::path> corpus_shards() {
    const std::vector<std::filesystem::path> inputs{LIMITLENS_FIXTURE_DIR};
    return discover_shards(inputs);
}

void BM_IngestSerial(benchmark::State& state) {
    const auto shards = corpus_shards();
    const ScanOptions options;
    for (auto _ : state) {
        benchmark::DoNotOptimize(serial::ingest(shards, options));
    }
}

void BM_IngestParallel(benchmark::State& state) {
    const auto shards = corpus_shards();
    ScanOptions options;
    options.workers = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(ingest(shards, options));
    }
}

}  // namespace

BENCHMARK(BM_SimulateSerial)->Arg(1 << 20)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SimulateParallel)->Args({1 << 20, 1})->Args({1 << 20, 4})->Args({1 << 20, 8})->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DailySeriesSerial)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DailySeriesParallel)->Arg(1)->Arg(4)->Arg(8)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_IngestSerial)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_IngestParallel)->Arg(1)->Arg(4)->Arg(8)->UseRealTime()->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
