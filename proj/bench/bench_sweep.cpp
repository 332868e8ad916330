#include "splitopt/exact.hpp"
#include "splitopt/heuristic.hpp"
#include "splitopt/scenario.hpp"

#include <benchmark/benchmark.h>

namespace {

std::vector<splitopt::ScenarioConfig> cells(std::size_t iterations) {
    std::vector<splitopt::ScenarioConfig> out;
    for (std::size_t d : {2, 3, 4}) {
        splitopt::ScenarioConfig c;
        c.num_layers = 20;
        c.num_devices = d;
        c.skip_prob = 0.5;
        c.iterations = iterations;
        out.push_back(c);
    }
    return out;
}

void BM_SweepSerial(benchmark::State& state) {
    const auto cfg = cells(static_cast<std::size_t>(state.range(0)));
    splitopt::SweepOptions opt;
    opt.measure_time = false;
    for (auto _ : state) {
        benchmark::DoNotOptimize(splitopt::run_cost_difference_sweep_serial(cfg, opt));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0) * 3);
}
BENCHMARK(BM_SweepSerial)->Arg(1000)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_SweepParallel(benchmark::State& state) {
    const auto cfg = cells(static_cast<std::size_t>(state.range(0)));
    splitopt::SweepOptions opt;
    opt.measure_time = false;
    for (auto _ : state) {
        benchmark::DoNotOptimize(splitopt::run_cost_difference_sweep(cfg, opt));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0) * 3);
}
BENCHMARK(BM_SweepParallel)->Arg(1000)->Unit(benchmark::kMillisecond)->UseRealTime();

splitopt::Instance instance(std::size_t layers, std::size_t devices) {
    splitopt::ScenarioConfig c;
    c.num_layers = layers;
    c.num_devices = devices;
    c.skip_prob = 0.5;
    return splitopt::make_instance(c, 0);
}

void BM_Heuristic(benchmark::State& state) {
    const auto inst = instance(static_cast<std::size_t>(state.range(0)), 5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(splitopt::solve_sco_heuristic(inst.model, inst.chain));
    }
}
BENCHMARK(BM_Heuristic)->Arg(24)->Arg(128)->Arg(517);

void BM_Exact(benchmark::State& state) {
    const auto inst = instance(static_cast<std::size_t>(state.range(0)), 5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(splitopt::solve_sco_exact(inst.model, inst.chain));
    }
}
BENCHMARK(BM_Exact)->Arg(24)->Arg(128)->Arg(517)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
