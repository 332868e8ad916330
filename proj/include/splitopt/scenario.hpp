#ifndef SPLITOPT_SCENARIO_HPP
#define SPLITOPT_SCENARIO_HPP

#include "splitopt/model.hpp"

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace splitopt {

using Rng = std::mt19937_64;

/// Seed of the independent stream used by one Monte Carlo iteration.
/// SplitMix64 over (seed, iteration), so iterations can run in any order.
std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t iteration);

/// Uniform on [0, 1) from the top 53 bits of one draw; identical on every
/// standard library, unlike std::uniform_real_distribution.
double uniform01(Rng& rng);

/// Random layer chain: every layer costs 1 CPU unit, memory is uniform on
/// (0.01, 1]. Layer i sends c_i^mem bits to layer i+1 always and to each
/// later layer with probability `skip_prob`.
FfnnModel generate_random_model(std::size_t num_layers, double skip_prob, Rng& rng);

/// Device t (1-based) of n gets total_model_cost / (n - t + 1) of each
/// resource, so the last device can hold the whole model and the first holds
/// 1/n of it. Every link runs at `link_rate`.
DeviceChain generate_device_chain(std::size_t num_devices, const FfnnModel& model, double link_rate);

/// Link rate of the random instances: 1 / (|D| - 1).
double default_link_rate(std::size_t num_devices);

struct ScenarioConfig {
    std::size_t num_layers = 8;
    std::size_t num_devices = 2;
    double skip_prob = 0.0;
    std::size_t iterations = 1000;
    std::uint64_t seed = 1;
};

/// Throws std::invalid_argument describing the first bad field.
void validate_config(const ScenarioConfig& config);

struct Instance {
    FfnnModel model;
    DeviceChain chain;
};

/// Instance number `iteration` of a sweep cell.
Instance make_instance(const ScenarioConfig& config, std::uint64_t iteration);

struct FootprintStats {
    std::vector<double> mem_share;  // one entry per device of the chain
    std::vector<double> cpu_share;
    double rho_mem = 0.0;           // 1 - mem_share[0]
    double rho_cpu = 0.0;
};

/// Fraction of the model's memory and CPU cost hosted by each of
/// `num_devices` devices. Throws std::invalid_argument if the solution uses
/// more devices than that or covers a different layer count. A resource whose
/// total cost is zero is shared by layer count instead.
FootprintStats footprint_stats(const FfnnModel& model, const SplitSolution& x, std::size_t num_devices);

struct InstanceOutcome {
    bool heuristic_solved = false;
    bool exact_solved = false;
    double heuristic_cost = 0.0;
    double exact_cost = 0.0;
    double heuristic_seconds = 0.0;
    double exact_seconds = 0.0;
    std::size_t heuristic_kappa = 0;
    std::size_t total_iterations = 0;
    bool heuristic_feasible = true;
    bool iteration_bounds_hold = true;
    FootprintStats footprint;  // of the heuristic solution
};

/// Generates, solves with both solvers and checks one instance.
InstanceOutcome evaluate_instance(const ScenarioConfig& config, std::uint64_t iteration, bool measure_time);

struct ExperimentRecord {
    ScenarioConfig config;
    std::vector<InstanceOutcome> outcomes;  // index = iteration

    std::size_t solved_pairs = 0;           // both solvers returned
    std::size_t heuristic_failures = 0;
    std::size_t exact_failures = 0;
    double mean_cost_diff = 0.0;
    double ci95_halfwidth = 0.0;
    double min_cost_diff = 0.0;
    double heuristic_fail_rate = 0.0;
    double mean_heuristic_time_s = 0.0;
    double mean_exact_time_s = 0.0;
    double mean_rho_mem = 0.0;
    double mean_rho_cpu = 0.0;
    std::vector<double> mean_mem_share;
    std::vector<double> mean_cpu_share;
    std::size_t infeasible_heuristic_solutions = 0;
    std::size_t iteration_bound_violations = 0;
};

/// Folds per-iteration outcomes into the record's aggregates, in iteration
/// order. The CI half-width is 1.96 * stddev / sqrt(n) over instances where
/// both solvers returned.
ExperimentRecord aggregate(const ScenarioConfig& config, std::vector<InstanceOutcome> outcomes);

struct SweepOptions {
    bool measure_time = true;
    int threads = 0;  // 0: OpenMP default
};

/// Runs every cell, fanning iterations out over OpenMP threads.
std::vector<ExperimentRecord> run_cost_difference_sweep(const std::vector<ScenarioConfig>& configs,
                                                        const SweepOptions& options = {});

/// Single-threaded reference for run_cost_difference_sweep; results are
/// identical apart from wall-times.
std::vector<ExperimentRecord> run_cost_difference_sweep_serial(const std::vector<ScenarioConfig>& configs,
                                                               const SweepOptions& options = {});

}  // namespace splitopt

#endif
