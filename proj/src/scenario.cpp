#include "splitopt/scenario.hpp"

#include "splitopt/cost.hpp"
#include "splitopt/exact.hpp"
#include "splitopt/heuristic.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace splitopt {

std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t iteration) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (iteration + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

FfnnModel generate_random_model(std::size_t num_layers, double skip_prob, Rng& rng) {
    std::vector<LayerProfile> layers(num_layers);
    for (auto& l : layers) {
        l.cpu_cost = 1.0;
        l.mem_cost = 1.0 - 0.99 * uniform01(rng);  // (0.01, 1]
    }
    TrafficMatrix traffic(num_layers);
    for (std::size_t i = 0; i < num_layers; ++i) {
        const double bits = layers[i].mem_cost;
        if (i + 1 < num_layers) {
            traffic.set(i, i + 1, bits);
        }
        for (std::size_t j = i + 2; j < num_layers; ++j) {
            // draw even when skip_prob is 0 or 1 so cells sharing a seed share
            // their memory costs
            if (uniform01(rng) < skip_prob) {
                traffic.set(i, j, bits);
            }
        }
    }
    return FfnnModel(std::move(layers), std::move(traffic));
}

DeviceChain generate_device_chain(std::size_t num_devices, const FfnnModel& model, double link_rate) {
    if (num_devices < 1) {
        throw std::invalid_argument("need at least one device");
    }
    double total_cpu = 0.0;
    double total_mem = 0.0;
    for (const auto& l : model.layers()) {
        total_cpu += l.cpu_cost;
        total_mem += l.mem_cost;
    }
    std::vector<Device> devices(num_devices);
    for (std::size_t t = 1; t <= num_devices; ++t) {
        const double share = static_cast<double>(num_devices - t + 1);
        devices[t - 1] = {total_cpu / share, total_mem / share};
    }
    return DeviceChain(std::move(devices), std::vector<double>(num_devices - 1, link_rate));
}

double default_link_rate(std::size_t num_devices) {
    return 1.0 / static_cast<double>(num_devices - 1);
}

void validate_config(const ScenarioConfig& config) {
    if (config.num_layers < 1) {
        throw std::invalid_argument("num_layers must be >= 1");
    }
    if (config.num_devices < 2) {
        throw std::invalid_argument("num_devices must be >= 2");
    }
    if (!(config.skip_prob >= 0.0 && config.skip_prob <= 1.0)) {
        throw std::invalid_argument("skip_prob must lie in [0, 1]");
    }
    if (config.iterations < 1) {
        throw std::invalid_argument("iterations must be >= 1");
    }
}

Instance make_instance(const ScenarioConfig& config, std::uint64_t iteration) {
    Rng rng(derive_stream_seed(config.seed, iteration));
    FfnnModel model = generate_random_model(config.num_layers, config.skip_prob, rng);
    const DeviceChain raw = generate_device_chain(config.num_devices, model,
                                                  default_link_rate(config.num_devices));
    // Costs are reported in bandwidth-normalized time: every link is divided
    // by the fastest one. Capacities stay in model units, which leaves every
    // feasibility decision unchanged.
    const auto& rates = raw.link_rates();
    const double fastest = *std::max_element(rates.begin(), rates.end());
    std::vector<double> normalized;
    normalized.reserve(rates.size());
    for (double w : rates) {
        normalized.push_back(w / fastest);
    }
    return {std::move(model), DeviceChain(raw.devices(), std::move(normalized))};
}

FootprintStats footprint_stats(const FfnnModel& model, const SplitSolution& x, std::size_t num_devices) {
    if (x.kappa() > num_devices) {
        throw std::invalid_argument("solution uses " + std::to_string(x.kappa()) + " devices, only " +
                                    std::to_string(num_devices) + " available");
    }
    const auto parts = partition(x, model.num_layers());
    FootprintStats stats;
    stats.mem_share.assign(num_devices, 0.0);
    stats.cpu_share.assign(num_devices, 0.0);

    double total_mem = 0.0;
    double total_cpu = 0.0;
    for (const auto& l : model.layers()) {
        total_mem += l.mem_cost;
        total_cpu += l.cpu_cost;
    }
    const double n = static_cast<double>(model.num_layers());
    for (std::size_t t = 0; t < parts.size(); ++t) {
        double mem = 0.0;
        double cpu = 0.0;
        for (std::size_t i = parts[t].first; i <= parts[t].last; ++i) {
            mem += model.layer(i - 1).mem_cost;
            cpu += model.layer(i - 1).cpu_cost;
        }
        const double count = static_cast<double>(parts[t].size());
        stats.mem_share[t] = total_mem > 0.0 ? mem / total_mem : count / n;
        stats.cpu_share[t] = total_cpu > 0.0 ? cpu / total_cpu : count / n;
    }
    stats.rho_mem = 1.0 - stats.mem_share[0];
    stats.rho_cpu = 1.0 - stats.cpu_share[0];
    return stats;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

InstanceOutcome evaluate_instance(const ScenarioConfig& config, std::uint64_t iteration, bool measure_time) {
    const Instance inst = make_instance(config, iteration);
    InstanceOutcome out;

    auto start = Clock::now();
    const CutTable heuristic_cuts(inst.model);
    const HeuristicResult h = solve_sco_heuristic(inst.model, heuristic_cuts, inst.chain);
    if (measure_time) {
        out.heuristic_seconds = seconds_since(start);
    }

    start = Clock::now();
    const CutTable exact_cuts(inst.model);
    const ExactResult e = solve_sco_exact(inst.model, exact_cuts, inst.chain);
    if (measure_time) {
        out.exact_seconds = seconds_since(start);
    }

    const std::size_t n = inst.model.num_layers();
    const std::size_t kappa_hat = max_splits(inst.model, inst.chain);
    for (const auto& a : h.trace.attempts) {
        if (a.while_iterations > kappa_iteration_bound(n, a.kappa)) {
            out.iteration_bounds_hold = false;
        }
    }
    if (h.trace.total_iterations > total_iteration_bound(n, kappa_hat)) {
        out.iteration_bounds_hold = false;
    }
    out.total_iterations = h.trace.total_iterations;

    if (h.solution) {
        out.heuristic_solved = true;
        out.heuristic_cost = h.cost.total;
        out.heuristic_kappa = h.solution->kappa();
        out.heuristic_feasible = is_feasible(inst.model, inst.chain, *h.solution).feasible;
        out.footprint = footprint_stats(inst.model, *h.solution, inst.chain.num_devices());
    }
    if (e.global) {
        out.exact_solved = true;
        out.exact_cost = e.global->cost;
    }
    return out;
}

ExperimentRecord aggregate(const ScenarioConfig& config, std::vector<InstanceOutcome> outcomes) {
    ExperimentRecord rec;
    rec.config = config;
    rec.outcomes = std::move(outcomes);
    rec.mean_mem_share.assign(config.num_devices, 0.0);
    rec.mean_cpu_share.assign(config.num_devices, 0.0);

    double sum = 0.0;
    double heuristic_time = 0.0;
    double exact_time = 0.0;
    std::size_t heuristic_solved = 0;
    bool first = true;
    for (const auto& o : rec.outcomes) {
        heuristic_time += o.heuristic_seconds;
        exact_time += o.exact_seconds;
        if (!o.iteration_bounds_hold) {
            ++rec.iteration_bound_violations;
        }
        if (!o.exact_solved) {
            ++rec.exact_failures;
        }
        if (!o.heuristic_solved) {
            ++rec.heuristic_failures;
            continue;
        }
        ++heuristic_solved;
        if (!o.heuristic_feasible) {
            ++rec.infeasible_heuristic_solutions;
        }
        rec.mean_rho_mem += o.footprint.rho_mem;
        rec.mean_rho_cpu += o.footprint.rho_cpu;
        for (std::size_t t = 0; t < config.num_devices; ++t) {
            rec.mean_mem_share[t] += o.footprint.mem_share[t];
            rec.mean_cpu_share[t] += o.footprint.cpu_share[t];
        }
        if (!o.exact_solved) {
            continue;
        }
        const double diff = o.heuristic_cost - o.exact_cost;
        sum += diff;
        rec.min_cost_diff = first ? diff : std::min(rec.min_cost_diff, diff);
        first = false;
        ++rec.solved_pairs;
    }

    const double total = static_cast<double>(rec.outcomes.size());
    if (!rec.outcomes.empty()) {
        rec.heuristic_fail_rate = static_cast<double>(rec.heuristic_failures) / total;
        rec.mean_heuristic_time_s = heuristic_time / total;
        rec.mean_exact_time_s = exact_time / total;
    }
    if (heuristic_solved > 0) {
        const double hs = static_cast<double>(heuristic_solved);
        rec.mean_rho_mem /= hs;
        rec.mean_rho_cpu /= hs;
        for (std::size_t t = 0; t < config.num_devices; ++t) {
            rec.mean_mem_share[t] /= hs;
            rec.mean_cpu_share[t] /= hs;
        }
    }
    if (rec.solved_pairs > 0) {
        const double m = static_cast<double>(rec.solved_pairs);
        rec.mean_cost_diff = sum / m;
        if (rec.solved_pairs > 1) {
            double ss = 0.0;
            for (const auto& o : rec.outcomes) {
                if (o.heuristic_solved && o.exact_solved) {
                    const double d = (o.heuristic_cost - o.exact_cost) - rec.mean_cost_diff;
                    ss += d * d;
                }
            }
            rec.ci95_halfwidth = 1.96 * std::sqrt(ss / (m - 1.0)) / std::sqrt(m);
        }
    }
    return rec;
}

std::vector<ExperimentRecord> run_cost_difference_sweep(const std::vector<ScenarioConfig>& configs,
                                                        const SweepOptions& options) {
    std::vector<ExperimentRecord> records;
    records.reserve(configs.size());
    for (const auto& config : configs) {
        validate_config(config);
        std::vector<InstanceOutcome> outcomes(config.iterations);
        const auto count = static_cast<std::int64_t>(config.iterations);
#if defined(_OPENMP)
        const int threads = options.threads > 0 ? options.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 16) num_threads(threads)
#endif
        for (std::int64_t it = 0; it < count; ++it) {
            outcomes[static_cast<std::size_t>(it)] =
                evaluate_instance(config, static_cast<std::uint64_t>(it), options.measure_time);
        }
        records.push_back(aggregate(config, std::move(outcomes)));
    }
    return records;
}

std::vector<ExperimentRecord> run_cost_difference_sweep_serial(const std::vector<ScenarioConfig>& configs,
                                                               const SweepOptions& options) {
    std::vector<ExperimentRecord> records;
    records.reserve(configs.size());
    for (const auto& config : configs) {
        validate_config(config);
        std::vector<InstanceOutcome> outcomes;
        outcomes.reserve(config.iterations);
        for (std::uint64_t it = 0; it < config.iterations; ++it) {
            outcomes.push_back(evaluate_instance(config, it, options.measure_time));
        }
        records.push_back(aggregate(config, std::move(outcomes)));
    }
    return records;
}

}  // namespace splitopt
