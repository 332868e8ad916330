#include "splitopt/exact.hpp"

#include <algorithm>
#include <limits>

namespace splitopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_kappa(const FfnnModel& model, const DeviceChain& chain, std::size_t kappa) {
    const std::size_t kappa_hat = max_splits(model, chain);
    if (kappa < 1 || kappa > kappa_hat) {
        throw std::invalid_argument("kappa " + std::to_string(kappa) + " outside [1, " +
                                    std::to_string(kappa_hat) + "]");
    }
}

}  // namespace

std::optional<KappaOptimum> solve_sco_kappa_exact(const FfnnModel& model, const CutTable& cuts,
                                                  const DeviceChain& chain, std::size_t kappa) {
    check_kappa(model, chain, kappa);
    const std::size_t n = model.num_layers();
    const auto& layers = model.layers();

    // best[t][p]: cheapest placement of layers 1..p on devices 1..t+1 with
    // device t+1 ending at layer p; cost includes boundaries before device t+1.
    std::vector<std::vector<double>> best(kappa, std::vector<double>(n + 1, kInf));
    std::vector<std::vector<std::size_t>> parent(kappa, std::vector<std::size_t>(n + 1, 0));

    for (std::size_t t = 0; t < kappa; ++t) {
        const Device& d = chain.device(t);
        for (std::size_t q = (t == 0 ? 0 : t); q < n; ++q) {
            double base = 0.0;
            if (t > 0) {
                if (best[t - 1][q] == kInf) {
                    continue;
                }
                base = best[t - 1][q] + cuts.cut(q) / chain.link_rate(t - 1);
            }
            double mem = 0.0;
            for (std::size_t p = q + 1; p <= n; ++p) {
                const auto& l = layers[p - 1];
                mem += l.mem_cost;
                if (exceeds(l.cpu_cost, d.cpu_capacity) || exceeds(mem, d.mem_capacity)) {
                    break;
                }
                if (base < best[t][p]) {
                    best[t][p] = base;
                    parent[t][p] = q;
                }
            }
            if (t == 0) {
                break;  // device 1 always starts at layer 1
            }
        }
    }

    if (best[kappa - 1][n] == kInf) {
        return std::nullopt;
    }
    std::vector<std::size_t> points(kappa);
    std::size_t p = n;
    for (std::size_t t = kappa; t-- > 0;) {
        points[t] = p;
        p = parent[t][p];
    }
    return KappaOptimum{SplitSolution(std::move(points), n), best[kappa - 1][n]};
}

std::optional<KappaOptimum> solve_sco_kappa_exact(const FfnnModel& model, const DeviceChain& chain,
                                                  std::size_t kappa) {
    return solve_sco_kappa_exact(model, CutTable(model), chain, kappa);
}

ExactResult solve_sco_exact(const FfnnModel& model, const CutTable& cuts, const DeviceChain& chain,
                            std::size_t kappa_limit) {
    std::size_t kappa_hat = max_splits(model, chain);
    if (kappa_limit != 0 && kappa_limit < kappa_hat) {
        kappa_hat = kappa_limit;
    }
    ExactResult result;
    result.per_kappa.reserve(kappa_hat);
    for (std::size_t kappa = 1; kappa <= kappa_hat; ++kappa) {
        auto opt = solve_sco_kappa_exact(model, cuts, chain, kappa);
        if (opt && (!result.global || opt->cost < result.global->cost)) {
            result.global = GlobalOptimum{kappa, opt->solution, opt->cost};
        }
        result.per_kappa.push_back(std::move(opt));
    }
    return result;
}

ExactResult solve_sco_exact(const FfnnModel& model, const DeviceChain& chain, std::size_t kappa_limit) {
    return solve_sco_exact(model, CutTable(model), chain, kappa_limit);
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) {
        return 0;
    }
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        // r * (n - k + i) / i stays integral at every step
        const std::uint64_t num = n - k + i;
        if (r > std::numeric_limits<std::uint64_t>::max() / num) {
            return std::numeric_limits<std::uint64_t>::max();
        }
        r = r * num / i;
    }
    return r;
}

double objective_direct(const FfnnModel& model, const DeviceChain& chain, const SplitSolution& x) {
    const auto parts = partition(x, model.num_layers());
    const auto& b = model.traffic();
    double total = 0.0;
    for (std::size_t t = 0; t + 1 < parts.size(); ++t) {
        double bits = 0.0;
        for (std::size_t h = 0; h <= t; ++h) {
            for (std::size_t i = parts[h].first; i <= parts[h].last; ++i) {
                for (std::size_t u = t + 1; u < parts.size(); ++u) {
                    for (std::size_t j = parts[u].first; j <= parts[u].last; ++j) {
                        bits += b.at(i - 1, j - 1);
                    }
                }
            }
        }
        total += bits / chain.link_rate(t);
    }
    return total;
}

std::optional<KappaOptimum> enumerate_oracle(const FfnnModel& model, const DeviceChain& chain,
                                             std::size_t kappa, std::uint64_t budget) {
    check_kappa(model, chain, kappa);
    const std::size_t n = model.num_layers();
    const std::uint64_t count = binomial(n - 1, kappa - 1);
    if (count > budget) {
        throw EnumerationBudgetExceeded("C(" + std::to_string(n - 1) + ", " +
                                        std::to_string(kappa - 1) + ") = " + std::to_string(count) +
                                        " split vectors exceed the budget of " +
                                        std::to_string(budget));
    }

    std::optional<KappaOptimum> best;
    // inner points x_1..x_{k-1} as a lexicographic combination of {1..n-1}
    std::vector<std::size_t> inner(kappa - 1);
    for (std::size_t t = 0; t < inner.size(); ++t) {
        inner[t] = t + 1;
    }
    for (;;) {
        std::vector<std::size_t> points(inner);
        points.push_back(n);
        SplitSolution x(std::move(points), n);
        if (is_feasible(model, chain, x).feasible) {
            const double cost = objective_direct(model, chain, x);
            if (!best || cost < best->cost) {
                best = KappaOptimum{std::move(x), cost};
            }
        }
        // next combination
        std::size_t t = inner.size();
        while (t > 0 && inner[t - 1] == n - 1 - (inner.size() - t)) {
            --t;
        }
        if (t == 0) {
            break;
        }
        ++inner[t - 1];
        for (std::size_t u = t; u < inner.size(); ++u) {
            inner[u] = inner[u - 1] + 1;
        }
    }
    return best;
}

}  // namespace splitopt
