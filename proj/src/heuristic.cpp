#include "splitopt/heuristic.hpp"

#include <limits>
#include <stdexcept>

namespace splitopt {

std::size_t argmin_last(std::span<const double> psi) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < psi.size(); ++i) {
        if (psi[i] <= psi[best]) {
            best = i;
        }
    }
    return best;
}

std::size_t kappa_iteration_bound(std::size_t num_layers, std::size_t kappa) {
    return num_layers + kappa - 1;
}

std::size_t total_iteration_bound(std::size_t num_layers, std::size_t kappa_hat) {
    // kappa_hat * (kappa_hat + 2|L| - 1) is always even
    return kappa_hat * (kappa_hat + 2 * num_layers - 1) / 2;
}

namespace {

constexpr double kUnset = std::numeric_limits<double>::infinity();

class GreedyFill {
public:
    GreedyFill(const FfnnModel& model, const CutTable& cuts, const DeviceChain& chain, std::size_t kappa)
        : model_(model), cuts_(cuts), chain_(chain), kappa_(kappa),
          psi_(model.num_layers() + 1, kUnset) {
        attempt_.kappa = kappa;
    }

    KappaHeuristicResult run() {
        const std::size_t n = model_.num_layers();
        std::size_t next = 1;  // next layer never examined before
        while (next <= n) {
            ++attempt_.while_iterations;
            if (accept(next)) {
                ++next;
                continue;
            }
            // `violator` is the first layer the current device rejected
            std::size_t violator = next;
            for (;;) {
                if (last_ < first_) {
                    return fail("device " + std::to_string(device_ + 1) +
                                " cannot host layer " + std::to_string(violator));
                }
                if (device_ + 1 >= kappa_) {
                    return fail("layer " + std::to_string(violator) + " does not fit on device " +
                                std::to_string(device_ + 1) + " and no device is left");
                }
                advance_device();
                // layers already examined past the cut move to the new device
                std::size_t q = first_;
                while (q < next && accept(q)) {
                    ++q;
                }
                if (q == next) {
                    break;
                }
                ++attempt_.while_iterations;
                violator = q;
            }
        }
        points_.push_back(n);
        attempt_.solved = true;
        return {SplitSolution(std::move(points_), n), attempt_};
    }

private:
    bool accept(std::size_t layer) {
        ++attempt_.layer_checks;
        const auto& l = model_.layer(layer - 1);
        const auto& d = chain_.device(device_);
        const double mem = mem_ + l.mem_cost;
        if (exceeds(l.cpu_cost, d.cpu_capacity) || exceeds(mem, d.mem_capacity)) {
            return false;
        }
        mem_ = mem;
        last_ = layer;
        if (device_ + 1 < kappa_) {
            psi_[layer] = cuts_.cut(layer) / chain_.link_rate(device_);
        }
        return true;
    }

    void advance_device() {
        const std::span<const double> hosted(psi_.data() + first_, last_ - first_ + 1);
        const std::size_t cut_at = first_ + argmin_last(hosted);
        points_.push_back(cut_at);
        for (std::size_t i = first_; i <= last_; ++i) {
            psi_[i] = kUnset;
        }
        ++device_;
        first_ = cut_at + 1;
        last_ = cut_at;
        mem_ = 0.0;
    }

    KappaHeuristicResult fail(std::string why) {
        attempt_.solved = false;
        attempt_.failure = std::move(why);
        return {std::nullopt, attempt_};
    }

    const FfnnModel& model_;
    const CutTable& cuts_;
    const DeviceChain& chain_;
    const std::size_t kappa_;

    std::vector<double> psi_;  // indexed by 1-based layer
    std::vector<std::size_t> points_;
    std::size_t device_ = 0;   // 0-based
    std::size_t first_ = 1;    // first layer of the current device
    std::size_t last_ = 0;     // last accepted layer, first_ - 1 when empty
    double mem_ = 0.0;
    KappaAttempt attempt_;
};

}  // namespace

KappaHeuristicResult solve_sco_kappa_heuristic(const FfnnModel& model, const CutTable& cuts,
                                               const DeviceChain& chain, std::size_t kappa) {
    const std::size_t kappa_hat = max_splits(model, chain);
    if (kappa < 1 || kappa > kappa_hat) {
        throw std::invalid_argument("kappa " + std::to_string(kappa) + " outside [1, " +
                                    std::to_string(kappa_hat) + "]");
    }
    if (cuts.num_layers() != model.num_layers()) {
        throw std::invalid_argument("cut table built for a different model");
    }
    return GreedyFill(model, cuts, chain, kappa).run();
}

KappaHeuristicResult solve_sco_kappa_heuristic(const FfnnModel& model, const DeviceChain& chain,
                                               std::size_t kappa) {
    return solve_sco_kappa_heuristic(model, CutTable(model), chain, kappa);
}

HeuristicResult solve_sco_heuristic(const FfnnModel& model, const CutTable& cuts,
                                    const DeviceChain& chain, std::size_t kappa_limit) {
    std::size_t kappa_hat = max_splits(model, chain);
    if (kappa_limit != 0 && kappa_limit < kappa_hat) {
        kappa_hat = kappa_limit;
    }
    HeuristicResult result;
    for (std::size_t kappa = 1; kappa <= kappa_hat; ++kappa) {
        auto attempt = solve_sco_kappa_heuristic(model, cuts, chain, kappa);
        result.trace.attempts.push_back(attempt.attempt);
        result.trace.total_iterations += attempt.attempt.while_iterations;
        if (attempt.solution) {
            result.cost = objective(cuts, chain, *attempt.solution);
            result.solution = std::move(attempt.solution);
            result.trace.solved = true;
            break;
        }
    }
    return result;
}

HeuristicResult solve_sco_heuristic(const FfnnModel& model, const DeviceChain& chain,
                                    std::size_t kappa_limit) {
    return solve_sco_heuristic(model, CutTable(model), chain, kappa_limit);
}

}  // namespace splitopt
