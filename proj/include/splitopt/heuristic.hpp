#ifndef SPLITOPT_HEURISTIC_HPP
#define SPLITOPT_HEURISTIC_HPP

#include "splitopt/cost.hpp"
#include "splitopt/model.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace splitopt {

// Greedy split optimization: fill each device with consecutive layers while
// its CPU and memory constraints hold, and when the next layer does not fit,
// cut at the cheapest boundary seen on that device and move to the next one.

struct KappaAttempt {
    std::size_t kappa = 0;
    bool solved = false;
    // One iteration per fresh layer examination or per constraint violation.
    std::size_t while_iterations = 0;
    // Every individual layer-vs-device constraint check, including layers
    // handed back to the next device after a cut.
    std::size_t layer_checks = 0;
    std::string failure;
};

struct HeuristicTrace {
    std::vector<KappaAttempt> attempts;
    std::size_t total_iterations = 0;
    bool solved = false;
};

struct KappaHeuristicResult {
    std::optional<SplitSolution> solution;
    KappaAttempt attempt;
};

/// One attempt with at most `kappa` devices. Returns no solution when the
/// greedy fill runs out of devices or would leave a device empty; this does
/// not prove the fixed-kappa problem infeasible.
/// Throws std::invalid_argument unless 1 <= kappa <= min(|D|, |L|).
KappaHeuristicResult solve_sco_kappa_heuristic(const FfnnModel& model, const CutTable& cuts,
                                               const DeviceChain& chain, std::size_t kappa);
KappaHeuristicResult solve_sco_kappa_heuristic(const FfnnModel& model, const DeviceChain& chain,
                                               std::size_t kappa);

struct HeuristicResult {
    std::optional<SplitSolution> solution;
    CostBreakdown cost;
    HeuristicTrace trace;
};

/// Tries kappa = 1, 2, ... and returns the first success, so the answer uses
/// the fewest devices the greedy fill can manage. `kappa_limit` caps the
/// number of devices tried (0 means min(|D|, |L|)).
HeuristicResult solve_sco_heuristic(const FfnnModel& model, const CutTable& cuts,
                                    const DeviceChain& chain, std::size_t kappa_limit = 0);
HeuristicResult solve_sco_heuristic(const FfnnModel& model, const DeviceChain& chain,
                                    std::size_t kappa_limit = 0);

/// Index (into `psi`) of the smallest value; ties go to the largest index.
/// `psi` must be non-empty.
std::size_t argmin_last(std::span<const double> psi);

/// Worst-case iterations of one fixed-kappa attempt: |L| + kappa - 1.
std::size_t kappa_iteration_bound(std::size_t num_layers, std::size_t kappa);

/// Worst-case iterations over kappa = 1..kappa_hat:
/// kappa_hat^2 / 2 + (2|L| - 1) kappa_hat / 2.
std::size_t total_iteration_bound(std::size_t num_layers, std::size_t kappa_hat);

}  // namespace splitopt

#endif
