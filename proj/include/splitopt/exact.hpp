#ifndef SPLITOPT_EXACT_HPP
#define SPLITOPT_EXACT_HPP

#include "splitopt/cost.hpp"
#include "splitopt/model.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace splitopt {

struct KappaOptimum {
    SplitSolution solution;
    double cost = 0.0;
};

struct GlobalOptimum {
    std::size_t kappa = 0;
    SplitSolution solution;
    double cost = 0.0;
};

struct ExactResult {
    std::vector<std::optional<KappaOptimum>> per_kappa;  // entry k-1 holds kappa = k
    std::optional<GlobalOptimum> global;
};

/// Minimum-cost feasible split using exactly `kappa` devices, by dynamic
/// programming over (device, last splitting point). O(kappa |L|^2).
/// Among equal-cost optima the smaller predecessor split wins.
/// Throws std::invalid_argument unless 1 <= kappa <= min(|D|, |L|).
std::optional<KappaOptimum> solve_sco_kappa_exact(const FfnnModel& model, const CutTable& cuts,
                                                  const DeviceChain& chain, std::size_t kappa);
std::optional<KappaOptimum> solve_sco_kappa_exact(const FfnnModel& model, const DeviceChain& chain,
                                                  std::size_t kappa);

/// Solves every kappa up to min(|D|, |L|) (or `kappa_limit` when non-zero)
/// and keeps the cheapest, preferring fewer devices on ties.
ExactResult solve_sco_exact(const FfnnModel& model, const CutTable& cuts, const DeviceChain& chain,
                            std::size_t kappa_limit = 0);
ExactResult solve_sco_exact(const FfnnModel& model, const DeviceChain& chain,
                            std::size_t kappa_limit = 0);

class EnumerationBudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultEnumerationBudget = 1'000'000;

/// C(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// Brute force over all C(|L|-1, kappa-1) split vectors, each checked with
/// is_feasible and costed straight from the traffic matrix. Reference for the
/// dynamic program; throws EnumerationBudgetExceeded above `budget` vectors.
std::optional<KappaOptimum> enumerate_oracle(const FfnnModel& model, const DeviceChain& chain,
                                             std::size_t kappa,
                                             std::uint64_t budget = kDefaultEnumerationBudget);

/// Cost of x evaluated as the literal double sum over partitions, with no
/// precomputation. Independent of CutTable.
double objective_direct(const FfnnModel& model, const DeviceChain& chain, const SplitSolution& x);

}  // namespace splitopt

#endif
