#ifndef SPLITOPT_COST_HPP
#define SPLITOPT_COST_HPP

#include "splitopt/model.hpp"

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace splitopt {

/// Traffic crossing every boundary position of a model.
///
/// cut(p) is the sum of b_ij over all pairs i <= p < j (1-based), i.e. what
/// leaves layers 1..p for layers p+1..|L|. Built once in O(|L|^2) using only
/// additions of non-negative terms, so every entry is >= 0 and cut(|L|) == 0.
class CutTable {
public:
    explicit CutTable(const FfnnModel& model);

    std::size_t num_layers() const { return cut_.size() - 1; }
    /// 1 <= p <= |L|; throws std::out_of_range otherwise.
    double cut(std::size_t p) const;

private:
    std::vector<double> cut_;  // index p, cut_[0] unused
};

/// Shorthand for a one-off query. Prefer CutTable when querying repeatedly.
double cut_traffic(const FfnnModel& model, std::size_t p);

struct CostBreakdown {
    std::vector<double> boundary_terms;  // psi for boundaries 1..k-1
    double total = 0.0;
};

/// Transfer time of x: sum over t < k of cut(x_t) / w_{t,t+1}, accumulated in
/// ascending t. Throws std::invalid_argument if x uses more devices than the
/// chain has or was built for a different layer count.
CostBreakdown objective(const CutTable& cuts, const DeviceChain& chain, const SplitSolution& x);
CostBreakdown objective(const FfnnModel& model, const DeviceChain& chain, const SplitSolution& x);

/// Loads within this fraction of a capacity still fit, so that e.g. three
/// layers of 0.2 fit a capacity of 0.6 despite rounding.
inline constexpr double kCapacityRelTolerance = 1e-12;

/// The one capacity comparison used by every solver and checker.
inline bool exceeds(double load, double capacity) {
    return load > capacity + kCapacityRelTolerance * std::abs(capacity);
}

struct FeasibilityReport {
    bool feasible = true;
    // First violation, 1-based device index; empty when feasible.
    std::size_t device = 0;
    std::string constraint;
    std::string message;
    // Per-device loads, one entry per hosted partition.
    std::vector<double> max_cpu;
    std::vector<double> mem_used;
};

/// CPU (max layer cost <= capacity) and memory (sum of layer costs <=
/// capacity) check for every device hosting a partition of x.
FeasibilityReport is_feasible(const FfnnModel& model, const DeviceChain& chain, const SplitSolution& x);

/// Whether layers [first, last] (1-based, inclusive) fit on `device`. Memory
/// is accumulated from `first` upwards, the same order the solvers use, so
/// feasibility verdicts agree bit for bit.
bool segment_fits(const FfnnModel& model, const Device& device, std::size_t first, std::size_t last);

}  // namespace splitopt

#endif
