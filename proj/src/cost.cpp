#include "splitopt/cost.hpp"

#include <algorithm>
#include <stdexcept>

namespace splitopt {

CutTable::CutTable(const FfnnModel& model) : cut_(model.num_layers() + 1, 0.0) {
    const std::size_t n = model.num_layers();
    const auto& b = model.traffic();
    // outgoing[i] holds sum_{j > p} b_ij for the current p, walking p downwards.
    std::vector<double> outgoing(n, 0.0);
    for (std::size_t p = n; p-- > 1;) {
        // column p (0-based) joins the "after the boundary" side
        for (std::size_t i = 0; i < p; ++i) {
            outgoing[i] += b.at(i, p);
        }
        double total = 0.0;
        for (std::size_t i = 0; i < p; ++i) {
            total += outgoing[i];
        }
        cut_[p] = total;
    }
}

double CutTable::cut(std::size_t p) const {
    if (p < 1 || p >= cut_.size()) {
        throw std::out_of_range("boundary position " + std::to_string(p) + " outside [1, " +
                                std::to_string(num_layers()) + "]");
    }
    return cut_[p];
}

double cut_traffic(const FfnnModel& model, std::size_t p) { return CutTable(model).cut(p); }

CostBreakdown objective(const CutTable& cuts, const DeviceChain& chain, const SplitSolution& x) {
    if (x.kappa() > chain.num_devices()) {
        throw std::invalid_argument("solution uses " + std::to_string(x.kappa()) +
                                    " devices, chain has " + std::to_string(chain.num_devices()));
    }
    if (x.num_layers() != cuts.num_layers()) {
        throw std::invalid_argument("solution does not cover the model's layers");
    }
    CostBreakdown out;
    const auto& points = x.points();
    out.boundary_terms.reserve(points.size() - 1);
    for (std::size_t t = 0; t + 1 < points.size(); ++t) {
        const double term = cuts.cut(points[t]) / chain.link_rate(t);
        out.boundary_terms.push_back(term);
        out.total += term;
    }
    return out;
}

CostBreakdown objective(const FfnnModel& model, const DeviceChain& chain, const SplitSolution& x) {
    return objective(CutTable(model), chain, x);
}

bool segment_fits(const FfnnModel& model, const Device& device, std::size_t first, std::size_t last) {
    double mem = 0.0;
    for (std::size_t i = first; i <= last; ++i) {
        const auto& l = model.layer(i - 1);
        mem += l.mem_cost;
        if (exceeds(l.cpu_cost, device.cpu_capacity) || exceeds(mem, device.mem_capacity)) {
            return false;
        }
    }
    return true;
}

FeasibilityReport is_feasible(const FfnnModel& model, const DeviceChain& chain, const SplitSolution& x) {
    if (x.kappa() > chain.num_devices()) {
        throw std::invalid_argument("solution uses " + std::to_string(x.kappa()) +
                                    " devices, chain has " + std::to_string(chain.num_devices()));
    }
    FeasibilityReport report;
    const auto parts = partition(x, model.num_layers());
    for (std::size_t t = 0; t < parts.size(); ++t) {
        double max_cpu = 0.0;
        double mem = 0.0;
        for (std::size_t i = parts[t].first; i <= parts[t].last; ++i) {
            max_cpu = std::max(max_cpu, model.layer(i - 1).cpu_cost);
            mem += model.layer(i - 1).mem_cost;
        }
        report.max_cpu.push_back(max_cpu);
        report.mem_used.push_back(mem);
        if (!report.feasible) {
            continue;
        }
        const auto& d = chain.device(t);
        if (exceeds(max_cpu, d.cpu_capacity)) {
            report.feasible = false;
            report.device = t + 1;
            report.constraint = "cpu";
            report.message = "device " + std::to_string(t + 1) + ": layer cpu cost " +
                             std::to_string(max_cpu) + " exceeds capacity " +
                             std::to_string(d.cpu_capacity);
        } else if (exceeds(mem, d.mem_capacity)) {
            report.feasible = false;
            report.device = t + 1;
            report.constraint = "mem";
            report.message = "device " + std::to_string(t + 1) + ": memory " + std::to_string(mem) +
                             " exceeds capacity " + std::to_string(d.mem_capacity);
        }
    }
    return report;
}

}  // namespace splitopt
