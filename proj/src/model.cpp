#include "splitopt/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace splitopt {

FfnnModel::FfnnModel(std::vector<LayerProfile> layers, TrafficMatrix traffic)
    : layers_(std::move(layers)), traffic_(std::move(traffic)) {
    if (traffic_.size() != layers_.size()) {
        throw std::invalid_argument("traffic matrix is " + std::to_string(traffic_.size()) + "x" +
                                    std::to_string(traffic_.size()) + " but model has " +
                                    std::to_string(layers_.size()) + " layers");
    }
}

DeviceChain::DeviceChain(std::vector<Device> devices, std::vector<double> link_rate)
    : devices_(std::move(devices)), link_rate_(std::move(link_rate)) {
    if (devices_.empty()) {
        throw std::invalid_argument("device chain needs at least one device");
    }
    if (link_rate_.size() + 1 != devices_.size()) {
        throw std::invalid_argument("a chain of " + std::to_string(devices_.size()) +
                                    " devices needs " + std::to_string(devices_.size() - 1) +
                                    " link rates, got " + std::to_string(link_rate_.size()));
    }
}

SplitSolution::SplitSolution(std::vector<std::size_t> points, std::size_t num_layers)
    : points_(std::move(points)) {
    if (points_.empty()) {
        throw std::invalid_argument("split solution needs at least one splitting point");
    }
    if (points_.front() < 1) {
        throw std::invalid_argument("splitting points are 1-based layer indices");
    }
    for (std::size_t t = 1; t < points_.size(); ++t) {
        if (points_[t] <= points_[t - 1]) {
            throw std::invalid_argument("splitting points must be strictly increasing (x_" +
                                        std::to_string(t) + " = " + std::to_string(points_[t - 1]) +
                                        ", x_" + std::to_string(t + 1) + " = " +
                                        std::to_string(points_[t]) + ")");
        }
    }
    if (points_.back() != num_layers) {
        throw std::invalid_argument("last splitting point must equal the number of layers (" +
                                    std::to_string(num_layers) + "), got " +
                                    std::to_string(points_.back()));
    }
}

PartitionAssignment partition(const SplitSolution& x, std::size_t num_layers) {
    if (x.num_layers() != num_layers) {
        throw std::invalid_argument("solution ends at layer " + std::to_string(x.num_layers()) +
                                    ", model has " + std::to_string(num_layers));
    }
    PartitionAssignment out;
    out.reserve(x.kappa());
    std::size_t prev = 0;
    for (std::size_t p : x.points()) {
        out.push_back({prev + 1, p});
        prev = p;
    }
    return out;
}

std::size_t max_splits(const FfnnModel& model, const DeviceChain& chain) {
    return std::min(model.num_layers(), chain.num_devices());
}

namespace {

bool in_unit(double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; }

}  // namespace

ValidationReport validate_model(const FfnnModel& model) {
    ValidationReport report;
    const std::size_t n = model.num_layers();
    if (n == 0) {
        report.violations.emplace_back("model has no layers");
        return report;
    }
    for (std::size_t i = 0; i < n; ++i) {
        const auto& l = model.layer(i);
        if (!in_unit(l.cpu_cost)) {
            report.violations.push_back("cpu_cost of layer " + std::to_string(i + 1) +
                                        " outside [0,1]");
        }
        if (!(std::isfinite(l.mem_cost) && l.mem_cost > 0.0 && l.mem_cost <= 1.0)) {
            report.violations.push_back("mem_cost of layer " + std::to_string(i + 1) +
                                        " outside (0,1]");
        }
    }
    const auto& b = model.traffic();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double v = b.at(i, j);
            const std::string where = "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
            if (!std::isfinite(v)) {
                report.violations.push_back("non-finite traffic at " + where);
            } else if (i == j && v != 0.0) {
                report.violations.push_back("diagonal traffic at " + where);
            } else if (i > j && v != 0.0) {
                report.violations.push_back("lower-triangular traffic at " + where);
            } else if (v < 0.0) {
                report.violations.push_back("negative traffic at " + where);
            }
        }
    }
    return report;
}

ValidationReport validate_chain(const DeviceChain& chain, bool require_normalized) {
    ValidationReport report;
    if (chain.num_devices() == 0) {
        report.violations.emplace_back("chain has no devices");
        return report;
    }
    for (std::size_t t = 0; t < chain.num_devices(); ++t) {
        const auto& d = chain.device(t);
        const std::string name = "device " + std::to_string(t + 1);
        for (auto [value, what] : {std::pair{d.cpu_capacity, "cpu_capacity"},
                                   std::pair{d.mem_capacity, "mem_capacity"}}) {
            if (!std::isfinite(value) || value < 0.0) {
                report.violations.push_back(name + " has invalid " + what);
            } else if (require_normalized && value > 1.0) {
                report.violations.push_back(name + " " + what + " outside [0,1]");
            } else if (value == 0.0) {
                report.warnings.push_back(name + " has zero " + what + " and can host no layer");
            }
        }
    }
    for (std::size_t t = 0; t < chain.link_rates().size(); ++t) {
        const double w = chain.link_rate(t);
        if (!std::isfinite(w) || w <= 0.0) {
            report.violations.push_back("link " + std::to_string(t + 1) + "-" +
                                        std::to_string(t + 2) + " must have a positive rate");
        }
    }
    return report;
}

}  // namespace splitopt
