#ifndef SPLITOPT_MODEL_HPP
#define SPLITOPT_MODEL_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace splitopt {

// Layers and devices are stored 0-based; everything that leaves the library
// (splitting points, diagnostics, files) speaks 1-based indices.

struct LayerProfile {
    double cpu_cost = 0.0;
    double mem_cost = 0.0;
    std::string name;  // optional label, carried through files and reports

    bool operator==(const LayerProfile&) const = default;
};

/// Dense |L| x |L| matrix of bits sent from layer i to layer j (row-major).
class TrafficMatrix {
public:
    TrafficMatrix() = default;
    explicit TrafficMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

    std::size_t size() const { return n_; }
    double at(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
    void set(std::size_t i, std::size_t j, double bits) { data_[i * n_ + j] = bits; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * n_, n_}; }

    bool operator==(const TrafficMatrix&) const = default;

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

class FfnnModel {
public:
    FfnnModel() = default;
    /// Throws std::invalid_argument if the traffic matrix is not |layers| x |layers|.
    FfnnModel(std::vector<LayerProfile> layers, TrafficMatrix traffic);

    std::size_t num_layers() const { return layers_.size(); }
    const std::vector<LayerProfile>& layers() const { return layers_; }
    const LayerProfile& layer(std::size_t i) const { return layers_[i]; }
    const TrafficMatrix& traffic() const { return traffic_; }

    bool operator==(const FfnnModel&) const = default;

private:
    std::vector<LayerProfile> layers_;
    TrafficMatrix traffic_;
};

struct Device {
    double cpu_capacity = 0.0;
    double mem_capacity = 0.0;

    bool operator==(const Device&) const = default;
};

/// Devices d_1..d_n in pipeline order. Only consecutive devices are linked;
/// link_rate[t] is the bandwidth between device t and t+1.
class DeviceChain {
public:
    DeviceChain() = default;
    /// Throws std::invalid_argument unless link_rate.size() == devices.size() - 1.
    DeviceChain(std::vector<Device> devices, std::vector<double> link_rate);

    std::size_t num_devices() const { return devices_.size(); }
    const std::vector<Device>& devices() const { return devices_; }
    const Device& device(std::size_t t) const { return devices_[t]; }
    const std::vector<double>& link_rates() const { return link_rate_; }
    double link_rate(std::size_t t) const { return link_rate_[t]; }

    bool operator==(const DeviceChain&) const = default;

private:
    std::vector<Device> devices_;
    std::vector<double> link_rate_;
};

/// Splitting points x_1 < ... < x_k = |L|, each the 1-based index of the last
/// layer hosted by device t. Equivalently, x_t is the number of layers placed
/// on devices 1..t.
class SplitSolution {
public:
    SplitSolution() = default;
    /// Throws std::invalid_argument unless points are strictly increasing,
    /// start at >= 1 and end at num_layers.
    SplitSolution(std::vector<std::size_t> points, std::size_t num_layers);

    const std::vector<std::size_t>& points() const { return points_; }
    std::size_t kappa() const { return points_.size(); }
    std::size_t num_layers() const { return points_.empty() ? 0 : points_.back(); }

    bool operator==(const SplitSolution&) const = default;

private:
    std::vector<std::size_t> points_;
};

/// Inclusive 1-based layer range hosted by one device.
struct LayerRange {
    std::size_t first = 0;
    std::size_t last = 0;

    std::size_t size() const { return last - first + 1; }
    bool operator==(const LayerRange&) const = default;
};

using PartitionAssignment = std::vector<LayerRange>;

PartitionAssignment partition(const SplitSolution& x, std::size_t num_layers);

/// min(|D|, |L|)
std::size_t max_splits(const FfnnModel& model, const DeviceChain& chain);

struct ValidationReport {
    std::vector<std::string> violations;
    std::vector<std::string> warnings;

    bool ok() const { return violations.empty(); }
};

ValidationReport validate_model(const FfnnModel& model);

/// Structural checks only unless `require_normalized`, which additionally
/// demands capacities in [0, 1].
ValidationReport validate_chain(const DeviceChain& chain, bool require_normalized = true);

}  // namespace splitopt

#endif
