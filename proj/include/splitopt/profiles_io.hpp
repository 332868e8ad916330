#ifndef SPLITOPT_PROFILES_IO_HPP
#define SPLITOPT_PROFILES_IO_HPP

#include "splitopt/model.hpp"
#include "splitopt/scenario.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace splitopt {

// On-disk formats, all JSON (UTF-8, decimal numbers, 1-based layer indices):
//
//   profile  {"format": "splitopt-profile", "version": 1,
//             "layers": [{"name", "trainable_params",
//                         "successors": [{"to": <name>, "bits": <number> | "derive"}]}]}
//   model    {"format": "splitopt-model", "version": 1,
//             "layers": [{"name", "cpu_cost", "mem_cost"}],
//             "edges": [{"from", "to", "bits"}]}
//   chain    {"format": "splitopt-chain", "version": 1,
//             "devices": [{"cpu_capacity", "mem_capacity"}], "links": [{"rate"}]}
//   sweep    {"format": "splitopt-sweep", "version": 1,
//             "runs": [{"num_layers", "num_devices", "skip_prob", "iterations", "seed"}],
//             "grid": {"num_layers": [...], "num_devices": [...], "skip_prob": [...],
//                      "iterations", "seed"}}
//
// Layer order in a file is authoritative. Edges must point forward.

/// Malformed or semantically invalid input file.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A file could not be read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RawEdge {
    std::string target;
    std::optional<double> bits;  // empty: derive from the source layer's memory cost
};

struct RawLayerProfile {
    std::string name;
    std::uint64_t trainable_params = 0;
    std::vector<RawEdge> successors;
};

struct NormalizationFactors {
    double cpu_factor = 1.0;        // largest device CPU capacity
    double mem_factor = 1.0;        // largest device memory capacity
    double bandwidth_factor = 1.0;  // largest link rate
};

struct NormalizedInstance {
    FfnnModel model;
    DeviceChain chain;
    NormalizationFactors factors;
};

std::vector<RawLayerProfile> parse_profile(const std::string& text);
std::vector<RawLayerProfile> load_profile(const std::filesystem::path& path);

/// Divides CPU quantities by the largest device CPU capacity, memory and
/// traffic by the largest memory capacity, and link rates by the largest
/// rate. Layer CPU and memory cost are the layer's trainable parameter count;
/// parameter-free layers are charged one parameter so every layer keeps a
/// positive memory cost. Derived edges carry the source layer's normalized
/// memory cost. `raw_chain` holds capacities and rates in raw units.
/// Throws FormatError on zero maxima or unknown edge targets.
NormalizedInstance normalize(const std::vector<RawLayerProfile>& profile, const DeviceChain& raw_chain);

/// Normalized transfer time back to raw units (seconds when raw traffic is
/// in bits and rates in bit/s): multiply by mem_factor / bandwidth_factor.
double denormalize_time(double normalized, const NormalizationFactors& factors);

std::string model_to_json(const FfnnModel& model);
FfnnModel model_from_json(const std::string& text);
std::string chain_to_json(const DeviceChain& chain);
DeviceChain chain_from_json(const std::string& text);

FfnnModel load_model(const std::filesystem::path& path);
DeviceChain load_chain(const std::filesystem::path& path);
void save_model(const std::filesystem::path& path, const FfnnModel& model);
void save_chain(const std::filesystem::path& path, const DeviceChain& chain);

/// Expands "runs" then "grid" (devices, then skip probability, then layers)
/// into an ordered list of cells. Each cell is validated.
std::vector<ScenarioConfig> parse_sweep_config(const std::string& text);
std::vector<ScenarioConfig> load_sweep_config(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace splitopt

#endif
