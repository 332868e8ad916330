#include "splitopt/profiles_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace splitopt {

using nlohmann::json;

namespace {

constexpr int kVersion = 1;

json parse_document(const std::string& text, const std::string& format) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("parse error: ") + e.what());
    }
    if (!doc.is_object()) {
        throw FormatError("expected a JSON object at top level");
    }
    if (doc.value("format", std::string()) != format) {
        throw FormatError("expected \"format\": \"" + format + "\"");
    }
    if (doc.value("version", 0) != kVersion) {
        throw FormatError("unsupported " + format + " version");
    }
    return doc;
}

// json::get with the library's type errors turned into FormatError
template <class T>
T field(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key)) {
        throw FormatError(where + ": missing \"" + key + "\"");
    }
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw FormatError(where + ": bad value for \"" + key + "\"");
    }
}

const json& array_field(const json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key) || !obj.at(key).is_array()) {
        throw FormatError(where + ": \"" + key + "\" must be an array");
    }
    return obj.at(key);
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out << text;
    if (!out) {
        throw IoError("failed writing " + path.string());
    }
}

std::vector<RawLayerProfile> parse_profile(const std::string& text) {
    const json doc = parse_document(text, "splitopt-profile");
    std::vector<RawLayerProfile> layers;
    std::map<std::string, std::size_t> position;
    for (const auto& entry : array_field(doc, "layers", "profile")) {
        RawLayerProfile layer;
        const std::string where = "layer " + std::to_string(layers.size() + 1);
        layer.name = field<std::string>(entry, "name", where);
        layer.trainable_params = field<std::uint64_t>(entry, "trainable_params", where);
        if (entry.contains("successors")) {
            for (const auto& edge : array_field(entry, "successors", where)) {
                RawEdge e;
                e.target = field<std::string>(edge, "to", where);
                const json bits = edge.value("bits", json("derive"));
                if (bits.is_number()) {
                    e.bits = bits.get<double>();
                    if (!(*e.bits >= 0.0)) {
                        throw FormatError(where + ": negative bits on edge to " + e.target);
                    }
                } else if (bits != "derive") {
                    throw FormatError(where + ": \"bits\" must be a number or \"derive\"");
                }
                layer.successors.push_back(std::move(e));
            }
        }
        if (!position.emplace(layer.name, layers.size()).second) {
            throw FormatError("duplicate layer name \"" + layer.name + "\"");
        }
        layers.push_back(std::move(layer));
    }
    if (layers.empty()) {
        throw FormatError("profile has no layers");
    }
    for (std::size_t i = 0; i < layers.size(); ++i) {
        for (const auto& e : layers[i].successors) {
            auto it = position.find(e.target);
            if (it == position.end()) {
                throw FormatError("layer \"" + layers[i].name + "\": unknown edge target \"" +
                                  e.target + "\"");
            }
            if (it->second <= i) {
                throw FormatError("layer \"" + layers[i].name + "\": backward edge to \"" +
                                  e.target + "\"");
            }
        }
    }
    return layers;
}

std::vector<RawLayerProfile> load_profile(const std::filesystem::path& path) {
    return parse_profile(read_text_file(path));
}

NormalizedInstance normalize(const std::vector<RawLayerProfile>& profile, const DeviceChain& raw_chain) {
    NormalizationFactors f;
    f.cpu_factor = 0.0;
    f.mem_factor = 0.0;
    for (const auto& d : raw_chain.devices()) {
        f.cpu_factor = std::max(f.cpu_factor, d.cpu_capacity);
        f.mem_factor = std::max(f.mem_factor, d.mem_capacity);
    }
    f.bandwidth_factor = 0.0;
    for (double w : raw_chain.link_rates()) {
        f.bandwidth_factor = std::max(f.bandwidth_factor, w);
    }
    if (!(f.cpu_factor > 0.0) || !(f.mem_factor > 0.0)) {
        throw FormatError("largest device CPU and memory capacities must be positive");
    }
    if (raw_chain.link_rates().empty()) {
        f.bandwidth_factor = 1.0;  // single device, nothing to transfer
    } else if (!(f.bandwidth_factor > 0.0)) {
        throw FormatError("largest link rate must be positive");
    }

    std::map<std::string, std::size_t> position;
    for (std::size_t i = 0; i < profile.size(); ++i) {
        position[profile[i].name] = i;
    }
    std::vector<LayerProfile> layers;
    layers.reserve(profile.size());
    for (const auto& raw : profile) {
        const double params = static_cast<double>(raw.trainable_params);
        layers.push_back({params / f.cpu_factor, std::max(params, 1.0) / f.mem_factor, raw.name});
    }
    TrafficMatrix traffic(profile.size());
    for (std::size_t i = 0; i < profile.size(); ++i) {
        for (const auto& e : profile[i].successors) {
            auto it = position.find(e.target);
            if (it == position.end()) {
                throw FormatError("unknown edge target \"" + e.target + "\"");
            }
            if (it->second <= i) {
                throw FormatError("backward edge from \"" + profile[i].name + "\" to \"" + e.target + "\"");
            }
            const double bits = e.bits ? *e.bits / f.mem_factor : layers[i].mem_cost;
            traffic.set(i, it->second, traffic.at(i, it->second) + bits);
        }
    }

    std::vector<Device> devices;
    for (const auto& d : raw_chain.devices()) {
        devices.push_back({d.cpu_capacity / f.cpu_factor, d.mem_capacity / f.mem_factor});
    }
    std::vector<double> rates;
    for (double w : raw_chain.link_rates()) {
        rates.push_back(w / f.bandwidth_factor);
    }
    return {FfnnModel(std::move(layers), std::move(traffic)),
            DeviceChain(std::move(devices), std::move(rates)), f};
}

double denormalize_time(double normalized, const NormalizationFactors& factors) {
    return normalized * factors.mem_factor / factors.bandwidth_factor;
}

std::string model_to_json(const FfnnModel& model) {
    json layers = json::array();
    for (std::size_t i = 0; i < model.num_layers(); ++i) {
        const auto& l = model.layer(i);
        json entry = {{"cpu_cost", l.cpu_cost}, {"mem_cost", l.mem_cost}};
        if (!l.name.empty()) {
            entry["name"] = l.name;
        }
        layers.push_back(std::move(entry));
    }
    json edges = json::array();
    for (std::size_t i = 0; i < model.num_layers(); ++i) {
        for (std::size_t j = 0; j < model.num_layers(); ++j) {
            const double bits = model.traffic().at(i, j);
            if (bits != 0.0) {
                edges.push_back({{"from", i + 1}, {"to", j + 1}, {"bits", bits}});
            }
        }
    }
    json doc = {{"format", "splitopt-model"}, {"version", kVersion}, {"layers", layers}, {"edges", edges}};
    return doc.dump(2) + "\n";
}

FfnnModel model_from_json(const std::string& text) {
    const json doc = parse_document(text, "splitopt-model");
    std::vector<LayerProfile> layers;
    for (const auto& entry : array_field(doc, "layers", "model")) {
        const std::string where = "layer " + std::to_string(layers.size() + 1);
        LayerProfile l;
        l.name = entry.value("name", std::string());
        l.cpu_cost = field<double>(entry, "cpu_cost", where);
        l.mem_cost = field<double>(entry, "mem_cost", where);
        layers.push_back(std::move(l));
    }
    TrafficMatrix traffic(layers.size());
    if (doc.contains("edges")) {
        for (const auto& edge : array_field(doc, "edges", "model")) {
            const auto from = field<std::size_t>(edge, "from", "edge");
            const auto to = field<std::size_t>(edge, "to", "edge");
            const auto bits = field<double>(edge, "bits", "edge");
            if (from < 1 || to < 1 || from > layers.size() || to > layers.size()) {
                throw FormatError("edge (" + std::to_string(from) + "," + std::to_string(to) +
                                  ") references a missing layer");
            }
            if (from >= to) {
                throw FormatError("backward edge (" + std::to_string(from) + "," + std::to_string(to) + ")");
            }
            traffic.set(from - 1, to - 1, bits);
        }
    }
    return FfnnModel(std::move(layers), std::move(traffic));
}

std::string chain_to_json(const DeviceChain& chain) {
    json devices = json::array();
    for (const auto& d : chain.devices()) {
        devices.push_back({{"cpu_capacity", d.cpu_capacity}, {"mem_capacity", d.mem_capacity}});
    }
    json links = json::array();
    for (double w : chain.link_rates()) {
        links.push_back({{"rate", w}});
    }
    json doc = {{"format", "splitopt-chain"}, {"version", kVersion}, {"devices", devices}, {"links", links}};
    return doc.dump(2) + "\n";
}

DeviceChain chain_from_json(const std::string& text) {
    const json doc = parse_document(text, "splitopt-chain");
    std::vector<Device> devices;
    for (const auto& entry : array_field(doc, "devices", "chain")) {
        const std::string where = "device " + std::to_string(devices.size() + 1);
        devices.push_back({field<double>(entry, "cpu_capacity", where),
                           field<double>(entry, "mem_capacity", where)});
    }
    std::vector<double> rates;
    if (doc.contains("links")) {
        for (const auto& entry : array_field(doc, "links", "chain")) {
            rates.push_back(field<double>(entry, "rate", "link " + std::to_string(rates.size() + 1)));
        }
    }
    try {
        return DeviceChain(std::move(devices), std::move(rates));
    } catch (const std::invalid_argument& e) {
        throw FormatError(e.what());
    }
}

FfnnModel load_model(const std::filesystem::path& path) { return model_from_json(read_text_file(path)); }
DeviceChain load_chain(const std::filesystem::path& path) { return chain_from_json(read_text_file(path)); }
void save_model(const std::filesystem::path& path, const FfnnModel& model) {
    write_text_file(path, model_to_json(model));
}
void save_chain(const std::filesystem::path& path, const DeviceChain& chain) {
    write_text_file(path, chain_to_json(chain));
}

std::vector<ScenarioConfig> parse_sweep_config(const std::string& text) {
    const json doc = parse_document(text, "splitopt-sweep");
    std::vector<ScenarioConfig> cells;
    auto read_cell = [](const json& entry, const std::string& where) {
        ScenarioConfig c;
        c.num_layers = field<std::size_t>(entry, "num_layers", where);
        c.num_devices = field<std::size_t>(entry, "num_devices", where);
        c.skip_prob = field<double>(entry, "skip_prob", where);
        c.iterations = field<std::size_t>(entry, "iterations", where);
        c.seed = field<std::uint64_t>(entry, "seed", where);
        return c;
    };
    if (doc.contains("runs")) {
        for (const auto& entry : array_field(doc, "runs", "sweep")) {
            cells.push_back(read_cell(entry, "run " + std::to_string(cells.size() + 1)));
        }
    }
    if (doc.contains("grid")) {
        const json& g = doc.at("grid");
        const auto iterations = field<std::size_t>(g, "iterations", "grid");
        const auto seed = field<std::uint64_t>(g, "seed", "grid");
        const auto devices = field<std::vector<std::size_t>>(g, "num_devices", "grid");
        const auto skips = field<std::vector<double>>(g, "skip_prob", "grid");
        const auto layers = field<std::vector<std::size_t>>(g, "num_layers", "grid");
        for (auto d : devices) {
            for (auto s : skips) {
                for (auto l : layers) {
                    cells.push_back({l, d, s, iterations, seed});
                }
            }
        }
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
        try {
            validate_config(cells[i]);
        } catch (const std::invalid_argument& e) {
            throw FormatError("sweep cell " + std::to_string(i + 1) + ": " + e.what());
        }
    }
    return cells;
}

std::vector<ScenarioConfig> load_sweep_config(const std::filesystem::path& path) {
    return parse_sweep_config(read_text_file(path));
}

}  // namespace splitopt
