#include "splitopt/profiles_io.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <filesystem>
#include <string>

using namespace splitopt;
using testutil::make_chain;

namespace {

std::string chain_profile(std::size_t n) {
    std::string text = R"({"format": "splitopt-profile", "version": 1, "layers": [)";
    for (std::size_t i = 1; i <= n; ++i) {
        text += R"({"name": "l)" + std::to_string(i) + R"(", "trainable_params": )" + std::to_string(i * 10);
        if (i < n) {
            text += R"(, "successors": [{"to": "l)" + std::to_string(i + 1) + R"("}])";
        }
        text += i < n ? "}," : "}";
    }
    return text + "]}";
}

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("splitopt_test_" + name);
}

}  // namespace

TEST_CASE("three-layer chain profile") {
    const auto p = parse_profile(chain_profile(3));
    REQUIRE(p.size() == 3);
    CHECK(p[0].successors.size() == 1);
    CHECK(p[2].successors.empty());
    const auto inst = normalize(p, make_chain({30}, {30}, {}));
    const auto& b = inst.model.traffic();
    std::size_t edges = 0;
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            edges += b.at(i, j) != 0.0;
        }
    }
    CHECK(edges == 2);
    CHECK(b.at(0, 1) == inst.model.layer(0).mem_cost);
}

TEST_CASE("backward edges are rejected") {
    const std::string text = R"({"format": "splitopt-profile", "version": 1, "layers": [
        {"name": "a", "trainable_params": 1},
        {"name": "b", "trainable_params": 1},
        {"name": "c", "trainable_params": 1, "successors": [{"to": "a"}]}]})";
    try {
        parse_profile(text);
        FAIL("expected a FormatError");
    } catch (const FormatError& e) {
        CHECK(std::string(e.what()).find("backward edge") != std::string::npos);
    }
}

TEST_CASE("malformed profiles are rejected") {
    CHECK_THROWS_AS(parse_profile("not json"), FormatError);
    CHECK_THROWS_AS(parse_profile(R"({"format": "splitopt-model", "version": 1, "layers": []})"), FormatError);
    CHECK_THROWS_AS(parse_profile(R"({"format": "splitopt-profile", "version": 2, "layers": []})"), FormatError);
    CHECK_THROWS_AS(parse_profile(R"({"format": "splitopt-profile", "version": 1, "layers": []})"), FormatError);
    CHECK_THROWS_AS(parse_profile(R"({"format": "splitopt-profile", "version": 1, "layers": [
        {"name": "a", "trainable_params": 1}, {"name": "a", "trainable_params": 2}]})"),
                    FormatError);
    CHECK_THROWS_AS(parse_profile(R"({"format": "splitopt-profile", "version": 1, "layers": [
        {"name": "a", "trainable_params": 1, "successors": [{"to": "zz"}]}]})"),
                    FormatError);
}

TEST_CASE("large profiles load") {
    const auto p = parse_profile(chain_profile(177));
    CHECK(p.size() == 177);
    const auto inst = normalize(p, make_chain({2000, 1770}, {2000, 1770}, {5}));
    CHECK(inst.model.num_layers() == 177);
    CHECK(validate_model(inst.model).ok());
}

TEST_CASE("normalization divides by the largest capacities") {
    const std::string text = R"({"format": "splitopt-profile", "version": 1, "layers": [
        {"name": "a", "trainable_params": 100, "successors": [{"to": "b", "bits": 120}]},
        {"name": "b", "trainable_params": 300, "successors": [{"to": "c", "bits": "derive"}]},
        {"name": "c", "trainable_params": 600}]})";
    const auto inst = normalize(parse_profile(text), make_chain({200, 600, 100}, {300, 1200, 50}, {4, 8}));
    CHECK(inst.model.layer(0).cpu_cost == doctest::Approx(1.0 / 6.0));
    CHECK(inst.model.layer(1).cpu_cost == 0.5);
    CHECK(inst.model.layer(2).cpu_cost == 1.0);
    CHECK(inst.model.layer(2).mem_cost == 0.5);
    CHECK(inst.model.traffic().at(0, 1) == 0.1);
    CHECK(inst.model.traffic().at(1, 2) == inst.model.layer(1).mem_cost);
    CHECK(inst.chain.device(1).cpu_capacity == 1.0);
    CHECK(inst.chain.device(0).mem_capacity == 0.25);
    CHECK(inst.chain.link_rate(0) == 0.5);
    CHECK(inst.chain.link_rate(1) == 1.0);
    CHECK(inst.factors.mem_factor == 1200.0);
    CHECK(denormalize_time(2.0, inst.factors) == 300.0);
    CHECK(validate_model(inst.model).ok());
    CHECK(validate_chain(inst.chain).ok());
}

TEST_CASE("single device normalizes to unit capacity") {
    const auto inst = normalize(parse_profile(chain_profile(2)), make_chain({77}, {55}, {}));
    CHECK(inst.chain.device(0).cpu_capacity == 1.0);
    CHECK(inst.chain.device(0).mem_capacity == 1.0);
}

TEST_CASE("parameter-free layers keep a positive memory cost") {
    const std::string text = R"({"format": "splitopt-profile", "version": 1, "layers": [
        {"name": "in", "trainable_params": 0, "successors": [{"to": "fc"}]},
        {"name": "fc", "trainable_params": 50}]})";
    const auto inst = normalize(parse_profile(text), make_chain({100}, {100}, {}));
    CHECK(inst.model.layer(0).cpu_cost == 0.0);
    CHECK(inst.model.layer(0).mem_cost > 0.0);
    CHECK(validate_model(inst.model).ok());
}

TEST_CASE("model and chain files round-trip exactly") {
    const auto inst = normalize(parse_profile(chain_profile(9)), make_chain({70, 90, 11}, {3, 1000, 7}, {0.3, 1.7}));
    const auto model_path = temp_path("model.json");
    const auto chain_path = temp_path("chain.json");
    save_model(model_path, inst.model);
    save_chain(chain_path, inst.chain);
    const auto model = load_model(model_path);
    const auto chain = load_chain(chain_path);
    CHECK(model == inst.model);
    CHECK(chain == inst.chain);
    CHECK(model_to_json(model) == read_text_file(model_path));
    CHECK(chain_to_json(chain) == read_text_file(chain_path));
    std::filesystem::remove(model_path);
    std::filesystem::remove(chain_path);
}

TEST_CASE("model file with a backward edge is rejected") {
    CHECK_THROWS_AS(model_from_json(R"({"format": "splitopt-model", "version": 1,
        "layers": [{"cpu_cost": 0.1, "mem_cost": 0.1}, {"cpu_cost": 0.1, "mem_cost": 0.1}],
        "edges": [{"from": 2, "to": 1, "bits": 1}]})"),
                    FormatError);
    CHECK_THROWS_AS(model_from_json(R"({"format": "splitopt-model", "version": 1,
        "layers": [{"cpu_cost": 0.1, "mem_cost": 0.1}],
        "edges": [{"from": 1, "to": 3, "bits": 1}]})"),
                    FormatError);
}

TEST_CASE("missing files raise an io error") {
    CHECK_THROWS_AS(read_text_file(temp_path("does/not/exist.json")), IoError);
    CHECK_THROWS_AS(write_text_file(temp_path("no_such_dir/out.csv"), "x"), IoError);
}

TEST_CASE("sweep config expands runs then the grid") {
    const auto cells = parse_sweep_config(R"({"format": "splitopt-sweep", "version": 1,
        "runs": [{"num_layers": 9, "num_devices": 5, "skip_prob": 0.1, "iterations": 3, "seed": 4}],
        "grid": {"num_layers": [8, 12], "num_devices": [2, 3], "skip_prob": [0, 0.5],
                 "iterations": 10, "seed": 7}})");
    REQUIRE(cells.size() == 9);
    CHECK(cells[0].num_layers == 9);
    CHECK(cells[0].seed == 4);
    CHECK(cells[1].num_devices == 2);
    CHECK(cells[1].skip_prob == 0.0);
    CHECK(cells[1].num_layers == 8);
    CHECK(cells[2].num_layers == 12);
    CHECK(cells[3].skip_prob == 0.5);
    CHECK(cells[5].num_devices == 3);
    CHECK(cells[8].iterations == 10);
    CHECK(cells[8].seed == 7);

    CHECK(parse_sweep_config(R"({"format": "splitopt-sweep", "version": 1})").empty());
    CHECK_THROWS_AS(parse_sweep_config(R"({"format": "splitopt-sweep", "version": 1,
        "runs": [{"num_layers": 9, "num_devices": 1, "skip_prob": 0.1, "iterations": 3, "seed": 4}]})"),
                    FormatError);
}
