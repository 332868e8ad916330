#include "splitopt/exact.hpp"
#include "splitopt/heuristic.hpp"
#include "splitopt/scenario.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <stdexcept>
#include <vector>

using namespace splitopt;
using testutil::make_chain;
using testutil::make_model;

TEST_CASE("argmin ties go to the largest index") {
    const std::vector<double> a{3.0, 1.0, 2.0, 1.0, 5.0};
    CHECK(argmin_last(a) == 3);
    const std::vector<double> b{2.0};
    CHECK(argmin_last(b) == 0);
    const std::vector<double> c{0.5, 0.25, 0.75};
    CHECK(argmin_last(c) == 1);
}

TEST_CASE("iteration bound formulas") {
    CHECK(kappa_iteration_bound(10, 1) == 10);
    CHECK(kappa_iteration_bound(10, 3) == 12);
    CHECK(total_iteration_bound(517, 5) == 2595);
    for (std::size_t n = 1; n < 50; ++n) {
        for (std::size_t k = 1; k <= n && k < 8; ++k) {
            std::size_t sum = 0;
            for (std::size_t j = 1; j <= k; ++j) {
                sum += kappa_iteration_bound(n, j);
            }
            CHECK(total_iteration_bound(n, k) == sum);
        }
    }
}

TEST_CASE("model that fits on the first device is not split") {
    const auto m = make_model({0.2, 0.2, 0.2}, {0.1, 0.1, 0.1}, {{1, 2, 1.0}, {2, 3, 1.0}});
    const auto chain = make_chain({1, 1}, {1, 1}, {1});
    const auto r = solve_sco_kappa_heuristic(m, chain, 1);
    REQUIRE(r.solution);
    CHECK(r.solution->points() == std::vector<std::size_t>{3});

    const auto full = solve_sco_heuristic(m, chain);
    REQUIRE(full.solution);
    CHECK(full.solution->kappa() == 1);
    CHECK(full.trace.attempts.size() == 1);
    CHECK(full.cost.total == 0.0);
}

TEST_CASE("two layers that only fit one per device") {
    const auto m = make_model({0.1, 0.1}, {0.6, 0.6}, {{1, 2, 1.0}});
    const auto chain = make_chain({1, 1}, {0.6, 1.2}, {1});
    const auto r = solve_sco_kappa_heuristic(m, chain, 2);
    REQUIRE(r.solution);
    CHECK(r.solution->points() == std::vector<std::size_t>{1, 2});
    // the only alternative with two devices does not fit
    CHECK_FALSE(is_feasible(m, chain, SplitSolution({2}, 2)).feasible);
}

TEST_CASE("no solution when one device cannot hold the model") {
    const auto m = make_model({0.1, 0.1}, {0.6, 0.6}, {{1, 2, 1.0}});
    const auto chain = make_chain({1}, {0.6}, {});
    const auto r = solve_sco_kappa_heuristic(m, chain, 1);
    CHECK_FALSE(r.solution);
    CHECK_FALSE(r.attempt.failure.empty());
    CHECK_FALSE(solve_sco_heuristic(m, chain).solution);
}

TEST_CASE("cut falls back to the cheapest boundary seen") {
    const auto m = make_model({1, 1, 1, 1}, {0.2, 0.2, 0.2, 0.2},
                              {{1, 2, 10.0}, {2, 3, 10.0}, {3, 4, 10.0}, {1, 3, 1.0}});
    const auto chain = make_chain({1, 1}, {0.6, 1.0}, {1});
    const auto r = solve_sco_kappa_heuristic(m, chain, 2);
    REQUIRE(r.solution);
    CHECK(r.solution->points() == std::vector<std::size_t>{3, 4});
    // every single-split alternative costs at least as much
    for (std::size_t p = 1; p < 4; ++p) {
        const SplitSolution x({p, 4}, 4);
        if (is_feasible(m, chain, x).feasible) {
            CHECK(objective(m, chain, x).total >= 10.0);
        }
    }
}

TEST_CASE("cut before the violator carries layers to the next device") {
    // device 1 holds layers 1..3; the cheapest boundary is after layer 1, so
    // layers 2 and 3 move to device 2 along with layer 4
    const auto m = make_model({1, 1, 1, 1}, {0.2, 0.2, 0.2, 0.2},
                              {{1, 2, 1.0}, {2, 3, 10.0}, {3, 4, 10.0}});
    const auto chain = make_chain({1, 1}, {0.6, 1.0}, {1});
    const auto r = solve_sco_kappa_heuristic(m, chain, 2);
    REQUIRE(r.solution);
    CHECK(r.solution->points() == std::vector<std::size_t>{1, 4});
    CHECK(r.attempt.while_iterations <= kappa_iteration_bound(4, 2));
    CHECK(r.attempt.layer_checks > r.attempt.while_iterations);
}

TEST_CASE("layer heavier than every device gives no solution") {
    const auto m = make_model({0.1, 0.9, 0.1}, {0.1, 0.1, 0.1}, {{1, 2, 1.0}, {2, 3, 1.0}});
    const auto chain = make_chain({0.5, 0.5, 0.5}, {1, 1, 1}, {1, 1});
    const auto r = solve_sco_heuristic(m, chain);
    CHECK_FALSE(r.solution);
    CHECK(r.trace.attempts.size() == 3);
    CHECK_FALSE(r.trace.solved);
}

TEST_CASE("kappa outside the valid range throws") {
    const auto m = testutil::three_layer_model();
    const auto chain = make_chain({1, 1}, {1, 1}, {1});
    CHECK_THROWS_AS(solve_sco_kappa_heuristic(m, chain, 0), std::invalid_argument);
    CHECK_THROWS_AS(solve_sco_kappa_heuristic(m, chain, 3), std::invalid_argument);
}

TEST_CASE("heuristic solutions are feasible, within bounds and never beat the optimum") {
    std::size_t solved = 0;
    for (std::uint64_t it = 0; it < 3000; ++it) {
        ScenarioConfig cfg;
        cfg.num_layers = 8 + it % 21;
        cfg.num_devices = 2 + it % 5;
        cfg.skip_prob = (it % 3) * 0.25;
        cfg.seed = 2024;
        const auto inst = make_instance(cfg, it);
        const auto h = solve_sco_heuristic(inst.model, inst.chain);
        const std::size_t kh = max_splits(inst.model, inst.chain);
        CHECK(h.trace.total_iterations <= total_iteration_bound(cfg.num_layers, kh));
        for (const auto& a : h.trace.attempts) {
            CHECK(a.while_iterations <= kappa_iteration_bound(cfg.num_layers, a.kappa));
        }
        if (!h.solution) {
            continue;
        }
        ++solved;
        CHECK(is_feasible(inst.model, inst.chain, *h.solution).feasible);
        CHECK(h.solution->num_layers() == cfg.num_layers);
        CHECK(h.solution->kappa() <= kh);
        const auto e = solve_sco_exact(inst.model, inst.chain);
        REQUIRE(e.global);
        CHECK(h.cost.total >= e.global->cost);
    }
    CHECK(solved > 2000);
}

TEST_CASE("heuristic is deterministic") {
    ScenarioConfig cfg;
    cfg.num_layers = 20;
    cfg.num_devices = 4;
    cfg.skip_prob = 0.5;
    const auto inst = make_instance(cfg, 17);
    const auto a = solve_sco_heuristic(inst.model, inst.chain);
    const auto b = solve_sco_heuristic(inst.model, inst.chain);
    CHECK(a.solution == b.solution);
    CHECK(a.cost.total == b.cost.total);
    CHECK(a.trace.total_iterations == b.trace.total_iterations);
}

TEST_CASE("kappa limit caps the devices tried") {
    const auto m = make_model({0.1, 0.1}, {0.6, 0.6}, {{1, 2, 1.0}});
    const auto chain = make_chain({1, 1}, {0.6, 1.2}, {1});
    CHECK_FALSE(solve_sco_heuristic(m, chain, 1).solution);
    CHECK(solve_sco_heuristic(m, chain, 2).solution);
}
