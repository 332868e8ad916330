#include "splitopt/cost.hpp"
#include "splitopt/scenario.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

using namespace splitopt;
using testutil::make_chain;
using testutil::make_model;

namespace {

double brute_cut(const FfnnModel& m, std::size_t p) {
    double sum = 0.0;
    for (std::size_t i = 1; i <= m.num_layers(); ++i) {
        for (std::size_t j = 1; j <= m.num_layers(); ++j) {
            if (i <= p && j > p) {
                sum += m.traffic().at(i - 1, j - 1);
            }
        }
    }
    return sum;
}

}  // namespace

TEST_CASE("cut traffic on the three-layer model") {
    const auto m = testutil::three_layer_model();
    const CutTable cuts(m);
    CHECK(cuts.cut(1) == 6.0);
    CHECK(cuts.cut(2) == 10.0);
    CHECK(cuts.cut(3) == 0.0);
    CHECK(cut_traffic(m, 2) == 10.0);
    CHECK_THROWS_AS(cuts.cut(0), std::out_of_range);
    CHECK_THROWS_AS(cuts.cut(4), std::out_of_range);
}

TEST_CASE("cut traffic is zero without edges") {
    const auto m = make_model({0.1, 0.1, 0.1, 0.1}, {0.1, 0.1, 0.1, 0.1}, {});
    const CutTable cuts(m);
    for (std::size_t p = 1; p <= 4; ++p) {
        CHECK(cuts.cut(p) == 0.0);
    }
}

TEST_CASE("cut table matches a pairwise sum on random models") {
    Rng rng(42);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + trial % 30;
        const auto m = generate_random_model(n, (trial % 5) / 4.0, rng);
        const CutTable cuts(m);
        CHECK(cuts.cut(n) == 0.0);
        for (std::size_t p = 1; p <= n; ++p) {
            const double expected = brute_cut(m, p);
            CHECK(cuts.cut(p) >= 0.0);
            CHECK(std::abs(cuts.cut(p) - expected) <= 1e-12 * std::max(1.0, expected));
        }
    }
}

TEST_CASE("objective on the three-layer model") {
    const auto m = testutil::three_layer_model();
    const auto two = make_chain({1, 1}, {1, 1}, {2});
    CHECK(objective(m, two, SplitSolution({3}, 3)).total == 0.0);
    CHECK(objective(m, two, SplitSolution({1, 3}, 3)).total == 3.0);
    CHECK(objective(m, two, SplitSolution({2, 3}, 3)).total == 5.0);

    const auto three = make_chain({1, 1, 1}, {1, 1, 1}, {2, 1});
    const auto c = objective(m, three, SplitSolution({1, 2, 3}, 3));
    CHECK(c.total == 13.0);
    REQUIRE(c.boundary_terms.size() == 2);
    CHECK(c.boundary_terms[0] == 3.0);
    CHECK(c.boundary_terms[1] == 10.0);

    CHECK_THROWS_AS(objective(m, two, SplitSolution({1, 2, 3}, 3)), std::invalid_argument);
    CHECK_THROWS_AS(objective(m, two, SplitSolution({1, 4}, 4)), std::invalid_argument);
}

TEST_CASE("objective scales inversely with link rate and linearly with traffic") {
    Rng rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        const auto m = generate_random_model(12, 0.5, rng);
        const auto chain = make_chain({1, 1, 1}, {1, 1, 1}, {0.5, 0.25});
        const auto doubled = make_chain({1, 1, 1}, {1, 1, 1}, {1.0, 0.5});
        const SplitSolution x({3, 8, 12}, 12);
        const double base = objective(m, chain, x).total;
        CHECK(std::abs(objective(m, doubled, x).total - base / 2) <= 1e-12 * base);
        CHECK(base >= 0.0);
    }
}

TEST_CASE("feasibility examples") {
    const auto zero = make_model({0, 0, 0}, {0, 0, 0}, {});
    CHECK(is_feasible(zero, make_chain({0, 0}, {0, 0}, {1}), SplitSolution({3}, 3)).feasible);

    const auto m = make_model({0.1, 0.1}, {0.6, 0.6}, {{1, 2, 1.0}});
    const auto chain = make_chain({1, 1}, {0.6, 0.6}, {1});
    CHECK(is_feasible(m, chain, SplitSolution({1, 2}, 2)).feasible);
    const auto bad = is_feasible(m, chain, SplitSolution({2}, 2));
    CHECK_FALSE(bad.feasible);
    CHECK(bad.device == 1);
    CHECK(bad.constraint == "mem");

    const auto heavy = make_model({1.0}, {0.01}, {});
    const auto cpu = is_feasible(heavy, make_chain({0.5}, {1.0}, {}), SplitSolution({1}, 1));
    CHECK_FALSE(cpu.feasible);
    CHECK(cpu.constraint == "cpu");
}

TEST_CASE("capacity comparison absorbs rounding only") {
    CHECK(0.2 + 0.2 + 0.2 > 0.6);
    CHECK_FALSE(exceeds(0.2 + 0.2 + 0.2, 0.6));
    CHECK(exceeds(0.6000001, 0.6));
    CHECK(exceeds(1e-300, 0.0));
    CHECK_FALSE(exceeds(0.0, 0.0));
}

TEST_CASE("is_feasible agrees with a direct per-device check") {
    Rng rng(99);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 2 + trial % 12;
        const auto m = generate_random_model(n, 0.3, rng);
        const auto chain = generate_device_chain(3, m, 0.5);
        std::vector<std::size_t> pts{1 + trial % (n - 1), n};
        const SplitSolution x(pts, n);
        bool ok = true;
        const auto parts = partition(x, n);
        for (std::size_t t = 0; t < parts.size(); ++t) {
            double mem = 0.0;
            double cpu = 0.0;
            for (std::size_t l = parts[t].first; l <= parts[t].last; ++l) {
                mem += m.layer(l - 1).mem_cost;
                cpu = std::max(cpu, m.layer(l - 1).cpu_cost);
            }
            const auto& dev = chain.device(t);
            ok = ok && mem <= dev.mem_capacity * (1 + 1e-12) && cpu <= dev.cpu_capacity * (1 + 1e-12);
        }
        CHECK(is_feasible(m, chain, x).feasible == ok);
        CHECK((segment_fits(m, chain.device(0), 1, pts[0]) && segment_fits(m, chain.device(1), pts[0] + 1, n)) == ok);
    }
}
