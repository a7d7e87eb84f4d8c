#include <catch2/catch_amalgamated.hpp>

#include "rackopt/heuristics/pio.hpp"
#include "rackopt/heuristics/portfolio.hpp"
#include "rackopt/heuristics/spb.hpp"
#include "rackopt/allocation/verify.hpp"
#include "rackopt/oracles/allocation_oracle.hpp"
#include "test_support.hpp"

using namespace rackopt;
using test_support::t1;
using test_support::tiny_instance;

namespace {

heur::HeuristicParams quick_heur() {
    heur::HeuristicParams p;
    p.total_time_limit_s = 120.0;
    return p;
}

milp::SolveParams quick_params() {
    milp::SolveParams p;
    p.time_limit_s = 120.0;
    return p;
}

}  // namespace

TEST_CASE("spb with a single picker equals the exact solve") {
    Instance inst = t1({3});
    auto exact = alloc::solve_allocation(inst, {}, quick_params());
    auto h = heur::spb(inst, quick_heur());
    REQUIRE(h.result.allocation.has_value());
    CHECK(*h.result.metrics.ub == *exact.metrics.ub);
    CHECK(*h.result.metrics.ub == 3.0);
    CHECK(h.trace.size() == 2);  // one picker stage plus the final solve
    CHECK(alloc::verify_allocation(inst, {}, *h.result.allocation).ok());
}

TEST_CASE("pio with a single picker equals the exact solve") {
    Instance inst = t1({3});
    auto h = heur::pio(inst, 1, quick_heur());
    REQUIRE(h.result.allocation.has_value());
    CHECK(*h.result.metrics.ub == 3.0);
    CHECK(h.trace.size() == 2);
}

TEST_CASE("pio rejects tau below one") {
    Instance inst = t1({3});
    CHECK_THROWS_AS(heur::pio(inst, 0, quick_heur()), std::invalid_argument);
}

TEST_CASE("pio stage count follows ceil(P/tau)+1") {
    for (std::uint64_t seed = 400; seed < 410; ++seed) {
        Instance inst = tiny_instance(seed);
        if (inst.num_pickers() < 2) continue;
        auto h = heur::pio(inst, 1, quick_heur());
        if (!h.result.allocation) continue;
        CHECK(static_cast<int>(h.trace.size()) == inst.num_pickers() + 1);
    }
}

TEST_CASE("heuristics dominate the exact optimum and verify") {
    int compared = 0;
    for (std::uint64_t seed = 500; seed < 540; ++seed) {
        Instance inst = tiny_instance(seed);
        auto exact = alloc::solve_allocation(inst, {}, quick_params());
        if (exact.status != milp::SolveStatus::optimal) continue;
        const double opt = *exact.metrics.ub;
        INFO("seed " << seed);

        auto s = heur::spb(inst, quick_heur());
        if (s.result.allocation) {
            CHECK(*s.result.metrics.ub >= opt - 1e-9);
            CHECK(alloc::verify_allocation(inst, {}, *s.result.allocation).ok());
        }

        auto p1 = heur::pio(inst, 1, quick_heur());
        if (p1.result.allocation) {
            CHECK(*p1.result.metrics.ub >= opt - 1e-9);
            CHECK(alloc::verify_allocation(inst, {}, *p1.result.allocation).ok());
        }

        // tau >= P collapses to a single all-binary stage plus the restricted
        // resolve, which must reproduce the exact optimum.
        auto pall = heur::pio(inst, inst.num_pickers(), quick_heur());
        REQUIRE(pall.result.allocation.has_value());
        CHECK(*pall.result.metrics.ub == opt);

        if (inst.num_pickers() == 1) {
            REQUIRE(s.result.allocation.has_value());
            CHECK(*s.result.metrics.ub == opt);
            REQUIRE(p1.result.allocation.has_value());
            CHECK(*p1.result.metrics.ub == opt);
        }
        ++compared;
    }
    CHECK(compared >= 20);
}

TEST_CASE("heuristic runs are deterministic") {
    Instance inst = tiny_instance(512);
    auto a = heur::spb(inst, quick_heur());
    auto b = heur::spb(inst, quick_heur());
    REQUIRE(a.result.allocation.has_value());
    REQUIRE(b.result.allocation.has_value());
    CHECK(*a.result.metrics.ub == *b.result.metrics.ub);
    REQUIRE(a.trace.size() == b.trace.size());
    for (size_t i = 0; i < a.trace.size(); ++i) {
        CHECK(a.trace[i].stage == b.trace[i].stage);
        CHECK(a.trace[i].label == b.trace[i].label);
        CHECK(a.trace[i].status == b.trace[i].status);
        CHECK(a.trace[i].objective == b.trace[i].objective);
        CHECK(a.trace[i].chosen_orders == b.trace[i].chosen_orders);
        CHECK(a.trace[i].chosen_racks == b.trace[i].chosen_racks);
    }

    auto c = heur::pio(inst, 1, quick_heur());
    auto d = heur::pio(inst, 1, quick_heur());
    CHECK(c.result.metrics.ub == d.result.metrics.ub);
    CHECK(c.trace.size() == d.trace.size());
}

TEST_CASE("heuristics reject unsupported option combinations") {
    Instance inst = t1({3});
    alloc::AllocationOptions shared;
    shared.shared_racks = true;
    CHECK_THROWS_AS(heur::spb(inst, quick_heur(), shared), std::invalid_argument);
    CHECK_THROWS_AS(heur::pio(inst, 1, quick_heur(), shared), std::invalid_argument);
}

TEST_CASE("portfolio with only the exact approach matches solve_allocation") {
    Instance inst = t1({2});
    auto exact = alloc::solve_allocation(inst, {}, quick_params());
    auto pf = heur::portfolio(inst, {{heur::Approach::Kind::exact, 1}}, quick_heur());
    REQUIRE(pf.best() != nullptr);
    CHECK(*pf.best()->metrics.ub == *exact.metrics.ub);
}

TEST_CASE("portfolio rejects an empty approach list") {
    Instance inst = t1({2});
    CHECK_THROWS_AS(heur::portfolio(inst, {}, quick_heur()), std::invalid_argument);
}

TEST_CASE("portfolio best never exceeds any member result") {
    for (std::uint64_t seed = 600; seed < 610; ++seed) {
        Instance inst = tiny_instance(seed);
        std::vector<heur::Approach> approaches = {
            {heur::Approach::Kind::exact, 1},
            {heur::Approach::Kind::spb, 1},
            {heur::Approach::Kind::pio, 1},
            {heur::Approach::Kind::pio, 2},
        };
        auto pf = heur::portfolio(inst, approaches, quick_heur());
        if (pf.best_index < 0) continue;
        const double best = *pf.best()->metrics.ub;
        for (const auto& [name, res] : pf.table) {
            if (res.metrics.ub) CHECK(best <= *res.metrics.ub + 1e-9);
        }
    }
}

TEST_CASE("portfolio falls back to heuristics when exact hits its limit") {
    // A short budget starves the exact branch-and-bound while SPB's small
    // single-picker stages still finish.
    Instance inst = tiny_instance(611);
    heur::HeuristicParams hp = quick_heur();
    auto pf = heur::portfolio(inst,
                              {{heur::Approach::Kind::exact, 1}, {heur::Approach::Kind::spb, 1}},
                              hp);
    // Whatever the budget did to either member, the best entry must carry a
    // verified allocation when any member succeeded.
    if (pf.best_index >= 0) {
        CHECK(pf.best()->allocation.has_value());
        CHECK(alloc::verify_allocation(inst, {}, *pf.best()->allocation).ok());
    }
}
