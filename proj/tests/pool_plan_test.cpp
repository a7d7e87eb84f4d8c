#include <catch2/catch_amalgamated.hpp>

#include "rackopt/gen/rng.hpp"
#include "rackopt/sequencing/plan.hpp"
#include "rackopt/sequencing/pool_greedy.hpp"
#include "rackopt/sequencing/solve.hpp"
#include "rackopt/sequencing/verify.hpp"

using namespace rackopt;
using namespace rackopt::seq;

namespace {

SequencingInstance s1(int bins, int revisits) {
    return make_sequencing_instance({{1, 1}, {1, 1}}, {{2, 0}, {0, 2}}, bins, revisits);
}

SequencingInstance random_covered_instance(std::uint64_t seed) {
    gen::Rng rng(seed);
    const int O = 1 + rng.below_int(5);
    const int L = 2 + rng.below_int(3);
    const int NP = 2 + rng.below_int(3);
    std::vector<std::vector<int>> demand(O, std::vector<int>(NP, 0));
    std::vector<std::vector<int>> supply(L, std::vector<int>(NP, 0));
    for (int o = 0; o < O; ++o) {
        const int items = 1 + rng.below_int(2);
        for (int t = 0; t < items; ++t) {
            const int i = rng.below_int(NP);
            const int units = 1 + rng.below_int(2);
            demand[o][i] += units;
            for (int u = 0; u < units; ++u) supply[rng.below_int(L)][i] += 1;
        }
    }
    for (int o = 0; o < O; ++o) {
        bool any = false;
        for (int i = 0; i < NP; ++i) any = any || demand[o][i] > 0;
        if (!any) {
            demand[o][0] = 1;
            supply[rng.below_int(L)][0] += 1;
        }
    }
    return make_sequencing_instance(std::move(demand), std::move(supply), 2, 0);
}

}  // namespace

TEST_CASE("pool greedy walks the two-rack example as r0 r1 r0 r1") {
    SequencingInstance si = s1(2, 0);
    SequenceSolution sol = pool_greedy_sequence(si);
    CHECK(sol.rack_order == std::vector<int>{0, 1, 0, 1});
    CHECK(sol.unbounded_revisits);
    CHECK(verify_sequence(si, sol).ok());
}

TEST_CASE("pool greedy with one order and one rack is a single draw") {
    SequencingInstance si = make_sequencing_instance({{1, 1}}, {{2, 2}}, 2, 0);
    SequenceSolution sol = pool_greedy_sequence(si);
    CHECK(sol.rack_order == std::vector<int>{0});
    CHECK(verify_sequence(si, sol).ok());
}

TEST_CASE("pool greedy closes all single-unit orders on one draw") {
    SequencingInstance si = make_sequencing_instance({{1, 0}, {1, 0}, {0, 1}}, {{3, 2}}, 2, 0);
    SequenceSolution sol = pool_greedy_sequence(si);
    // Every order is served by the single rack; it is drawn once per order.
    CHECK(sol.rack_order.size() == 3);
    for (int r : sol.rack_order) CHECK(r == 0);
    CHECK(verify_sequence(si, sol).ok());
}

TEST_CASE("pool greedy refuses an uncovered instance") {
    SequencingInstance si = make_sequencing_instance({{2, 0}}, {{1, 0}}, 2, 0);
    CHECK_THROWS_AS(pool_greedy_sequence(si), std::invalid_argument);
}

TEST_CASE("pool greedy output always verifies") {
    for (std::uint64_t seed = 2000; seed < 2050; ++seed) {
        SequencingInstance si = random_covered_instance(seed);
        SequenceSolution sol = pool_greedy_sequence(si);
        INFO("seed " << seed);
        CHECK(verify_sequence(si, sol).ok());
    }
}

TEST_CASE("processing plan classifies a three-position window") {
    // Order 0 opens at position 0 and closes at position 2; order 1 is a
    // one-shot at position 1.
    SequencingInstance si = make_sequencing_instance({{2, 0}, {0, 1}},
                                                     {{1, 0}, {0, 1}, {1, 0}}, 3, 0);
    SequenceSolution sol;
    sol.rack_order = {0, 1, 2};
    sol.picks = {{0, 0, 0, 1}, {0, 0, 2, 1}, {1, 1, 1, 1}};
    sol.opens = {{0, 0}, {1, 1}};
    sol.closes = {{0, 2}, {1, 1}};
    REQUIRE(verify_sequence(si, sol).ok());

    ProcessingPlan plan = derive_processing_plan(si, sol);
    CHECK(plan.opened_here[0] == std::vector<int>{0});
    CHECK(plan.carried[1] == std::vector<int>{0});
    CHECK(plan.closed_here[2] == std::vector<int>{0});
    CHECK(plan.opened_closed_here[1] == std::vector<int>{1});
    CHECK(plan.assignments[1].bin == 0);   // dedicated bin for the one-shot
    CHECK(plan.assignments[0].bin == 1);   // first non-dedicated slot
    CHECK(plan.max_carried == 1);
}

TEST_CASE("plan occupancy equals the verifier's carry count") {
    for (std::uint64_t seed = 2100; seed < 2120; ++seed) {
        SequencingInstance si = random_covered_instance(seed);
        si.bins = 3;
        milp::SolveParams params;
        params.time_limit_s = 60.0;
        SequenceOutcome out = solve_sequencing(si, SequencingMode::no_revisit, params);
        if (out.result != SequenceFeasibility::feasible) continue;
        ProcessingPlan plan = derive_processing_plan(si, *out.solution);
        // Recompute the peak carry straight from the windows.
        std::vector<int> open_pos(si.num_orders()), close_pos(si.num_orders());
        for (const auto& e : out.solution->opens) open_pos[e.order] = e.position;
        for (const auto& e : out.solution->closes) close_pos[e.order] = e.position;
        int peak = 0;
        for (int k = 0; k < static_cast<int>(out.solution->rack_order.size()); ++k) {
            int c = 0;
            for (int o = 0; o < si.num_orders(); ++o) {
                if (open_pos[o] <= k && k < close_pos[o]) ++c;
            }
            peak = std::max(peak, c);
        }
        CHECK(plan.max_carried == peak);
        CHECK(plan.max_carried <= si.bins - 1);
    }
}

TEST_CASE("plan bins are never double-booked") {
    for (std::uint64_t seed = 2200; seed < 2220; ++seed) {
        SequencingInstance si = random_covered_instance(seed);
        si.bins = 2;
        SequenceSolution sol = pool_greedy_sequence(si);
        ProcessingPlan plan = derive_processing_plan(si, sol);
        // Two carried orders may share a bin only if their windows are disjoint.
        for (int a = 0; a < si.num_orders(); ++a) {
            for (int b = a + 1; b < si.num_orders(); ++b) {
                const auto& pa = plan.assignments[a];
                const auto& pb = plan.assignments[b];
                if (pa.bin == 0 || pb.bin == 0 || pa.bin != pb.bin) continue;
                const bool disjoint = pa.close_pos < pb.open_pos || pb.close_pos < pa.open_pos;
                CHECK(disjoint);
            }
        }
    }
}
