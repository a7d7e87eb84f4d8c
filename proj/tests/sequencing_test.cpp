#include <catch2/catch_amalgamated.hpp>

#include "rackopt/gen/rng.hpp"
#include "rackopt/oracles/sequence_oracle.hpp"
#include "rackopt/sequencing/build.hpp"
#include "rackopt/sequencing/instance.hpp"
#include "rackopt/sequencing/solve.hpp"
#include "rackopt/sequencing/verify.hpp"

using namespace rackopt;
using namespace rackopt::seq;

namespace {

milp::SolveParams quick_params() {
    milp::SolveParams p;
    p.time_limit_s = 120.0;
    return p;
}

// Two orders, each one unit of both products; one rack per product.
SequencingInstance s1(int bins, int revisits) {
    return make_sequencing_instance({{1, 1}, {1, 1}}, {{2, 0}, {0, 2}}, bins, revisits);
}

// Random small instance with the supply precondition built in: each order's
// demand is routed to randomly chosen racks, plus optional slack units.
SequencingInstance random_seq_instance(std::uint64_t seed, int max_orders, int max_racks, int bins,
                                       int revisits) {
    gen::Rng rng(seed);
    const int O = 1 + rng.below_int(max_orders);
    const int L = 2 + rng.below_int(max_racks - 1);
    const int NP = 2 + rng.below_int(3);
    std::vector<std::vector<int>> demand(O, std::vector<int>(NP, 0));
    std::vector<std::vector<int>> supply(L, std::vector<int>(NP, 0));
    for (int o = 0; o < O; ++o) {
        const int items = 1 + rng.below_int(2);  // 1..2 distinct products
        for (int t = 0; t < items; ++t) {
            const int i = rng.below_int(NP);
            if (demand[o][i] >= 2) continue;
            const int units = 1 + rng.below_int(2 - demand[o][i]);
            demand[o][i] += units;
            for (int u = 0; u < units; ++u) supply[rng.below_int(L)][i] += 1;
        }
    }
    // Some slack inventory.
    for (int t = rng.below_int(3); t > 0; --t) supply[rng.below_int(L)][rng.below_int(NP)] += 1;
    // Guarantee every order demands something.
    for (int o = 0; o < O; ++o) {
        bool any = false;
        for (int i = 0; i < NP; ++i) any = any || demand[o][i] > 0;
        if (!any) {
            demand[o][0] = 1;
            supply[rng.below_int(L)][0] += 1;
        }
    }
    return make_sequencing_instance(std::move(demand), std::move(supply), bins, revisits);
}

}  // namespace

TEST_CASE("single-unit orders and their product are derived") {
    SequencingInstance si = make_sequencing_instance({{1, 0}, {1, 1}, {0, 2}}, {{2, 2}}, 2, 0);
    CHECK(si.is_single_unit == std::vector<bool>{true, false, false});
    CHECK(si.tau == std::vector<int>{0, -1, -1});
}

TEST_CASE("derive_sequencing_instance restricts products and checks supply") {
    Instance inst;
    inst.num_products = 4;
    inst.orders = {{{{0, 1}}}, {{{0, 1}, {1, 1}}}};
    inst.racks = {{{{0, 2}, {3, 5}}}, {{{1, 1}}}};
    inst.pickers = {{2}};

    alloc::Allocation a;
    a.orders_of_picker = {{0, 1}};
    a.racks_of_picker = {{0, 1}};
    a.used_racks = {0, 1};

    SequencingInstance si = derive_sequencing_instance(inst, a, false, 0, 3, 0);
    CHECK(si.num_orders() == 2);
    CHECK(si.num_products() == 2);  // product 3 is undemanded here
    CHECK(si.num_racks() == 2);
    CHECK(si.is_single_unit == std::vector<bool>{true, false});

    SECTION("missing supply is an error") {
        alloc::Allocation bad = a;
        bad.racks_of_picker = {{1}};  // rack 1 lacks product 0
        CHECK_THROWS_AS(derive_sequencing_instance(inst, bad, false, 0, 3, 0),
                        std::invalid_argument);
    }
    SECTION("shared mode uses the picker's draws as supplies") {
        alloc::Allocation shared = a;
        shared.draws = {{0, 0, 0, 2}, {1, 1, 0, 1}};
        SequencingInstance s2 = derive_sequencing_instance(inst, shared, true, 0, 3, 0);
        CHECK(s2.supply[0][0] == 2);
        CHECK(s2.supply[1][1] == 1);
    }
}

TEST_CASE("an order needing two units of one product is not single-unit") {
    SequencingInstance si = make_sequencing_instance({{2, 0}}, {{2, 0}}, 2, 0);
    CHECK(si.is_single_unit == std::vector<bool>{false});
}

TEST_CASE("theorem-2 reduction partitions the orders") {
    SequencingInstance si = make_sequencing_instance({{1, 0}, {1, 1}, {0, 1}}, {{2, 2}}, 2, 0);
    Reduction red = reduce_single_unit_orders(si);
    CHECK(red.reduced.num_orders() + static_cast<int>(red.deferred.size()) == si.num_orders());
    CHECK(red.deferred.size() == 2);
    CHECK(red.reduced.num_orders() == 1);
    CHECK(red.reduced.supply == si.supply);

    SECTION("no single-unit orders is the identity") {
        SequencingInstance none = make_sequencing_instance({{1, 1}, {2, 0}}, {{2, 2}}, 2, 0);
        Reduction r2 = reduce_single_unit_orders(none);
        CHECK(r2.deferred.empty());
        CHECK(r2.reduced.num_orders() == 2);
    }
    SECTION("refuses the single-bin regime") {
        SequencingInstance b1 = make_sequencing_instance({{1, 0}}, {{2, 2}}, 1, 0);
        CHECK_THROWS_AS(reduce_single_unit_orders(b1), std::invalid_argument);
    }
}

TEST_CASE("model size matches the construction rules on the two-rack example") {
    SequencingInstance si = s1(3, 0);
    SequencingModel sm = build_sequencing_model(si, SequencingMode::no_revisit);
    CHECK(sm.slots == 2);
    CHECK(sm.gamma.size() == 8);  // 2 orders x 2 products x 2 positions
    CHECK(sm.big_gamma.empty());

    SECTION("revisit copies double the positions and couple rack inventory") {
        SequencingInstance rv = s1(2, 1);
        SequencingModel sm2 = build_sequencing_model(rv, SequencingMode::revisit);
        CHECK(sm2.slots == 4);
        int inventory_rows = 0;
        for (const auto& c : sm2.model.constraints()) {
            if (c.name.rfind("rack_inventory[", 0) == 0) ++inventory_rows;
        }
        CHECK(inventory_rows == 2);  // (p0, r0) and (p1, r1)
    }
    SECTION("single-unit orders tie their pick to being open") {
        SequencingInstance one = make_sequencing_instance({{1, 0}, {1, 1}}, {{2, 1}}, 2, 0);
        SequencingModel sm3 = build_sequencing_model(one, SequencingMode::no_revisit);
        int tie_rows = 0;
        for (const auto& c : sm3.model.constraints()) {
            if (c.name.rfind("single_pick[", 0) == 0) ++tie_rows;
        }
        CHECK(tie_rows == 1);  // order 0, position 0 (K = 1)
    }
}

TEST_CASE("two spanning orders need three bins without revisits") {
    auto no_reduction_and_with = GENERATE(false, true);
    SECTION(no_reduction_and_with ? "theorem 2 on" : "theorem 2 off") {
        SequenceOutcome two = solve_sequencing(s1(2, 0), SequencingMode::no_revisit, quick_params(),
                                               no_reduction_and_with);
        CHECK(two.result == SequenceFeasibility::proven_infeasible);

        SequenceOutcome three = solve_sequencing(s1(3, 0), SequencingMode::no_revisit,
                                                 quick_params(), no_reduction_and_with);
        REQUIRE(three.result == SequenceFeasibility::feasible);
        CHECK(verify_sequence(s1(3, 0), *three.solution).ok());
    }
}

TEST_CASE("one revisit makes two bins enough") {
    SequencingInstance si = s1(2, 1);
    SequenceOutcome out = solve_sequencing(si, SequencingMode::revisit, quick_params());
    REQUIRE(out.result == SequenceFeasibility::feasible);
    CHECK(out.solution->rack_order.size() == 4);
    CHECK(verify_sequence(si, *out.solution).ok());
}

TEST_CASE("oracle decides the two-rack example") {
    CHECK(!oracle::brute_force_sequence_feasible(s1(2, 0), SequencingMode::no_revisit));
    CHECK(oracle::brute_force_sequence_feasible(s1(3, 0), SequencingMode::no_revisit));
    CHECK(oracle::brute_force_sequence_feasible(s1(2, 1), SequencingMode::revisit));
}

TEST_CASE("single rack is feasible for any bin count") {
    SequencingInstance si = make_sequencing_instance({{1, 1}, {2, 0}}, {{4, 2}}, 1, 0);
    CHECK(oracle::brute_force_sequence_feasible(si, SequencingMode::no_revisit));
    SequenceOutcome out = solve_sequencing(si, SequencingMode::no_revisit, quick_params());
    CHECK(out.result == SequenceFeasibility::feasible);
}

TEST_CASE("oracle refuses out-of-bounds instances") {
    SequencingInstance big = make_sequencing_instance(
        {{1}, {1}, {1}, {1}, {1}, {1}},
        {{1}, {1}, {1}, {1}, {1}, {1}}, 2, 0);
    CHECK_THROWS_AS(oracle::brute_force_sequence_feasible(big, SequencingMode::no_revisit),
                    std::invalid_argument);
}

TEST_CASE("solver agrees with the oracle on random instances") {
    int cells = 0;
    for (std::uint64_t seed = 900; seed < 950; ++seed) {
        SequencingInstance si = random_seq_instance(seed, 4, 4, 2, 0);
        if (si.num_racks() > 5 || si.num_orders() > 5) continue;
        for (int bins = 2; bins <= 4; ++bins) {
            si.bins = bins;
            const bool oracle_says = oracle::brute_force_sequence_feasible(si, SequencingMode::no_revisit);
            SequenceOutcome out = solve_sequencing(si, SequencingMode::no_revisit, quick_params());
            INFO("seed " << seed << " bins " << bins);
            REQUIRE(out.result != SequenceFeasibility::unknown);
            CHECK((out.result == SequenceFeasibility::feasible) == oracle_says);
            if (out.solution) CHECK(verify_sequence(si, *out.solution).ok());
            ++cells;
        }
    }
    CHECK(cells >= 100);
}

TEST_CASE("solver agrees with the oracle under one revisit") {
    for (std::uint64_t seed = 1000; seed < 1015; ++seed) {
        SequencingInstance si = random_seq_instance(seed, 3, 2, 2, 1);
        if (si.num_racks() * 2 > 5) continue;
        const bool oracle_says = oracle::brute_force_sequence_feasible(si, SequencingMode::revisit);
        SequenceOutcome out = solve_sequencing(si, SequencingMode::revisit, quick_params());
        INFO("seed " << seed);
        REQUIRE(out.result != SequenceFeasibility::unknown);
        CHECK((out.result == SequenceFeasibility::feasible) == oracle_says);
        if (out.solution) CHECK(verify_sequence(si, *out.solution).ok());
    }
}

TEST_CASE("feasibility is monotone in bins and revisits") {
    for (std::uint64_t seed = 1100; seed < 1130; ++seed) {
        SequencingInstance si = random_seq_instance(seed, 4, 3, 2, 0);
        if (si.num_racks() > 5 || si.num_orders() > 5) continue;
        bool prev = false;
        for (int bins = 2; bins <= 4; ++bins) {
            si.bins = bins;
            const bool now = oracle::brute_force_sequence_feasible(si, SequencingMode::no_revisit);
            INFO("seed " << seed << " bins " << bins);
            if (prev) CHECK(now);
            prev = now;
        }
        if (si.num_racks() * 2 <= 5) {
            si.bins = 2;
            si.max_revisits = 0;
            const bool m0 = oracle::brute_force_sequence_feasible(si, SequencingMode::no_revisit);
            si.max_revisits = 1;
            const bool m1 = oracle::brute_force_sequence_feasible(si, SequencingMode::revisit);
            INFO("seed " << seed << " revisit step");
            if (m0) CHECK(m1);
        }
    }
}

TEST_CASE("theorem-2 path reproduces full-model decisions") {
    for (std::uint64_t seed = 1200; seed < 1230; ++seed) {
        SequencingInstance si = random_seq_instance(seed, 4, 3, 2, 0);
        bool has_single = false;
        for (bool b : si.is_single_unit) has_single = has_single || b;
        if (!has_single) continue;
        SequenceOutcome with = solve_sequencing(si, SequencingMode::no_revisit, quick_params(), true);
        SequenceOutcome without = solve_sequencing(si, SequencingMode::no_revisit, quick_params(), false);
        INFO("seed " << seed);
        CHECK(with.result == without.result);
        if (with.result == SequenceFeasibility::feasible) {
            CHECK(with.used_reduction);
            CHECK(verify_sequence(si, *with.solution).ok());
        }
    }
}

TEST_CASE("reinsertion places deferred orders on racks with spare stock") {
    // One spanning order picks one unit of p0 at rack 0; the deferred
    // single-unit order takes the spare p0 unit there.
    SequencingInstance si = make_sequencing_instance({{1, 1}, {1, 0}}, {{2, 0}, {0, 1}}, 2, 0);
    Reduction red = reduce_single_unit_orders(si);
    REQUIRE(red.deferred.size() == 1);

    SequenceSolution reduced;
    reduced.rack_order = {0, 1};
    reduced.picks = {{0, 0, 0, 1}, {1, 0, 1, 1}};
    reduced.opens = {{0, 0}};
    reduced.closes = {{0, 1}};

    SequenceSolution full = reinsert_single_unit_orders(reduced, red, si);
    CHECK(verify_sequence(si, full).ok());
    bool deferred_at_zero = false;
    for (const auto& e : full.opens) {
        if (e.order == 1) deferred_at_zero = e.position == 0;
    }
    CHECK(deferred_at_zero);

    SECTION("a deferred order whose spare sits on the last rack lands there") {
        SequencingInstance tail = make_sequencing_instance({{2, 0}, {0, 1}}, {{2, 0}, {0, 1}}, 2, 0);
        Reduction r2 = reduce_single_unit_orders(tail);
        REQUIRE(r2.deferred.size() == 1);
        SequenceSolution base;
        base.rack_order = {0, 1};
        base.picks = {{0, 0, 0, 2}};
        base.opens = {{0, 0}};
        base.closes = {{0, 0}};
        SequenceSolution full2 = reinsert_single_unit_orders(base, r2, tail);
        CHECK(verify_sequence(tail, full2).ok());
        for (const auto& e : full2.opens) {
            if (e.order == 1) CHECK(e.position == 1);
        }
    }
    SECTION("empty deferred list is the identity") {
        SequencingInstance none = make_sequencing_instance({{1, 1}}, {{2, 2}}, 2, 0);
        Reduction r3 = reduce_single_unit_orders(none);
        CHECK(r3.deferred.empty());
        SequenceSolution base;
        base.rack_order = {0};
        base.picks = {{0, 0, 0, 1}, {1, 0, 0, 1}};
        base.opens = {{0, 0}};
        base.closes = {{0, 0}};
        SequenceSolution same = reinsert_single_unit_orders(base, r3, none);
        CHECK(same.picks == base.picks);
        CHECK(same.rack_order == base.rack_order);
    }
}

TEST_CASE("all-single-unit instances sequence trivially under the reduction") {
    SequencingInstance si = make_sequencing_instance({{1, 0}, {0, 1}, {1, 0}},
                                                     {{2, 0}, {0, 2}}, 2, 0);
    SequenceOutcome out = solve_sequencing(si, SequencingMode::no_revisit, quick_params());
    REQUIRE(out.result == SequenceFeasibility::feasible);
    CHECK(out.used_reduction);
    CHECK(out.nodes == 0);  // no model was needed
    CHECK(verify_sequence(si, *out.solution).ok());
}
