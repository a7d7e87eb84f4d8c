#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "rackopt/gen/generator.hpp"
#include "rackopt/io/json_io.hpp"
#include "rackopt/io/results_csv.hpp"
#include "test_support.hpp"

using namespace rackopt;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("item count law matches the closed form") {
    const double mu = 1.0 / 1.73;
    // P(m) = mu (1-mu)^(m-1) / (1 - (1-mu)^4), evaluated directly.
    const double z = 1.0 - std::pow(1.0 - mu, 4);
    for (int m = 1; m <= 4; ++m) {
        const double expect = mu * std::pow(1.0 - mu, m - 1) / z;
        CHECK_THAT(gen::item_count_probability(mu, m), Catch::Matchers::WithinAbs(expect, 1e-12));
    }
    CHECK_THAT(gen::item_count_probability(mu, 1),
               Catch::Matchers::WithinAbs(mu / z, 1e-12));
    CHECK(gen::item_count_probability(mu, 5) == 0.0);
}

TEST_CASE("sampled orders follow the composition rules") {
    gen::Rng rng(42);
    for (int t = 0; t < 2000; ++t) {
        Order o = gen::sample_order(rng, 1.0 / 1.73, 20);
        int units = o.total_units();
        REQUIRE(units >= 1);
        REQUIRE(units <= 4);
        switch (units) {
            case 1:
                REQUIRE(o.lines.size() == 1);
                CHECK(o.lines[0].units == 1);
                break;
            case 2:
                // Either two products x1 or one product x2.
                if (o.lines.size() == 1) {
                    CHECK(o.lines[0].units == 2);
                } else {
                    REQUIRE(o.lines.size() == 2);
                    CHECK(o.lines[0].units == 1);
                    CHECK(o.lines[1].units == 1);
                    CHECK(o.lines[0].product != o.lines[1].product);
                }
                break;
            case 3: {
                REQUIRE(o.lines.size() == 2);
                const int a = o.lines[0].units, b = o.lines[1].units;
                CHECK(((a == 1 && b == 2) || (a == 2 && b == 1)));
                CHECK(o.lines[0].product != o.lines[1].product);
                break;
            }
            default:
                REQUIRE(o.lines.size() == 2);
                CHECK(o.lines[0].units == 2);
                CHECK(o.lines[1].units == 2);
                CHECK(o.lines[0].product != o.lines[1].product);
        }
    }
}

TEST_CASE("sample_order needs at least two products") {
    gen::Rng rng(1);
    CHECK_THROWS_AS(gen::sample_order(rng, 0.5, 1), std::invalid_argument);
}

TEST_CASE("order statistics sit near the law") {
    gen::Rng rng(7);
    const double mu = 1.0 / 1.73;
    const int trials = 10000;
    std::array<int, 5> freq{};
    long total = 0;
    for (int t = 0; t < trials; ++t) {
        Order o = gen::sample_order(rng, mu, 100);
        const int m = o.total_units();
        ++freq[m];
        total += m;
    }
    const double mean = static_cast<double>(total) / trials;
    CHECK(mean > 1.55);
    CHECK(mean < 1.70);
    const double share12 = static_cast<double>(freq[1] + freq[2]) / trials;
    CHECK(share12 > 0.82);
    CHECK(share12 < 0.88);
    for (int m = 1; m <= 4; ++m) {
        const double p = static_cast<double>(freq[m]) / trials;
        CHECK(std::abs(p - gen::item_count_probability(mu, m)) < 0.02);
    }
}

TEST_CASE("generated instances respect shape and cover their demand") {
    gen::GenParams gp;
    Instance inst = gen::generate_instance(11, 60, 20, 12, {4, 4}, gp);
    CHECK(inst.num_products == 60);
    CHECK(inst.num_orders() == 20);
    CHECK(inst.num_racks() == 12);
    CHECK(inst.num_pickers() == 2);
    CHECK(validate_instance(inst).empty());
    for (const auto& r : inst.racks) CHECK(r.supply.size() == 25u);  // min(25, 60)

    std::vector<int> demand = inst.total_demand();
    std::vector<int> supply(inst.num_products, 0);
    for (const auto& r : inst.racks)
        for (const auto& l : r.supply) supply[l.product] += l.units;
    for (int i = 0; i < inst.num_products; ++i) CHECK(demand[i] <= supply[i]);
}

TEST_CASE("generation is deterministic per seed") {
    gen::GenParams gp;
    Instance a = gen::generate_instance(99, 40, 12, 10, {3, 3}, gp);
    Instance b = gen::generate_instance(99, 40, 12, 10, {3, 3}, gp);
    CHECK(a == b);
    Instance c = gen::generate_instance(100, 40, 12, 10, {3, 3}, gp);
    CHECK(!(a == c));
}

TEST_CASE("generation rejects impossible capacity sums and reports cap exhaustion") {
    CHECK_THROWS_AS(gen::generate_instance(1, 10, 3, 3, {2, 2}), std::invalid_argument);
    gen::GenParams starved;
    starved.rack_slots = 1;
    starved.rejection_cap = 5;
    // One-slot racks cannot cover 30 orders over 100 products.
    CHECK_THROWS_AS(gen::generate_instance(1, 100, 30, 2, {5}, starved), std::runtime_error);
}

TEST_CASE("paper-scale generation succeeds within the cap") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        Instance inst = gen::generate_instance(seed, 500, 50, 75, {10, 10, 10, 10, 10});
        CHECK(validate_instance(inst).empty());
    }
}

TEST_CASE("instance files round-trip byte for byte") {
    Instance inst = test_support::t1({2});
    inst.face_groups = {{0, 1}};
    const std::string p1 = temp_path("rackopt_t1a.json");
    const std::string p2 = temp_path("rackopt_t1b.json");
    io::write_instance(inst, p1);
    Instance back = io::read_instance(p1);
    CHECK(back == inst);
    io::write_instance(back, p2);
    CHECK(slurp(p1) == slurp(p2));
    std::remove(p1.c_str());
    std::remove(p2.c_str());
}

TEST_CASE("instance parsing reports the offending path") {
    const std::string p = temp_path("rackopt_bad.json");
    {
        std::ofstream out(p);
        out << R"({"name":"bad","num_products":2,
                   "orders":[{"lines":[{"product":0,"units":-1}]}],
                   "racks":[], "pickers":[]})";
    }
    try {
        io::read_instance(p);
        FAIL("expected a parse error");
    } catch (const io::ParseError& e) {
        CHECK(std::string(e.what()).find("orders[0].lines[0]") != std::string::npos);
    }
    std::remove(p.c_str());

    SECTION("empty orders are rejected") {
        const std::string q = temp_path("rackopt_bad2.json");
        {
            std::ofstream out(q);
            out << R"({"num_products":2,"orders":[{"lines":[]}],
                       "racks":[{"supply":[{"product":0,"units":1}]}],
                       "pickers":[{"capacity":1}]})";
        }
        CHECK_THROWS_AS(io::read_instance(q), io::ParseError);
        std::remove(q.c_str());
    }
}

TEST_CASE("allocation and sequence solutions round-trip") {
    alloc::Allocation a;
    a.orders_of_picker = {{0, 2}, {1}};
    a.racks_of_picker = {{1}, {0, 3}};
    a.used_racks = {0, 1, 3};
    a.draws = {{0, 1, 0, 2}};
    const std::string p = temp_path("rackopt_alloc.json");
    io::write_allocation(a, p);
    alloc::Allocation back = io::read_allocation(p);
    CHECK(back.orders_of_picker == a.orders_of_picker);
    CHECK(back.racks_of_picker == a.racks_of_picker);
    CHECK(back.used_racks == a.used_racks);  // reconstructed from the rack lists
    REQUIRE(back.draws.size() == 1);
    CHECK(back.draws[0].units == 2);
    std::remove(p.c_str());

    io::SequenceSolutionFile f;
    f.picker = 0;
    f.bins = 3;
    f.revisits = 1;
    f.solution.rack_order = {4, 7, 4, 7};
    f.solution.picks = {{0, 0, 0, 1}};
    f.solution.opens = {{0, 0}};
    f.solution.closes = {{0, 0}};
    const std::string q = temp_path("rackopt_seq.json");
    io::write_sequence(f, q);
    io::SequenceSolutionFile g = io::read_sequence(q);
    CHECK(g.bins == 3);
    CHECK(g.revisits == 1);
    CHECK(g.solution.rack_order == f.solution.rack_order);
    CHECK(g.solution.picks == f.solution.picks);
    std::remove(q.c_str());
}

TEST_CASE("results CSV formats per the reporting conventions") {
    io::ResultRow row;
    row.instance = "t1";
    row.pickers = 1;
    row.cp = "3";
    row.method = "exact";
    row.t_s = 0.1234;
    row.b_s = 0.1;
    row.ub = 3.0;
    row.gap = 0.0;
    row.lb = 3.0;
    row.fgap = 13.0434782;
    row.flb = 2.6086956;
    row.ns = 17;
    row.status = "optimal";

    const std::string line = io::results_row_string(row);
    CHECK(line == "t1,1,3,exact,0.12,0.10,3,0.00,3,13.04,2.61,17,optimal");

    io::ResultRow infeasible;
    infeasible.instance = "x";
    infeasible.pickers = 2;
    infeasible.cp = "2;1";
    infeasible.method = "exact";
    infeasible.t_s = 0.5;
    infeasible.status = "infeasible";
    CHECK(io::results_row_string(infeasible) == "x,2,2;1,exact,0.50,,,,,,,,infeasible");

    const std::string full = io::results_csv_string({row});
    CHECK(full.rfind("instance,P,Cp,method,T_s,B_s,UB,GAP,LB,FGAP,FLB,NS,status\n", 0) == 0);
    // 13 comma-separated fields per row.
    int commas = 0;
    for (char c : line) commas += c == ',';
    CHECK(commas == 12);
}
