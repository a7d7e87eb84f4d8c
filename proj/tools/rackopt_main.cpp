#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rackopt/rackopt.hpp"

namespace {

using namespace rackopt;

constexpr int kExitFeasible = 0;
constexpr int kExitInfeasible = 2;
constexpr int kExitUnknown = 3;
constexpr int kExitUsage = 64;
constexpr int kExitError = 1;

double default_time_limit() {
    if (const char* env = std::getenv("RACKOPT_TIME_LIMIT_S")) {
        try {
            const double v = std::stod(env);
            if (v > 0) return v;
        } catch (...) {
        }
        std::cerr << "warning: ignoring invalid RACKOPT_TIME_LIMIT_S\n";
    }
    return 300.0;
}

int exit_code(milp::SolveStatus s) {
    switch (s) {
        case milp::SolveStatus::optimal:
        case milp::SolveStatus::feasible_time_limit:
            return kExitFeasible;
        case milp::SolveStatus::proven_infeasible:
        case milp::SolveStatus::unbounded:
            return kExitInfeasible;
        case milp::SolveStatus::unknown_time_limit:
            return kExitUnknown;
    }
    return kExitError;
}

int exit_code(seq::SequenceFeasibility f) {
    switch (f) {
        case seq::SequenceFeasibility::feasible: return kExitFeasible;
        case seq::SequenceFeasibility::proven_infeasible: return kExitInfeasible;
        case seq::SequenceFeasibility::unknown: return kExitUnknown;
    }
    return kExitError;
}

std::vector<alloc::Pin> parse_pins(const std::vector<std::string>& order_pins,
                                   const std::vector<std::string>& rack_pins) {
    std::vector<alloc::Pin> pins;
    auto parse = [](const std::string& s, alloc::Pin::Kind kind) {
        const auto colon = s.find(':');
        if (colon == std::string::npos) {
            throw CLI::ValidationError("pins take the form ITEM:PICKER");
        }
        alloc::Pin pin;
        pin.kind = kind;
        pin.item = std::stoi(s.substr(0, colon));
        pin.picker = std::stoi(s.substr(colon + 1));
        pin.value = true;
        return pin;
    };
    for (const auto& s : order_pins) pins.push_back(parse(s, alloc::Pin::Kind::order_to_picker));
    for (const auto& s : rack_pins) pins.push_back(parse(s, alloc::Pin::Kind::rack_to_picker));
    return pins;
}

void append_csv_row(const std::string& path, const io::ResultRow& row) {
    const bool fresh = !std::ifstream(path).good();
    std::ofstream out(path, std::ios::app);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    if (fresh) out << io::results_csv_header() << "\n";
    out << io::results_row_string(row) << "\n";
}

int run_gen(std::uint64_t seed, int products, int orders, int racks, std::vector<int> capacities,
            int pickers, int capacity, double mu, int rack_slots, int max_rejects,
            const std::string& out_path) {
    if (capacities.empty()) {
        if (pickers < 1 || capacity < 0) {
            std::cerr << "gen: give either --capacities or --pickers with --capacity\n";
            return kExitUsage;
        }
        capacities.assign(pickers, capacity);
    }
    gen::GenParams params;
    params.mu = mu;
    params.rack_slots = rack_slots;
    params.rejection_cap = max_rejects;
    Instance inst = gen::generate_instance(seed, products, orders, racks, capacities, params);
    io::write_instance(inst, out_path);
    std::cout << "wrote " << out_path << " (" << inst.name << ")\n";
    return kExitFeasible;
}

struct AllocateArgs {
    std::string instance_path;
    std::string method = "exact";
    int tau = 1;
    double time_limit = default_time_limit();
    std::uint64_t seed = 0;
    std::string out_path;
    std::string csv_path;
    bool shared_racks = false;
    std::string objective = "rack-count";
    bool no_prune = false;
    int min_total = -1;
    std::string preassigned_path;
    std::vector<std::string> pin_orders, pin_racks;
};

int run_allocate(const AllocateArgs& args) {
    Instance inst = io::read_instance(args.instance_path);

    alloc::AllocationOptions opt;
    opt.shared_racks = args.shared_racks;
    opt.prune = !args.no_prune;
    if (args.objective == "rack-visits") {
        opt.objective = alloc::ObjectiveMode::rack_visits;
    } else if (args.objective != "rack-count") {
        std::cerr << "allocate: unknown objective '" << args.objective << "'\n";
        return kExitUsage;
    }
    if (args.min_total >= 0) {
        opt.workload = alloc::WorkloadMode::min_total;
        opt.min_total_orders = args.min_total;
    }
    if (!args.preassigned_path.empty()) {
        std::ifstream in(args.preassigned_path);
        if (!in) {
            std::cerr << "allocate: cannot open " << args.preassigned_path << "\n";
            return kExitError;
        }
        io::json j;
        in >> j;
        opt.preassigned = j.get<std::vector<int>>();
    }
    opt.pins = parse_pins(args.pin_orders, args.pin_racks);

    alloc::AllocationResult res;
    std::string method_label = args.method;
    if (args.method == "exact") {
        milp::SolveParams sp;
        sp.time_limit_s = args.time_limit;
        sp.seed = args.seed;
        res = alloc::solve_allocation(inst, opt, sp);
    } else if (args.method == "spb" || args.method == "pio" || args.method == "portfolio") {
        heur::HeuristicParams hp;
        hp.total_time_limit_s = args.time_limit;
        hp.tau = args.tau;
        hp.seed = args.seed;
        if (args.method == "spb") {
            res = heur::spb(inst, hp, opt).result;
        } else if (args.method == "pio") {
            res = heur::pio(inst, args.tau, hp, opt).result;
            method_label = "pio:" + std::to_string(args.tau);
        } else {
            std::vector<heur::Approach> mix = {{heur::Approach::Kind::exact, 1},
                                               {heur::Approach::Kind::spb, 1},
                                               {heur::Approach::Kind::pio, 1},
                                               {heur::Approach::Kind::pio, 2}};
            heur::PortfolioResult pf = heur::portfolio(inst, mix, hp, opt);
            for (const auto& [name, r] : pf.table) {
                std::cout << name << ": "
                          << (r.metrics.ub ? std::to_string(static_cast<long>(*r.metrics.ub))
                                           : std::string("-"))
                          << " (" << milp::to_string(r.status) << ")\n";
            }
            if (pf.best()) {
                res = *pf.best();
            } else {
                std::cerr << "portfolio: no approach produced an allocation\n";
                return kExitUnknown;
            }
        }
    } else {
        std::cerr << "allocate: unknown method '" << args.method << "'\n";
        return kExitUsage;
    }

    const bool heuristic = args.method != "exact";
    io::ResultRow row = bench::detail::row_from_allocation(inst, method_label, res, heuristic);
    std::cout << io::results_csv_header() << "\n" << io::results_row_string(row) << "\n";
    if (!args.csv_path.empty()) append_csv_row(args.csv_path, row);

    if (res.allocation) {
        if (!args.out_path.empty()) io::write_allocation(*res.allocation, args.out_path);
        auto rep = alloc::verify_allocation(inst, opt, *res.allocation);
        if (!rep.ok()) {
            std::cerr << "internal check failed:\n" << rep.to_string() << "\n";
            return kExitError;
        }
    } else if (!res.note.empty()) {
        std::cerr << "note: " << res.note << "\n";
    }
    if (heuristic) {
        return res.allocation ? kExitFeasible
                              : (res.status == milp::SolveStatus::proven_infeasible ? kExitInfeasible
                                                                                    : kExitUnknown);
    }
    return exit_code(res.status);
}

struct SequenceArgs {
    std::string instance_path;
    std::string allocation_path;
    int picker = 0;
    int bins = 2;
    int revisits = 0;
    bool single_bin = false;
    bool no_theorem2 = false;
    bool pool_greedy = false;
    double time_limit = default_time_limit();
    std::uint64_t seed = 0;
    std::string out_path;
    std::string csv_path;
};

int run_sequence(const SequenceArgs& args) {
    Instance inst = io::read_instance(args.instance_path);
    alloc::Allocation allocation = io::read_allocation(args.allocation_path);
    const bool shared = !allocation.draws.empty();

    if (args.single_bin && args.bins != 1) {
        std::cerr << "sequence: --single-bin is the B = 1 formulation; use --bins 1\n";
        return kExitUsage;
    }

    seq::SequencingInstance si;
    try {
        si = seq::derive_sequencing_instance(inst, allocation, shared, args.picker, args.bins,
                                             args.revisits);
    } catch (const std::invalid_argument& e) {
        std::cerr << "sequence: " << e.what() << "\n";
        return kExitInfeasible;
    }

    io::SequenceSolutionFile file;
    file.picker = args.picker;
    file.bins = args.bins;
    file.revisits = args.revisits;

    auto write_out = [&](const seq::SequenceSolution& sol) {
        file.solution = sol;
        file.unbounded_revisits = sol.unbounded_revisits;
        // Rack positions go out as original rack indices.
        for (int& r : file.solution.rack_order) r = si.rack_ids[r];
        if (!args.out_path.empty()) io::write_sequence(file, args.out_path);
    };

    io::ResultRow row;
    row.instance = inst.name.empty() ? args.instance_path : inst.name;
    row.pickers = inst.num_pickers();
    row.cp = std::to_string(inst.pickers[args.picker].capacity);

    if (args.pool_greedy) {
        seq::SequenceSolution sol = seq::pool_greedy_sequence(si);
        write_out(sol);
        row.method = "pool-greedy";
        row.status = "feasible";
        std::cout << io::results_csv_header() << "\n" << io::results_row_string(row) << "\n";
        if (!args.csv_path.empty()) append_csv_row(args.csv_path, row);
        return kExitFeasible;
    }

    const seq::SequencingMode mode =
        args.single_bin
            ? seq::SequencingMode::single_bin
            : (args.revisits >= 1 ? seq::SequencingMode::revisit : seq::SequencingMode::no_revisit);
    milp::SolveParams sp;
    sp.time_limit_s = args.time_limit;
    sp.seed = args.seed;
    seq::SequenceOutcome out = seq::solve_sequencing(si, mode, sp, !args.no_theorem2);

    row.method = "sequence:B" + std::to_string(args.bins) + ":M" + std::to_string(args.revisits);
    row.t_s = out.total_time_s;
    row.ns = out.nodes;
    row.status = bench::status_label(out.result);
    std::cout << io::results_csv_header() << "\n" << io::results_row_string(row) << "\n";
    if (!args.csv_path.empty()) append_csv_row(args.csv_path, row);

    if (out.solution) write_out(*out.solution);
    return exit_code(out.result);
}

int run_verify(const std::string& instance_path, const std::string& solution_path,
               const std::string& allocation_path, bool shared_flag, int min_total) {
    Instance inst = io::read_instance(instance_path);

    std::ifstream in(solution_path);
    if (!in) {
        std::cerr << "verify: cannot open " << solution_path << "\n";
        return kExitError;
    }
    io::json j;
    in >> j;

    if (j.contains("orders_of_picker")) {
        alloc::Allocation a = io::allocation_from_json(j);
        alloc::AllocationOptions opt;
        opt.shared_racks = shared_flag || !a.draws.empty();
        if (min_total >= 0) {
            opt.workload = alloc::WorkloadMode::min_total;
            opt.min_total_orders = min_total;
        }
        VerifyReport rep = alloc::verify_allocation(inst, opt, a);
        std::cout << (rep.ok() ? "ok" : rep.to_string()) << "\n";
        return rep.ok() ? kExitFeasible : kExitInfeasible;
    }

    if (j.contains("rack_order")) {
        if (allocation_path.empty()) {
            std::cerr << "verify: sequence solutions need --allocation\n";
            return kExitUsage;
        }
        alloc::Allocation a = io::read_allocation(allocation_path);
        io::SequenceSolutionFile f = io::sequence_from_json(j);
        const bool shared = shared_flag || !a.draws.empty();
        seq::SequencingInstance si =
            seq::derive_sequencing_instance(inst, a, shared, f.picker, f.bins, f.revisits);
        // File rack positions carry original rack indices; map them back.
        std::vector<int> local(inst.num_racks(), -1);
        for (size_t r = 0; r < si.rack_ids.size(); ++r) local[si.rack_ids[r]] = static_cast<int>(r);
        for (int& r : f.solution.rack_order) {
            if (r < 0 || r >= inst.num_racks() || local[r] < 0) {
                std::cout << "rack_order names rack " << r << " not allocated to picker "
                          << f.picker << "\n";
                return kExitInfeasible;
            }
            r = local[r];
        }
        VerifyReport rep = seq::verify_sequence(si, f.solution);
        std::cout << (rep.ok() ? "ok" : rep.to_string()) << "\n";
        return rep.ok() ? kExitFeasible : kExitInfeasible;
    }

    std::cerr << "verify: unrecognised solution file (need orders_of_picker or rack_order)\n";
    return kExitUsage;
}

int run_bench(const std::string& suite_path, const std::string& out_path, int jobs) {
    bench::BenchSuite suite = bench::read_suite(suite_path);
    if (suite.default_time_limit_s == 300.0) suite.default_time_limit_s = default_time_limit();
    std::vector<io::ResultRow> rows = bench::run_bench_suite(suite, jobs);
    io::write_results_csv(rows, out_path);
    std::cout << "wrote " << rows.size() << " rows to " << out_path << "\n";
    return kExitFeasible;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"order/rack allocation and picker rack sequencing toolkit"};
    app.require_subcommand(1);

    // gen
    auto* gen_cmd = app.add_subcommand("gen", "generate a seeded instance file");
    std::uint64_t g_seed = 1;
    int g_products = 100, g_orders = 20, g_racks = 20, g_pickers = 0, g_capacity = -1;
    int g_rack_slots = 25, g_max_rejects = 1000;
    double g_mu = 1.0 / 1.73;
    std::vector<int> g_capacities;
    std::string g_out;
    gen_cmd->add_option("--seed", g_seed, "random seed");
    gen_cmd->add_option("--products", g_products, "number of products")->required();
    gen_cmd->add_option("--orders", g_orders, "number of orders")->required();
    gen_cmd->add_option("--racks", g_racks, "number of racks")->required();
    gen_cmd->add_option("--capacities", g_capacities, "per-picker capacities");
    gen_cmd->add_option("--pickers", g_pickers, "picker count (with --capacity)");
    gen_cmd->add_option("--capacity", g_capacity, "uniform capacity (with --pickers)");
    gen_cmd->add_option("--mu", g_mu, "item-count law parameter");
    gen_cmd->add_option("--rack-slots", g_rack_slots, "distinct products per rack");
    gen_cmd->add_option("--max-rejects", g_max_rejects, "regeneration cap");
    gen_cmd->add_option("--out", g_out, "output instance file")->required();

    // allocate
    auto* alloc_cmd = app.add_subcommand("allocate", "allocate orders and racks to pickers");
    AllocateArgs a;
    alloc_cmd->add_option("--instance", a.instance_path, "instance file")->required();
    alloc_cmd->add_option("--method", a.method, "exact | spb | pio | portfolio");
    alloc_cmd->add_option("--tau", a.tau, "PIO block size")->check(CLI::PositiveNumber);
    alloc_cmd->add_option("--time-limit", a.time_limit, "wall-clock limit in seconds");
    alloc_cmd->add_option("--seed", a.seed, "solver seed");
    alloc_cmd->add_option("--out", a.out_path, "solution JSON output");
    alloc_cmd->add_option("--csv", a.csv_path, "append one results row to this CSV");
    alloc_cmd->add_flag("--shared-racks", a.shared_racks, "racks may serve several pickers");
    alloc_cmd->add_option("--objective", a.objective, "rack-count | rack-visits");
    alloc_cmd->add_flag("--no-prune", a.no_prune, "keep racks with no demanded product");
    alloc_cmd->add_option("--min-total", a.min_total,
                          "replace per-picker capacities by a minimum total order count");
    alloc_cmd->add_option("--preassigned", a.preassigned_path,
                          "JSON array mapping each order to its picker");
    alloc_cmd->add_option("--pin-order", a.pin_orders, "ORDER:PICKER, force an assignment");
    alloc_cmd->add_option("--pin-rack", a.pin_racks, "RACK:PICKER, force an assignment");

    // sequence
    auto* seq_cmd = app.add_subcommand("sequence", "sequence one picker's racks");
    SequenceArgs s;
    seq_cmd->add_option("--instance", s.instance_path, "instance file")->required();
    seq_cmd->add_option("--allocation", s.allocation_path, "allocation solution file")->required();
    seq_cmd->add_option("--picker", s.picker, "picker index");
    seq_cmd->add_option("--bins", s.bins, "bin positions B")->required()->check(CLI::PositiveNumber);
    seq_cmd->add_option("--revisits", s.revisits, "max revisits M")->check(CLI::NonNegativeNumber);
    seq_cmd->add_flag("--single-bin", s.single_bin, "use the B = 1 formulation");
    seq_cmd->add_flag("--no-theorem2", s.no_theorem2, "skip the single-unit-order reduction");
    seq_cmd->add_flag("--pool-greedy", s.pool_greedy,
                      "constructive pool sequence with unbounded revisits");
    seq_cmd->add_option("--time-limit", s.time_limit, "wall-clock limit in seconds");
    seq_cmd->add_option("--seed", s.seed, "solver seed");
    seq_cmd->add_option("--out", s.out_path, "sequence JSON output");
    seq_cmd->add_option("--csv", s.csv_path, "append one results row to this CSV");

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "verify a solution file against an instance");
    std::string v_instance, v_solution, v_allocation;
    bool v_shared = false;
    int v_min_total = -1;
    verify_cmd->add_option("--instance", v_instance, "instance file")->required();
    verify_cmd->add_option("--solution", v_solution, "allocation or sequence solution")->required();
    verify_cmd->add_option("--allocation", v_allocation,
                           "allocation file (required for sequence solutions)");
    verify_cmd->add_flag("--shared-racks", v_shared, "verify under shared-rack semantics");
    verify_cmd->add_option("--min-total", v_min_total, "verify under the minimum-total workload");

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "run a benchmark suite");
    std::string b_suite, b_out = "results.csv";
    int b_jobs = 1;
    bench_cmd->add_option("--suite", b_suite, "suite JSON file")->required();
    bench_cmd->add_option("--out", b_out, "results CSV path");
    bench_cmd->add_option("--jobs", b_jobs, "concurrent cells")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*gen_cmd) {
            return run_gen(g_seed, g_products, g_orders, g_racks, g_capacities, g_pickers,
                           g_capacity, g_mu, g_rack_slots, g_max_rejects, g_out);
        }
        if (*alloc_cmd) return run_allocate(a);
        if (*seq_cmd) return run_sequence(s);
        if (*verify_cmd) return run_verify(v_instance, v_solution, v_allocation, v_shared, v_min_total);
        if (*bench_cmd) return run_bench(b_suite, b_out, b_jobs);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitUsage;
}
