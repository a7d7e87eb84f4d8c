#pragma once

#include <cctype>
#include <future>
#include <optional>
#include <semaphore>
#include <stdexcept>
#include <string>
#include <vector>

#include "rackopt/gen/generator.hpp"
#include "rackopt/heuristics/portfolio.hpp"
#include "rackopt/io/json_io.hpp"
#include "rackopt/io/results_csv.hpp"
#include "rackopt/sequencing/solve.hpp"

namespace rackopt::bench {

struct GenSpec {
    std::uint64_t seed = 1;
    int products = 100;
    int orders = 20;
    int racks = 20;
    std::vector<int> capacities;
    gen::GenParams params;
};

struct BenchCell {
    std::optional<std::string> instance_path;
    std::optional<GenSpec> generate;
    std::vector<std::string> methods;  // exact | spb | pio:K | portfolio | sequence
    std::vector<int> bins;             // sequencing grid (with method "sequence")
    std::vector<int> revisits;         // sequencing grid, defaults to {0}
    std::optional<double> time_limit_s;
};

struct BenchSuite {
    double default_time_limit_s = 300.0;
    std::vector<BenchCell> cells;
};

inline const char* status_label(milp::SolveStatus s) {
    switch (s) {
        case milp::SolveStatus::optimal: return "optimal";
        case milp::SolveStatus::feasible_time_limit: return "TL";
        case milp::SolveStatus::unknown_time_limit: return "TL";
        case milp::SolveStatus::proven_infeasible: return "infeasible";
        case milp::SolveStatus::unbounded: return "unbounded";
    }
    return "?";
}

inline const char* status_label(seq::SequenceFeasibility f) {
    switch (f) {
        case seq::SequenceFeasibility::feasible: return "feasible";
        case seq::SequenceFeasibility::proven_infeasible: return "infeasible";
        case seq::SequenceFeasibility::unknown: return "TL";
    }
    return "?";
}

namespace detail {

inline bool known_method(const std::string& m) {
    if (m == "exact" || m == "spb" || m == "portfolio" || m == "sequence") return true;
    if (m.rfind("pio", 0) == 0) {
        if (m == "pio") return true;
        if (m.size() > 4 && m[3] == ':') {
            for (size_t i = 4; i < m.size(); ++i) {
                if (!std::isdigit(static_cast<unsigned char>(m[i]))) return false;
            }
            return true;
        }
        return false;
    }
    return false;
}

inline int pio_tau(const std::string& m) {
    if (m == "pio") return 1;
    return std::stoi(m.substr(4));
}

inline std::string capacity_column(const Instance& inst) {
    if (inst.pickers.empty()) return "";
    bool uniform = true;
    for (const auto& p : inst.pickers) uniform = uniform && p.capacity == inst.pickers[0].capacity;
    if (uniform) return std::to_string(inst.pickers[0].capacity);
    std::string s;
    for (size_t i = 0; i < inst.pickers.size(); ++i) {
        if (i) s += ";";
        s += std::to_string(inst.pickers[i].capacity);
    }
    return s;
}

inline io::ResultRow base_row(const Instance& inst, const std::string& method) {
    io::ResultRow row;
    row.instance = inst.name.empty() ? "instance" : inst.name;
    row.pickers = inst.num_pickers();
    row.cp = capacity_column(inst);
    row.method = method;
    return row;
}

inline io::ResultRow row_from_allocation(const Instance& inst, const std::string& method,
                                         const alloc::AllocationResult& res, bool heuristic) {
    io::ResultRow row = base_row(inst, method);
    row.t_s = res.metrics.total_time_s;
    row.b_s = res.metrics.incumbent_time_s;
    row.ub = res.metrics.ub;
    row.gap = res.metrics.gap;
    row.lb = res.metrics.lb;
    row.fgap = res.metrics.fgap;
    row.flb = res.metrics.flb;
    row.ns = res.metrics.nodes;
    if (heuristic) {
        row.status = res.allocation ? "feasible" : "failed";
    } else {
        row.status = status_label(res.status);
    }
    return row;
}

inline std::vector<io::ResultRow> run_cell(const BenchCell& cell, double default_limit) {
    Instance inst;
    if (cell.instance_path) {
        inst = io::read_instance(*cell.instance_path);
    } else if (cell.generate) {
        const GenSpec& g = *cell.generate;
        inst = gen::generate_instance(g.seed, g.products, g.orders, g.racks, g.capacities, g.params);
    } else {
        throw std::invalid_argument("bench cell names neither an instance path nor a generator spec");
    }

    const double limit = cell.time_limit_s.value_or(default_limit);
    std::vector<io::ResultRow> rows;

    std::optional<alloc::AllocationResult> exact_cache;
    auto exact_result = [&]() -> const alloc::AllocationResult& {
        if (!exact_cache) {
            milp::SolveParams sp;
            sp.time_limit_s = limit;
            exact_cache = alloc::solve_allocation(inst, {}, sp);
        }
        return *exact_cache;
    };

    for (const auto& method : cell.methods) {
        if (method == "exact") {
            rows.push_back(row_from_allocation(inst, method, exact_result(), false));
        } else if (method == "spb") {
            heur::HeuristicParams hp;
            hp.total_time_limit_s = limit;
            rows.push_back(row_from_allocation(inst, method, heur::spb(inst, hp).result, true));
        } else if (method.rfind("pio", 0) == 0) {
            heur::HeuristicParams hp;
            hp.total_time_limit_s = limit;
            rows.push_back(row_from_allocation(
                inst, method, heur::pio(inst, pio_tau(method), hp).result, true));
        } else if (method == "portfolio") {
            heur::HeuristicParams hp;
            hp.total_time_limit_s = limit;
            std::vector<heur::Approach> mix = {{heur::Approach::Kind::exact, 1},
                                               {heur::Approach::Kind::spb, 1},
                                               {heur::Approach::Kind::pio, 1},
                                               {heur::Approach::Kind::pio, 2}};
            heur::PortfolioResult pf = heur::portfolio(inst, mix, hp);
            io::ResultRow row = base_row(inst, method);
            if (pf.best()) {
                const auto& best = *pf.best();
                row.t_s = best.metrics.total_time_s;
                row.b_s = best.metrics.incumbent_time_s;
                row.ub = best.metrics.ub;
                row.ns = best.metrics.nodes;
                row.status = "feasible";
            } else {
                row.status = "failed";
            }
            rows.push_back(std::move(row));
        } else if (method == "sequence") {
            const alloc::AllocationResult& base = exact_result();
            std::vector<int> bins = cell.bins.empty() ? std::vector<int>{2} : cell.bins;
            std::vector<int> revisits = cell.revisits.empty() ? std::vector<int>{0} : cell.revisits;
            for (int b : bins) {
                for (int m : revisits) {
                    const std::string name =
                        "sequence:B" + std::to_string(b) + ":M" + std::to_string(m);
                    io::ResultRow row = base_row(inst, name);
                    if (!base.allocation) {
                        row.status = "no_allocation";
                        rows.push_back(std::move(row));
                        continue;
                    }
                    seq::SequencingInstance si =
                        seq::derive_sequencing_instance(inst, *base.allocation, false, 0, b, m);
                    const seq::SequencingMode mode =
                        b == 1 ? seq::SequencingMode::single_bin
                               : (m >= 1 ? seq::SequencingMode::revisit
                                         : seq::SequencingMode::no_revisit);
                    milp::SolveParams sp;
                    sp.time_limit_s = limit;
                    seq::SequenceOutcome out = seq::solve_sequencing(si, mode, sp);
                    row.t_s = out.total_time_s;
                    row.ns = out.nodes;
                    row.status = status_label(out.result);
                    rows.push_back(std::move(row));
                }
            }
        } else {
            throw std::invalid_argument("bench: unknown method '" + method + "'");
        }
    }
    return rows;
}

}  // namespace detail

inline BenchSuite suite_from_json(const io::json& j) {
    BenchSuite suite;
    if (j.contains("time_limit_s")) suite.default_time_limit_s = j.at("time_limit_s").get<double>();
    if (!j.contains("cells") || !j.at("cells").is_array() || j.at("cells").empty()) {
        throw std::invalid_argument("bench suite: needs a non-empty 'cells' array");
    }
    for (const auto& c : j.at("cells")) {
        BenchCell cell;
        if (c.contains("instance")) cell.instance_path = c.at("instance").get<std::string>();
        if (c.contains("gen")) {
            const auto& g = c.at("gen");
            GenSpec spec;
            spec.seed = g.value("seed", 1);
            spec.products = io::detail::need_int(g, "products", "gen");
            spec.orders = io::detail::need_int(g, "orders", "gen");
            spec.racks = io::detail::need_int(g, "racks", "gen");
            spec.capacities = g.at("capacities").get<std::vector<int>>();
            if (g.contains("rack_slots")) spec.params.rack_slots = g.at("rack_slots").get<int>();
            if (g.contains("mu")) spec.params.mu = g.at("mu").get<double>();
            cell.generate = std::move(spec);
        }
        if (!cell.instance_path && !cell.generate) {
            throw std::invalid_argument("bench suite: cell needs 'instance' or 'gen'");
        }
        if (!c.contains("methods") || c.at("methods").empty()) {
            throw std::invalid_argument("bench suite: cell needs a non-empty 'methods' list");
        }
        for (const auto& m : c.at("methods")) {
            const std::string name = m.get<std::string>();
            if (!detail::known_method(name)) {
                throw std::invalid_argument("bench suite: unknown method '" + name + "'");
            }
            cell.methods.push_back(name);
        }
        if (c.contains("bins")) cell.bins = c.at("bins").get<std::vector<int>>();
        if (c.contains("revisits")) cell.revisits = c.at("revisits").get<std::vector<int>>();
        if (c.contains("time_limit_s")) cell.time_limit_s = c.at("time_limit_s").get<double>();
        suite.cells.push_back(std::move(cell));
    }
    return suite;
}

inline BenchSuite read_suite(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    io::json j;
    in >> j;
    return suite_from_json(j);
}

/// Runs every cell and returns the rows in suite order. With jobs > 1 the
/// cells run concurrently (cells are independent); the row order is still the
/// suite order.
inline std::vector<io::ResultRow> run_bench_suite(const BenchSuite& suite, int jobs = 1) {
    if (suite.cells.empty()) throw std::invalid_argument("bench suite: no cells");
    std::vector<std::vector<io::ResultRow>> per_cell(suite.cells.size());

    if (jobs <= 1) {
        for (size_t i = 0; i < suite.cells.size(); ++i) {
            per_cell[i] = detail::run_cell(suite.cells[i], suite.default_time_limit_s);
        }
    } else {
        std::counting_semaphore<64> slots(std::min(jobs, 64));
        std::vector<std::future<std::vector<io::ResultRow>>> futures;
        for (size_t i = 0; i < suite.cells.size(); ++i) {
            futures.push_back(std::async(std::launch::async, [&, i] {
                slots.acquire();
                auto rows = detail::run_cell(suite.cells[i], suite.default_time_limit_s);
                slots.release();
                return rows;
            }));
        }
        for (size_t i = 0; i < suite.cells.size(); ++i) per_cell[i] = futures[i].get();
    }

    std::vector<io::ResultRow> rows;
    for (auto& cell_rows : per_cell) {
        for (auto& r : cell_rows) rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace rackopt::bench
