#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "rackopt/allocation/build.hpp"
#include "rackopt/milp/solve.hpp"

namespace rackopt::alloc {

struct Allocation {
    std::vector<std::vector<int>> orders_of_picker;
    std::vector<std::vector<int>> racks_of_picker;  // original rack indices
    std::vector<int> used_racks;                    // original rack indices

    struct Draw {
        int product = 0;
        int rack = 0;
        int picker = 0;
        int units = 0;
    };
    std::vector<Draw> draws;  // shared-rack mode only
};

struct AllocationMetrics {
    std::optional<double> ub;    // incumbent objective
    std::optional<double> lb;    // best tree bound
    std::optional<double> flb;   // root relaxation bound
    std::optional<double> gap;   // 100*(UB-LB)/UB
    std::optional<double> fgap;  // 100*(UB-FLB)/UB
    std::int64_t nodes = 0;
    double total_time_s = 0.0;
    double incumbent_time_s = 0.0;
};

struct AllocationResult {
    std::optional<Allocation> allocation;
    AllocationMetrics metrics;
    milp::SolveStatus status = milp::SolveStatus::unknown_time_limit;
    std::string note;  // stage diagnostics for the heuristics
};

namespace detail {

inline AllocationMetrics metrics_from_outcome(const milp::SolveOutcome& out) {
    AllocationMetrics m;
    if (out.incumbent) m.ub = out.incumbent->objective;
    m.lb = out.best_bound;
    m.flb = out.root_bound;
    if (m.ub && *m.ub > 0.0) {
        if (m.lb) m.gap = 100.0 * (*m.ub - *m.lb) / *m.ub;
        if (m.flb) m.fgap = 100.0 * (*m.ub - *m.flb) / *m.ub;
    }
    m.nodes = out.nodes;
    m.total_time_s = out.total_time_s;
    m.incumbent_time_s = out.incumbent_time_s;
    return m;
}

/// Thresholds the incumbent at 0.5; values sit within the integrality
/// tolerance of {0,1} (or of an integer for the draw variables).
inline Allocation extract_allocation(const Instance& inst, const AllocationModel& am,
                                     const std::vector<double>& x) {
    Allocation a;
    const int P = inst.num_pickers();
    a.orders_of_picker.assign(P, {});
    a.racks_of_picker.assign(P, {});
    for (int o = 0; o < inst.num_orders(); ++o) {
        for (int p = 0; p < P; ++p) {
            if (x[am.x[o][p].index] > 0.5) a.orders_of_picker[p].push_back(o);
        }
    }
    for (size_t j = 0; j < am.rack_ids.size(); ++j) {
        if (x[am.u[j].index] > 0.5) a.used_racks.push_back(am.rack_ids[j]);
        for (int p = 0; p < P; ++p) {
            if (x[am.y[j][p].index] > 0.5) a.racks_of_picker[p].push_back(am.rack_ids[j]);
        }
    }
    for (const auto& [key, var] : am.pi) {
        const auto& [i, j, p] = key;
        const int units = static_cast<int>(std::llround(x[var.index]));
        if (units > 0) a.draws.push_back({i, am.rack_ids[j], p, units});
    }
    return a;
}

}  // namespace detail

/// Builds and solves the allocation model, returning the extracted
/// allocation (when an incumbent exists) and the usual reporting metrics.
inline AllocationResult solve_allocation(const Instance& inst, const AllocationOptions& opt,
                                         const milp::SolveParams& params) {
    AllocationModel am = build_allocation_model(inst, opt);
    milp::SolveOutcome out = milp::solve(am.model, params);

    AllocationResult res;
    res.status = out.status;
    res.metrics = detail::metrics_from_outcome(out);
    if (out.incumbent) {
        res.allocation = detail::extract_allocation(inst, am, out.incumbent->values);
    }
    return res;
}

}  // namespace rackopt::alloc
