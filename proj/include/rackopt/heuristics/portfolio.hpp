#pragma once

#include <future>
#include <string>
#include <vector>

#include "rackopt/heuristics/pio.hpp"
#include "rackopt/heuristics/spb.hpp"

namespace rackopt::heur {

struct Approach {
    enum class Kind { exact, spb, pio };
    Kind kind = Kind::exact;
    int tau = 1;  // pio only

    std::string name() const {
        switch (kind) {
            case Kind::exact: return "exact";
            case Kind::spb: return "spb";
            case Kind::pio: return "pio(tau=" + std::to_string(tau) + ")";
        }
        return "?";
    }
};

struct PortfolioResult {
    std::vector<std::pair<std::string, alloc::AllocationResult>> table;
    int best_index = -1;  // -1: no approach produced an allocation

    const alloc::AllocationResult* best() const {
        return best_index >= 0 ? &table[best_index].second : nullptr;
    }
};

/// Runs the approaches as independent concurrent tasks over the immutable
/// instance; every approach gets the full wall-clock budget measured on its
/// own. Best result: minimum UB, ties by earliest incumbent time, then by
/// approach order.
inline PortfolioResult portfolio(const Instance& inst, const std::vector<Approach>& approaches,
                                 const HeuristicParams& params,
                                 const alloc::AllocationOptions& options = {}) {
    if (approaches.empty()) throw std::invalid_argument("portfolio: no approaches given");
    require_valid_instance(inst);

    auto run_one = [&](const Approach& a) -> alloc::AllocationResult {
        switch (a.kind) {
            case Approach::Kind::exact: {
                milp::SolveParams sp = params.solver;
                sp.seed = params.seed;
                sp.time_limit_s = params.total_time_limit_s;
                return alloc::solve_allocation(inst, options, sp);
            }
            case Approach::Kind::spb:
                return spb(inst, params, options).result;
            case Approach::Kind::pio:
                return pio(inst, a.tau, params, options).result;
        }
        throw std::logic_error("portfolio: unknown approach");
    };

    std::vector<std::future<alloc::AllocationResult>> futures;
    futures.reserve(approaches.size());
    for (const auto& a : approaches) {
        futures.push_back(std::async(std::launch::async, run_one, a));
    }

    PortfolioResult out;
    for (size_t i = 0; i < approaches.size(); ++i) {
        out.table.emplace_back(approaches[i].name(), futures[i].get());
    }

    for (size_t i = 0; i < out.table.size(); ++i) {
        const auto& res = out.table[i].second;
        if (!res.allocation || !res.metrics.ub) continue;
        if (out.best_index < 0) {
            out.best_index = static_cast<int>(i);
            continue;
        }
        const auto& cur = out.table[out.best_index].second;
        if (*res.metrics.ub < *cur.metrics.ub ||
            (*res.metrics.ub == *cur.metrics.ub &&
             res.metrics.incumbent_time_s < cur.metrics.incumbent_time_s)) {
            out.best_index = static_cast<int>(i);
        }
    }
    return out;
}

}  // namespace rackopt::heur
