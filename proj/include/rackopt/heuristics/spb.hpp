#pragma once

#include <set>

#include "rackopt/allocation/restrict.hpp"
#include "rackopt/allocation/verify.hpp"
#include "rackopt/heuristics/common.hpp"

namespace rackopt::heur {

/// Single-picker-based matheuristic: one exact solve per picker in decreasing
/// capacity order on the shrinking order and rack pools, then one improvement
/// solve over all pickers restricted to the union of the racks chosen by the
/// stages. P+1 optimisations in total.
inline HeuristicResult spb(const Instance& inst, const HeuristicParams& params,
                           const alloc::AllocationOptions& options = {}) {
    require_valid_instance(inst);
    detail::require_heuristic_options(options);

    HeuristicResult run;
    const int P = inst.num_pickers();
    const std::vector<int> picker_order = detail::pickers_by_capacity(inst);
    detail::StageClock clock(params.total_time_limit_s, P + 1);

    std::vector<int> order_pool(inst.num_orders());
    std::iota(order_pool.begin(), order_pool.end(), 0);
    std::vector<int> rack_pool(inst.num_racks());
    std::iota(rack_pool.begin(), rack_pool.end(), 0);

    std::vector<std::vector<int>> stage_orders(P);  // by original picker index
    std::vector<std::vector<int>> stage_racks(P);
    std::set<int> chosen_union;

    auto fail = [&](int stage, const std::string& why) {
        run.result.status = milp::SolveStatus::proven_infeasible;
        run.result.note = "stage " + std::to_string(stage) + ": " + why;
        run.result.metrics.total_time_s = clock.elapsed();
        return run;
    };

    std::int64_t nodes = 0;
    for (int s = 0; s < P; ++s) {
        const int picker = picker_order[s];
        const int cap = inst.pickers[picker].capacity;
        if (static_cast<int>(order_pool.size()) < cap) {
            return fail(s + 1, "only " + std::to_string(order_pool.size()) +
                                   " orders remain for capacity " + std::to_string(cap));
        }

        alloc::RestrictedInstance sub = alloc::restrict_instance(inst, order_pool, rack_pool, {cap});
        milp::SolveParams sp = params.solver;
        sp.seed = params.seed;
        sp.time_limit_s = clock.stage_budget(s);
        alloc::AllocationOptions sub_opt = options;
        alloc::AllocationResult stage_res = alloc::solve_allocation(sub.instance, sub_opt, sp);
        nodes += stage_res.metrics.nodes;

        StageRecord rec;
        rec.stage = s + 1;
        rec.label = "picker " + std::to_string(picker);
        rec.status = stage_res.status;
        rec.objective = stage_res.metrics.ub;
        rec.time_s = stage_res.metrics.total_time_s;

        if (!stage_res.allocation) {
            run.trace.push_back(std::move(rec));
            return fail(s + 1, stage_res.status == milp::SolveStatus::proven_infeasible
                                   ? "single-picker problem proven infeasible"
                                   : "no incumbent within the stage budget");
        }

        for (int o : stage_res.allocation->orders_of_picker[0]) rec.chosen_orders.push_back(sub.order_ids[o]);
        for (int r : stage_res.allocation->racks_of_picker[0]) rec.chosen_racks.push_back(sub.rack_ids[r]);
        stage_orders[picker] = rec.chosen_orders;
        stage_racks[picker] = rec.chosen_racks;
        for (int r : rec.chosen_racks) chosen_union.insert(r);

        std::set<int> gone_orders(rec.chosen_orders.begin(), rec.chosen_orders.end());
        std::set<int> gone_racks(rec.chosen_racks.begin(), rec.chosen_racks.end());
        std::erase_if(order_pool, [&](int o) { return gone_orders.count(o) > 0; });
        std::erase_if(rack_pool, [&](int r) { return gone_racks.count(r) > 0; });

        run.trace.push_back(std::move(rec));
    }

    // Final improvement: all orders, all pickers, racks restricted to the
    // union the stages chose.
    std::vector<int> all_orders(inst.num_orders());
    std::iota(all_orders.begin(), all_orders.end(), 0);
    std::vector<int> union_racks(chosen_union.begin(), chosen_union.end());
    std::vector<int> caps;
    for (const auto& p : inst.pickers) caps.push_back(p.capacity);
    alloc::RestrictedInstance fin = alloc::restrict_instance(inst, all_orders, union_racks, caps);

    milp::SolveParams sp = params.solver;
    sp.seed = params.seed;
    sp.time_limit_s = clock.stage_budget(P);
    alloc::AllocationResult fin_res = alloc::solve_allocation(fin.instance, options, sp);
    nodes += fin_res.metrics.nodes;

    StageRecord rec;
    rec.stage = P + 1;
    rec.label = "final";
    rec.status = fin_res.status;
    rec.objective = fin_res.metrics.ub;
    rec.time_s = fin_res.metrics.total_time_s;

    if (fin_res.allocation) {
        alloc::Allocation a = *fin_res.allocation;
        // Map sub-instance indices back to the parent.
        for (auto& v : a.orders_of_picker)
            for (int& o : v) o = fin.order_ids[o];
        for (auto& v : a.racks_of_picker)
            for (int& r : v) r = fin.rack_ids[r];
        for (int& r : a.used_racks) r = fin.rack_ids[r];
        for (int r : a.used_racks) rec.chosen_racks.push_back(r);
        run.result.allocation = std::move(a);
        run.result.status = fin_res.status;
        run.result.metrics.ub = fin_res.metrics.ub;
        run.result.metrics.incumbent_time_s = clock.elapsed() - fin_res.metrics.total_time_s +
                                              fin_res.metrics.incumbent_time_s;
    } else {
        // The stage composition is itself feasible; fall back to it.
        alloc::Allocation a;
        a.orders_of_picker = stage_orders;
        a.racks_of_picker = stage_racks;
        for (int r : union_racks) a.used_racks.push_back(r);
        run.result.allocation = std::move(a);
        run.result.status = milp::SolveStatus::feasible_time_limit;
        run.result.note = "final solve returned no incumbent; composed the stage solutions";
        run.result.metrics.ub = static_cast<double>(union_racks.size());
        run.result.metrics.incumbent_time_s = clock.elapsed();
    }
    run.trace.push_back(std::move(rec));
    run.result.metrics.nodes = nodes;
    run.result.metrics.total_time_s = clock.elapsed();
    return run;
}

}  // namespace rackopt::heur
