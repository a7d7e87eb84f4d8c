#pragma once

#include <set>

#include "rackopt/allocation/restrict.hpp"
#include "rackopt/allocation/verify.hpp"
#include "rackopt/heuristics/common.hpp"

namespace rackopt::heur {

/// Partial-integer-optimisation matheuristic: the order/rack variables of tau
/// pickers at a time stay binary while all others (and the rack usage
/// variables) relax to [0,1]; after each stage the binary block is fixed to
/// its solved values. A final all-binary solve restricted to the racks chosen
/// by the last stage closes the run: ceil(P/tau)+1 optimisations.
inline HeuristicResult pio(const Instance& inst, int tau, const HeuristicParams& params,
                           const alloc::AllocationOptions& options = {}) {
    require_valid_instance(inst);
    detail::require_heuristic_options(options);
    if (tau < 1) throw std::invalid_argument("pio: tau must be >= 1");

    HeuristicResult run;
    const int P = inst.num_pickers();
    const std::vector<int> picker_order = detail::pickers_by_capacity(inst);
    const int stages = (P + tau - 1) / tau + 1;
    detail::StageClock clock(params.total_time_limit_s, stages);

    auto fail = [&](int stage, const std::string& why) {
        run.result.status = milp::SolveStatus::proven_infeasible;
        run.result.note = "stage " + std::to_string(stage) + ": " + why;
        run.result.metrics.total_time_s = clock.elapsed();
        return run;
    };

    alloc::AllocationModel am = alloc::build_allocation_model(inst, options);
    const int O = inst.num_orders();
    const int K = static_cast<int>(am.rack_ids.size());

    for (int o = 0; o < O; ++o)
        for (int p = 0; p < P; ++p) am.model.set_variable_kind(am.x[o][p], milp::VarKind::continuous);
    for (int j = 0; j < K; ++j) {
        am.model.set_variable_kind(am.u[j], milp::VarKind::continuous);
        for (int p = 0; p < P; ++p) am.model.set_variable_kind(am.y[j][p], milp::VarKind::continuous);
    }

    std::int64_t nodes = 0;
    std::optional<milp::Incumbent> last_solution;
    int stage_index = 0;
    for (int T = std::min(tau, P);; T = std::min(T + tau, P)) {
        ++stage_index;
        for (int s = (stage_index - 1) * tau; s < T; ++s) {
            const int p = picker_order[s];
            for (int o = 0; o < O; ++o) am.model.set_variable_kind(am.x[o][p], milp::VarKind::binary);
            for (int j = 0; j < K; ++j) am.model.set_variable_kind(am.y[j][p], milp::VarKind::binary);
        }

        milp::SolveParams sp = params.solver;
        sp.seed = params.seed;
        sp.time_limit_s = clock.stage_budget(stage_index - 1);
        milp::SolveOutcome out = milp::solve(am.model, sp);
        nodes += out.nodes;

        StageRecord rec;
        rec.stage = stage_index;
        rec.label = "block T=" + std::to_string(T);
        rec.status = out.status;
        if (out.incumbent) rec.objective = out.incumbent->objective;
        rec.time_s = out.total_time_s;
        run.trace.push_back(rec);

        if (!out.incumbent) {
            return fail(stage_index, out.status == milp::SolveStatus::proven_infeasible
                                         ? "staged problem proven infeasible"
                                         : "no incumbent within the stage budget");
        }

        // Fix the solved binary block to its (rounded) values.
        const auto& vals = out.incumbent->values;
        for (int s = (stage_index - 1) * tau; s < T; ++s) {
            const int p = picker_order[s];
            for (int o = 0; o < O; ++o)
                am.model.fix_variable(am.x[o][p], std::round(vals[am.x[o][p].index]));
            for (int j = 0; j < K; ++j)
                am.model.fix_variable(am.y[j][p], std::round(vals[am.y[j][p].index]));
        }
        last_solution = out.incumbent;
        if (T == P) break;
    }

    // Racks selected (y=1 for some picker) in the final staged solution.
    std::set<int> chosen;
    for (int j = 0; j < K; ++j) {
        for (int p = 0; p < P; ++p) {
            if (last_solution->values[am.y[j][p].index] > 0.5) chosen.insert(am.rack_ids[j]);
        }
    }

    std::vector<int> all_orders(O);
    std::iota(all_orders.begin(), all_orders.end(), 0);
    std::vector<int> rack_subset(chosen.begin(), chosen.end());
    std::vector<int> caps;
    for (const auto& p : inst.pickers) caps.push_back(p.capacity);
    alloc::RestrictedInstance fin = alloc::restrict_instance(inst, all_orders, rack_subset, caps);

    milp::SolveParams sp = params.solver;
    sp.seed = params.seed;
    sp.time_limit_s = clock.stage_budget(stage_index);
    alloc::AllocationResult fin_res = alloc::solve_allocation(fin.instance, options, sp);
    nodes += fin_res.metrics.nodes;

    StageRecord rec;
    rec.stage = stage_index + 1;
    rec.label = "final";
    rec.status = fin_res.status;
    rec.objective = fin_res.metrics.ub;
    rec.time_s = fin_res.metrics.total_time_s;

    if (fin_res.allocation) {
        alloc::Allocation a = *fin_res.allocation;
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
        // The last staged solution is integral in x and y; extract it directly.
        alloc::Allocation a = alloc::detail::extract_allocation(inst, am, last_solution->values);
        run.result.allocation = std::move(a);
        run.result.status = milp::SolveStatus::feasible_time_limit;
        run.result.note = "final solve returned no incumbent; kept the staged solution";
        run.result.metrics.ub = static_cast<double>(rack_subset.size());
        run.result.metrics.incumbent_time_s = clock.elapsed();
    }
    run.trace.push_back(std::move(rec));
    run.result.metrics.nodes = nodes;
    run.result.metrics.total_time_s = clock.elapsed();
    return run;
}

}  // namespace rackopt::heur
