#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rackopt/milp/solve.hpp"
#include "rackopt/sequencing/build.hpp"
#include "rackopt/sequencing/verify.hpp"

namespace rackopt::seq {

enum class SequenceFeasibility { feasible, proven_infeasible, unknown };

inline const char* to_string(SequenceFeasibility f) {
    switch (f) {
        case SequenceFeasibility::feasible: return "feasible";
        case SequenceFeasibility::proven_infeasible: return "proven_infeasible";
        case SequenceFeasibility::unknown: return "unknown";
    }
    return "?";
}

struct SequenceOutcome {
    SequenceFeasibility result = SequenceFeasibility::unknown;
    std::optional<SequenceSolution> solution;
    double total_time_s = 0.0;
    std::int64_t nodes = 0;
    bool used_reduction = false;
    int deferred_orders = 0;
};

namespace detail {

/// Reads a solved model back into a sequence solution. Windows come from the
/// alpha/beta values; positions map rack slots to their original rack.
inline SequenceSolution extract_solution(const SequencingInstance& si, const SequencingModel& sm,
                                         const std::vector<double>& vals) {
    SequenceSolution sol;
    const int K = sm.slots;
    const int L = si.num_racks();
    sol.rack_order.assign(K, -1);
    for (int k = 0; k < K; ++k) {
        for (int e = 0; e < K; ++e) {
            if (vals[sm.z[k][e].index] > 0.5) {
                sol.rack_order[k] = e % L;
                break;
            }
        }
        if (sol.rack_order[k] < 0) throw std::logic_error("extract_solution: position without a rack");
    }
    for (const auto& [key, var] : sm.gamma) {
        const auto& [i, o, k] = key;
        const int units = static_cast<int>(std::llround(vals[var.index]));
        if (units > 0) sol.picks.push_back({i, o, k, units});
    }
    for (int o = 0; o < si.num_orders(); ++o) {
        int first = -1, close = -1;
        for (int k = 0; k < K; ++k) {
            if (vals[sm.alpha[o][k].index] > 0.5 && first < 0) first = k;
            if (vals[sm.beta[o][k].index] > 0.5 && close < 0) close = k;
        }
        if (first < 0 || close < 0) throw std::logic_error("extract_solution: order without a window");
        sol.opens.push_back({o, first});
        sol.closes.push_back({o, close});
    }
    return sol;
}

}  // namespace detail

/// Walks the rack sequence of a reduced solution and places each deferred
/// single-unit order (ascending order index) at the earliest position whose
/// rack still has a spare unit of its product after the reduced picks; such
/// orders open and close at that position. With the supply precondition in
/// force every deferred order is placed by the end of the sequence.
inline SequenceSolution reinsert_single_unit_orders(const SequenceSolution& reduced_sol,
                                                    const Reduction& red,
                                                    const SequencingInstance& full) {
    SequenceSolution sol;
    sol.rack_order = reduced_sol.rack_order;
    sol.unbounded_revisits = reduced_sol.unbounded_revisits;

    // Reduced order indices map back through the kept list.
    for (const auto& p : reduced_sol.picks)
        sol.picks.push_back({p.product, red.kept_orders[p.order], p.position, p.units});
    for (const auto& e : reduced_sol.opens) sol.opens.push_back({red.kept_orders[e.order], e.position});
    for (const auto& e : reduced_sol.closes) sol.closes.push_back({red.kept_orders[e.order], e.position});

    // Remaining inventory per original rack after the reduced picks.
    std::vector<std::vector<long>> rem(full.num_racks(),
                                       std::vector<long>(full.num_products(), 0));
    for (int r = 0; r < full.num_racks(); ++r)
        for (int i = 0; i < full.num_products(); ++i) rem[r][i] = full.supply[r][i];
    for (const auto& p : sol.picks) rem[sol.rack_order[p.position]][p.product] -= p.units;

    std::vector<bool> placed(red.deferred.size(), false);
    size_t left = red.deferred.size();
    for (int k = 0; k < static_cast<int>(sol.rack_order.size()) && left > 0; ++k) {
        const int r = sol.rack_order[k];
        for (size_t d = 0; d < red.deferred.size(); ++d) {
            if (placed[d]) continue;
            const auto& [order, product] = red.deferred[d];
            if (rem[r][product] < 1) continue;
            rem[r][product] -= 1;
            sol.picks.push_back({product, order, k, 1});
            sol.opens.push_back({order, k});
            sol.closes.push_back({order, k});
            placed[d] = true;
            --left;
        }
    }
    if (left > 0) {
        throw std::logic_error(
            "reinsert_single_unit_orders: deferred orders left unplaced; the supply precondition "
            "cannot have held");
    }
    return sol;
}

/// Solves one picker's rack-sequencing feasibility problem. With
/// use_theorem2 (default), the single-unit orders are removed first and
/// reinserted afterwards; this applies only in the dedicated-bin regime
/// (B >= 2, mode != single_bin) and when the supply precondition holds.
/// A feasible outcome is verified against the full instance before return.
inline SequenceOutcome solve_sequencing(const SequencingInstance& si, SequencingMode mode,
                                        const milp::SolveParams& params, bool use_theorem2 = true) {
    SequenceOutcome out;
    const bool reducible = use_theorem2 && mode != SequencingMode::single_bin && si.bins >= 2 &&
                           supply_precondition_holds(si);

    std::optional<Reduction> red;
    const SequencingInstance* target = &si;
    if (reducible) {
        Reduction r = reduce_single_unit_orders(si);
        if (!r.deferred.empty()) {
            red = std::move(r);
            target = &red->reduced;
            out.used_reduction = true;
            out.deferred_orders = static_cast<int>(red->deferred.size());
        }
    }

    SequenceSolution reduced_sol;
    if (red && target->num_orders() == 0) {
        // Nothing left to sequence: present the racks in index order (each
        // rack and, in revisit mode, each copy) and let reinsertion do the rest.
        const int K = target->num_slots(mode);
        for (int k = 0; k < K; ++k) reduced_sol.rack_order.push_back(k % target->num_racks());
        out.result = SequenceFeasibility::feasible;
    } else {
        SequencingModel sm = build_sequencing_model(*target, mode);
        milp::SolveOutcome mo = milp::solve(sm.model, params);
        out.nodes = mo.nodes;
        out.total_time_s = mo.total_time_s;
        switch (mo.status) {
            case milp::SolveStatus::optimal:
                out.result = SequenceFeasibility::feasible;
                reduced_sol = detail::extract_solution(*target, sm, mo.incumbent->values);
                break;
            case milp::SolveStatus::proven_infeasible:
                out.result = SequenceFeasibility::proven_infeasible;
                return out;
            default:
                out.result = SequenceFeasibility::unknown;
                return out;
        }
    }

    SequenceSolution full_sol =
        red ? reinsert_single_unit_orders(reduced_sol, *red, si) : std::move(reduced_sol);

    VerifyReport rep = verify_sequence(si, full_sol);
    if (!rep.ok()) {
        throw std::logic_error("solve_sequencing: produced a solution the verifier rejects:\n" +
                               rep.to_string());
    }
    out.solution = std::move(full_sol);
    return out;
}

}  // namespace rackopt::seq
