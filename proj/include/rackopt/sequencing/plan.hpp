#pragma once

#include <map>
#include <stdexcept>
#include <vector>

#include "rackopt/sequencing/instance.hpp"
#include "rackopt/sequencing/solution.hpp"

namespace rackopt::seq {

/// Per-position processing plan for a verified sequence solution. At each
/// position the orders split into four sets: opened-and-closed here with the
/// full pick (served by the dedicated bin), closed here after being carried,
/// newly opened and staying, and carried through. Bin 0 is the dedicated
/// slot; carried orders hold one of the bins 1..B-1 from open to close,
/// closing orders release theirs before newly opened orders take the lowest
/// free one.
struct ProcessingPlan {
    std::vector<std::vector<int>> opened_closed_here;  // Delta_k
    std::vector<std::vector<int>> closed_here;         // Theta_k
    std::vector<std::vector<int>> opened_here;         // Phi_k
    std::vector<std::vector<int>> carried;             // Omega_k

    struct Assignment {
        int order = 0;
        int bin = 0;  // 0 = dedicated
        int open_pos = 0;
        int close_pos = 0;
    };
    std::vector<Assignment> assignments;  // one per order
    int max_carried = 0;                  // peak non-dedicated occupancy
};

inline ProcessingPlan derive_processing_plan(const SequencingInstance& si,
                                             const SequenceSolution& sol) {
    const int O = si.num_orders();
    const int K = static_cast<int>(sol.rack_order.size());

    std::vector<int> open_pos(O, -1), close_pos(O, -1);
    for (const auto& e : sol.opens) open_pos[e.order] = e.position;
    for (const auto& e : sol.closes) close_pos[e.order] = e.position;
    for (int o = 0; o < O; ++o) {
        if (open_pos[o] < 0 || close_pos[o] < 0 || close_pos[o] < open_pos[o]) {
            throw std::invalid_argument("derive_processing_plan: order " + std::to_string(o) +
                                        " lacks a valid window");
        }
    }

    std::map<std::pair<int, int>, int> picked_here;  // (order, position) -> units
    for (const auto& p : sol.picks) picked_here[{p.order, p.position}] += p.units;

    ProcessingPlan plan;
    plan.opened_closed_here.assign(K, {});
    plan.closed_here.assign(K, {});
    plan.opened_here.assign(K, {});
    plan.carried.assign(K, {});
    plan.assignments.resize(O);

    std::vector<int> total_demand(O, 0);
    for (int o = 0; o < O; ++o)
        for (int i = 0; i < si.num_products(); ++i) total_demand[o] += si.demand[o][i];

    for (int k = 0; k < K; ++k) {
        for (int o = 0; o < O; ++o) {
            if (open_pos[o] > k || close_pos[o] < k) continue;
            const bool full_pick_here = picked_here[{o, k}] == total_demand[o];
            if (open_pos[o] == k && close_pos[o] == k && full_pick_here) {
                plan.opened_closed_here[k].push_back(o);
            } else if (close_pos[o] == k) {
                plan.closed_here[k].push_back(o);
            } else if (open_pos[o] == k) {
                plan.opened_here[k].push_back(o);
            } else {
                plan.carried[k].push_back(o);
            }
        }
    }

    // Bin slots: release the closing orders first, then hand the lowest free
    // bin to each newly opened order.
    const int usable = std::max(1, si.bins - 1);
    std::vector<int> bin_of(O, -1);
    std::vector<bool> busy(usable + 1, false);  // bins 1..usable
    for (int k = 0; k < K; ++k) {
        for (int o : plan.opened_closed_here[k]) {
            bin_of[o] = 0;
        }
        for (int o : plan.closed_here[k]) {
            if (bin_of[o] > 0) busy[bin_of[o]] = false;
        }
        for (int o : plan.opened_here[k]) {
            if (si.bins == 1) {
                bin_of[o] = 0;  // the single bin carries the spanning order
                continue;
            }
            int slot = -1;
            for (int b = 1; b <= usable; ++b) {
                if (!busy[b]) { slot = b; break; }
            }
            if (slot < 0) {
                throw std::invalid_argument(
                    "derive_processing_plan: more carried orders than bins; the solution does not "
                    "verify");
            }
            busy[slot] = true;
            bin_of[o] = slot;
        }
        int carried_now = static_cast<int>(plan.opened_here[k].size() + plan.carried[k].size());
        plan.max_carried = std::max(plan.max_carried, carried_now);
    }

    for (int o = 0; o < O; ++o) {
        plan.assignments[o] = {o, bin_of[o] < 0 ? 0 : bin_of[o], open_pos[o], close_pos[o]};
    }
    return plan;
}

}  // namespace rackopt::seq
