#pragma once

#include <stdexcept>
#include <vector>

#include "rackopt/sequencing/instance.hpp"
#include "rackopt/sequencing/solution.hpp"

namespace rackopt::seq {

/// Constructive sequencing with unbounded revisits: treats the racks as a
/// pool, serves the orders one at a time, and at each step draws the rack
/// that can contribute the most units to the current order's remaining need
/// (ties to the lowest rack index). Always yields a verifier-feasible
/// sequence when the racks collectively cover the demand, at the cost of
/// possibly many revisits.
inline SequenceSolution pool_greedy_sequence(const SequencingInstance& si) {
    if (auto shortfall = supply_shortfall(si)) {
        throw std::invalid_argument("pool_greedy_sequence: " + *shortfall);
    }

    SequenceSolution sol;
    sol.unbounded_revisits = true;

    std::vector<std::vector<long>> inv(si.num_racks(), std::vector<long>(si.num_products(), 0));
    for (int r = 0; r < si.num_racks(); ++r)
        for (int i = 0; i < si.num_products(); ++i) inv[r][i] = si.supply[r][i];

    for (int o = 0; o < si.num_orders(); ++o) {
        std::vector<int> need = si.demand[o];
        long remaining = 0;
        for (int v : need) remaining += v;
        int first_pos = -1;
        int last_pos = -1;
        while (remaining > 0) {
            int best_rack = -1;
            long best_units = 0;
            for (int r = 0; r < si.num_racks(); ++r) {
                long contrib = 0;
                for (int i = 0; i < si.num_products(); ++i) {
                    contrib += std::min<long>(need[i], inv[r][i]);
                }
                if (contrib > best_units) {
                    best_units = contrib;
                    best_rack = r;
                }
            }
            if (best_rack < 0) {
                throw std::logic_error("pool_greedy_sequence: no rack can contribute; the supply "
                                       "precondition cannot have held");
            }
            const int pos = static_cast<int>(sol.rack_order.size());
            sol.rack_order.push_back(best_rack);
            if (first_pos < 0) first_pos = pos;
            last_pos = pos;
            for (int i = 0; i < si.num_products(); ++i) {
                const long take = std::min<long>(need[i], inv[best_rack][i]);
                if (take < 1) continue;
                sol.picks.push_back({i, o, pos, static_cast<int>(take)});
                need[i] -= static_cast<int>(take);
                inv[best_rack][i] -= take;
                remaining -= take;
            }
        }
        sol.opens.push_back({o, first_pos});
        sol.closes.push_back({o, last_pos});
    }
    return sol;
}

}  // namespace rackopt::seq
