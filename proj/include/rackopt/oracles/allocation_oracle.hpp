#pragma once

#include <limits>
#include <stdexcept>
#include <vector>

#include "rackopt/core/instance.hpp"

namespace rackopt::oracle {

struct AllocationOptimum {
    bool feasible = false;
    int min_racks = 0;
};

/// Exhaustive optimum of the single-rack-mode allocation problem: enumerates
/// every assignment of orders to pickers respecting the capacities and every
/// disjoint assignment of racks to pickers, keeping the minimum number of
/// racks whose supply covers each picker's demand. Honors face groups.
/// Refuses instances beyond O<=6, R<=7, P<=2 rather than approximating.
inline AllocationOptimum brute_force_allocation(const Instance& inst) {
    const int O = inst.num_orders();
    const int R = inst.num_racks();
    const int P = inst.num_pickers();
    if (O > 6 || R > 7 || P > 2) {
        throw std::invalid_argument("brute_force_allocation: instance beyond enumeration bounds");
    }
    require_valid_instance(inst);

    const int N = inst.num_products;
    std::vector<std::vector<int>> demand(O), supply(R);
    for (int o = 0; o < O; ++o) demand[o] = inst.order_demand(o);
    for (int r = 0; r < R; ++r) supply[r] = inst.rack_supply(r);

    // Base-(P+1) codes; digit P means "unassigned"/"unused".
    long order_codes = 1;
    for (int o = 0; o < O; ++o) order_codes *= (P + 1);
    long rack_codes = 1;
    for (int r = 0; r < R; ++r) rack_codes *= (P + 1);

    AllocationOptimum best;
    best.min_racks = std::numeric_limits<int>::max();

    std::vector<int> odig(O), rdig(R);
    std::vector<std::vector<long>> need(P, std::vector<long>(N));
    std::vector<std::vector<long>> have(P, std::vector<long>(N));

    for (long oc = 0; oc < order_codes; ++oc) {
        long t = oc;
        std::vector<int> count(P, 0);
        for (int o = 0; o < O; ++o) {
            odig[o] = static_cast<int>(t % (P + 1));
            t /= (P + 1);
            if (odig[o] < P) ++count[odig[o]];
        }
        bool ok = true;
        for (int p = 0; p < P; ++p) {
            if (count[p] != inst.pickers[p].capacity) { ok = false; break; }
        }
        if (!ok) continue;

        for (int p = 0; p < P; ++p) std::fill(need[p].begin(), need[p].end(), 0L);
        for (int o = 0; o < O; ++o) {
            if (odig[o] >= P) continue;
            for (int i = 0; i < N; ++i) need[odig[o]][i] += demand[o][i];
        }

        for (long rc = 0; rc < rack_codes; ++rc) {
            long s = rc;
            int used = 0;
            for (int r = 0; r < R; ++r) {
                rdig[r] = static_cast<int>(s % (P + 1));
                s /= (P + 1);
                if (rdig[r] < P) ++used;
            }
            if (used >= best.min_racks && best.feasible) continue;

            bool face_ok = true;
            for (const auto& group : inst.face_groups) {
                int in_use = 0;
                for (int r : group) {
                    if (rdig[r] < P) ++in_use;
                }
                if (in_use > 1) { face_ok = false; break; }
            }
            if (!face_ok) continue;

            for (int p = 0; p < P; ++p) std::fill(have[p].begin(), have[p].end(), 0L);
            for (int r = 0; r < R; ++r) {
                if (rdig[r] >= P) continue;
                for (int i = 0; i < N; ++i) have[rdig[r]][i] += supply[r][i];
            }
            bool covered = true;
            for (int p = 0; p < P && covered; ++p) {
                for (int i = 0; i < N; ++i) {
                    if (need[p][i] > have[p][i]) { covered = false; break; }
                }
            }
            if (!covered) continue;

            best.feasible = true;
            if (used < best.min_racks) best.min_racks = used;
        }
    }
    if (!best.feasible) best.min_racks = 0;
    return best;
}

struct CoverResult {
    bool feasible = false;
    int min_racks = 0;
};

/// Minimum-cardinality rack subset whose summed supply meets one order's
/// demand (the set-cover view of the single-order, single-picker problem).
/// Refuses more than 20 racks.
inline CoverResult min_rack_cover_oracle(const Order& order, const std::vector<Rack>& racks,
                                         int num_products) {
    const int R = static_cast<int>(racks.size());
    if (R > 20) {
        throw std::invalid_argument("min_rack_cover_oracle: more than 20 racks");
    }
    std::vector<long> demand(num_products, 0);
    for (const auto& l : order.lines) demand[l.product] += l.units;
    std::vector<std::vector<long>> supply(R, std::vector<long>(num_products, 0));
    for (int r = 0; r < R; ++r) {
        for (const auto& l : racks[r].supply) supply[r][l.product] += l.units;
    }

    CoverResult best;
    best.min_racks = R + 1;
    for (unsigned mask = 0; mask < (1u << R); ++mask) {
        const int size = __builtin_popcount(mask);
        if (best.feasible && size >= best.min_racks) continue;
        std::vector<long> have(num_products, 0);
        for (int r = 0; r < R; ++r) {
            if (mask & (1u << r)) {
                for (int i = 0; i < num_products; ++i) have[i] += supply[r][i];
            }
        }
        bool ok = true;
        for (int i = 0; i < num_products; ++i) {
            if (demand[i] > have[i]) { ok = false; break; }
        }
        if (ok) {
            best.feasible = true;
            best.min_racks = size;
        }
    }
    if (!best.feasible) best.min_racks = 0;
    return best;
}

}  // namespace rackopt::oracle
