#pragma once

#include <string>
#include <vector>

#include "rackopt/allocation/solve.hpp"
#include "rackopt/core/verify_report.hpp"

namespace rackopt::alloc {

/// Re-checks an allocation against the instance, independently of the model:
/// picker capacities, at-most-one-picker per order (and per rack in
/// single-rack mode), per-picker product supply, draw consistency in
/// shared-rack mode, and the rack-face exclusivity groups.
inline VerifyReport verify_allocation(const Instance& inst, const AllocationOptions& opt,
                                      const Allocation& a) {
    VerifyReport rep;
    const int P = inst.num_pickers();
    const int O = inst.num_orders();
    const int R = inst.num_racks();

    if (static_cast<int>(a.orders_of_picker.size()) != P ||
        static_cast<int>(a.racks_of_picker.size()) != P) {
        rep.add("shape", "per-picker lists do not match the picker count");
        return rep;
    }

    std::vector<int> order_count(O, 0);
    for (int p = 0; p < P; ++p) {
        for (int o : a.orders_of_picker[p]) {
            if (o < 0 || o >= O) {
                rep.add("shape", "order index " + std::to_string(o) + " out of range");
                return rep;
            }
            ++order_count[o];
        }
    }
    std::vector<int> rack_count(R, 0);
    std::vector<bool> used(R, false);
    for (int r : a.used_racks) {
        if (r < 0 || r >= R) {
            rep.add("shape", "used rack index " + std::to_string(r) + " out of range");
            return rep;
        }
        used[r] = true;
    }
    for (int p = 0; p < P; ++p) {
        for (int r : a.racks_of_picker[p]) {
            if (r < 0 || r >= R) {
                rep.add("shape", "rack index " + std::to_string(r) + " out of range");
                return rep;
            }
            ++rack_count[r];
        }
    }

    // Order side: capacities and exclusivity.
    if (opt.workload == WorkloadMode::fixed_capacities) {
        for (int p = 0; p < P; ++p) {
            const int got = static_cast<int>(a.orders_of_picker[p].size());
            if (got != inst.pickers[p].capacity) {
                rep.add("capacity", "picker " + std::to_string(p) + " has " + std::to_string(got) +
                                        " orders, capacity is " +
                                        std::to_string(inst.pickers[p].capacity));
            }
        }
    } else {
        int total = 0;
        for (int p = 0; p < P; ++p) total += static_cast<int>(a.orders_of_picker[p].size());
        if (total < opt.min_total_orders) {
            rep.add("min_total", "allocated " + std::to_string(total) + " orders, need at least " +
                                     std::to_string(opt.min_total_orders));
        }
    }
    for (int o = 0; o < O; ++o) {
        if (order_count[o] > 1) {
            rep.add("one_picker", "order " + std::to_string(o) + " allocated to " +
                                      std::to_string(order_count[o]) + " pickers");
        }
    }
    if (opt.preassigned) {
        for (int p = 0; p < P; ++p) {
            for (int o : a.orders_of_picker[p]) {
                if ((*opt.preassigned)[o] != p) {
                    rep.add("preassigned", "order " + std::to_string(o) + " allocated to picker " +
                                               std::to_string(p) + ", preassigned to " +
                                               std::to_string((*opt.preassigned)[o]));
                }
            }
        }
    }

    // Rack side.
    for (int p = 0; p < P; ++p) {
        for (int r : a.racks_of_picker[p]) {
            if (!used[r]) {
                rep.add("usage", "rack " + std::to_string(r) + " allocated to picker " +
                                     std::to_string(p) + " but not marked used");
            }
        }
    }
    if (!opt.shared_racks) {
        for (int r = 0; r < R; ++r) {
            if (rack_count[r] > 1) {
                rep.add("one_rack_picker", "rack " + std::to_string(r) + " allocated to " +
                                               std::to_string(rack_count[r]) + " pickers");
            }
            if (used[r] && rack_count[r] == 0) {
                rep.add("usage", "rack " + std::to_string(r) + " marked used but not allocated");
            }
        }
    }

    // Supply per picker and product.
    for (int p = 0; p < P; ++p) {
        std::vector<long> need(inst.num_products, 0);
        for (int o : a.orders_of_picker[p]) {
            for (const auto& l : inst.orders[o].lines) need[l.product] += l.units;
        }
        std::vector<long> have(inst.num_products, 0);
        if (!opt.shared_racks) {
            for (int r : a.racks_of_picker[p]) {
                for (const auto& l : inst.racks[r].supply) have[l.product] += l.units;
            }
        } else {
            for (const auto& d : a.draws) {
                if (d.picker == p) have[d.product] += d.units;
            }
        }
        for (int i = 0; i < inst.num_products; ++i) {
            if (need[i] > have[i]) {
                rep.add("supply", "picker " + std::to_string(p) + " product " + std::to_string(i) +
                                      ": demand " + std::to_string(need[i]) + " exceeds supply " +
                                      std::to_string(have[i]));
            }
        }
    }

    if (opt.shared_racks) {
        // Draws must come from allocated racks, respect each rack's stock
        // per product, and never exceed it across pickers.
        std::vector<std::vector<long>> rack_draw(R, std::vector<long>(inst.num_products, 0));
        for (const auto& d : a.draws) {
            if (d.rack < 0 || d.rack >= R || d.product < 0 || d.product >= inst.num_products ||
                d.picker < 0 || d.picker >= P || d.units < 0) {
                rep.add("shape", "draw entry out of range");
                continue;
            }
            bool allocated = false;
            for (int r : a.racks_of_picker[d.picker]) {
                if (r == d.rack) { allocated = true; break; }
            }
            if (!allocated) {
                rep.add("draw_rack", "draw of product " + std::to_string(d.product) + " from rack " +
                                         std::to_string(d.rack) + " at picker " +
                                         std::to_string(d.picker) + " without allocation");
            }
            rack_draw[d.rack][d.product] += d.units;
        }
        for (int r = 0; r < R; ++r) {
            std::vector<int> s = inst.rack_supply(r);
            for (int i = 0; i < inst.num_products; ++i) {
                if (rack_draw[r][i] > s[i]) {
                    rep.add("rack_stock", "rack " + std::to_string(r) + " product " +
                                              std::to_string(i) + ": drawn " +
                                              std::to_string(rack_draw[r][i]) + " of " +
                                              std::to_string(s[i]));
                }
            }
        }
    }

    for (size_t g = 0; g < inst.face_groups.size(); ++g) {
        int used_in_group = 0;
        for (int r : inst.face_groups[g]) {
            if (used[r]) ++used_in_group;
        }
        if (used_in_group > 1) {
            rep.add("face", "face group " + std::to_string(g) + " has " +
                                std::to_string(used_in_group) + " used racks");
        }
    }

    return rep;
}

}  // namespace rackopt::alloc
