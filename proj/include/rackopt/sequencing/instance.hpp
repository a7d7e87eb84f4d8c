#pragma once

#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rackopt/allocation/solve.hpp"
#include "rackopt/core/instance.hpp"

namespace rackopt::seq {

enum class SequencingMode { no_revisit, revisit, single_bin };

/// One picker's rack-sequencing problem: the orders O* and racks R* the
/// allocation gave the picker, restricted to the demanded products N*, plus
/// the bin count B and the revisit budget M. Orders consisting of one unit of
/// one product are flagged (O1*) together with that product tau(o).
struct SequencingInstance {
    std::vector<int> order_ids;    // local order -> original order index
    std::vector<int> product_ids;  // local product -> original product index
    std::vector<int> rack_ids;     // local rack -> original rack index

    std::vector<std::vector<int>> demand;  // [order][product]
    std::vector<std::vector<int>> supply;  // [rack][product]

    int bins = 2;          // B
    int max_revisits = 0;  // M

    std::vector<bool> is_single_unit;  // o in O1*
    std::vector<int> tau;              // unique product for O1* orders, -1 otherwise

    int num_orders() const { return static_cast<int>(demand.size()); }
    int num_products() const { return static_cast<int>(product_ids.size()); }
    int num_racks() const { return static_cast<int>(supply.size()); }

    /// Number of rack positions the model sequences: every rack appears once,
    /// plus M copies each in revisit mode.
    int num_slots(SequencingMode mode) const {
        return mode == SequencingMode::revisit ? (max_revisits + 1) * num_racks() : num_racks();
    }

    void derive_single_unit_orders() {
        const int O = num_orders();
        is_single_unit.assign(O, false);
        tau.assign(O, -1);
        for (int o = 0; o < O; ++o) {
            int total = 0, last = -1;
            for (int i = 0; i < num_products(); ++i) {
                total += demand[o][i];
                if (demand[o][i] > 0) last = i;
            }
            if (total == 1) {
                is_single_unit[o] = true;
                tau[o] = last;
            }
        }
    }
};

/// True when every demanded product is covered by the racks in aggregate;
/// without this no rack sequence can supply all orders.
inline std::optional<std::string> supply_shortfall(const SequencingInstance& si) {
    for (int i = 0; i < si.num_products(); ++i) {
        long need = 0, have = 0;
        for (int o = 0; o < si.num_orders(); ++o) need += si.demand[o][i];
        for (int r = 0; r < si.num_racks(); ++r) have += si.supply[r][i];
        if (need > have) {
            return "product " + std::to_string(si.product_ids.empty() ? i : si.product_ids[i]) +
                   ": demand " + std::to_string(need) + " exceeds allocated supply " +
                   std::to_string(have);
        }
    }
    return std::nullopt;
}

inline bool supply_precondition_holds(const SequencingInstance& si) {
    return !supply_shortfall(si).has_value();
}

/// Builds a sequencing instance directly from dense demand/supply tables
/// (used by tests and generators). Labels default to identity.
inline SequencingInstance make_sequencing_instance(std::vector<std::vector<int>> demand,
                                                   std::vector<std::vector<int>> supply, int bins,
                                                   int max_revisits) {
    if (bins < 1) throw std::invalid_argument("make_sequencing_instance: bins must be >= 1");
    if (max_revisits < 0) throw std::invalid_argument("make_sequencing_instance: revisits must be >= 0");
    SequencingInstance si;
    si.demand = std::move(demand);
    si.supply = std::move(supply);
    const int num_products = si.demand.empty()
                                 ? (si.supply.empty() ? 0 : static_cast<int>(si.supply[0].size()))
                                 : static_cast<int>(si.demand[0].size());
    for (const auto& row : si.demand) {
        if (static_cast<int>(row.size()) != num_products)
            throw std::invalid_argument("make_sequencing_instance: ragged demand table");
    }
    for (const auto& row : si.supply) {
        if (static_cast<int>(row.size()) != num_products)
            throw std::invalid_argument("make_sequencing_instance: ragged supply table");
    }
    si.order_ids.resize(si.demand.size());
    std::iota(si.order_ids.begin(), si.order_ids.end(), 0);
    si.product_ids.resize(num_products);
    std::iota(si.product_ids.begin(), si.product_ids.end(), 0);
    si.rack_ids.resize(si.supply.size());
    std::iota(si.rack_ids.begin(), si.rack_ids.end(), 0);
    si.bins = bins;
    si.max_revisits = max_revisits;
    si.derive_single_unit_orders();
    return si;
}

/// Extracts one picker's sequencing problem from an allocation. In
/// shared-rack mode the per-picker draws stand in for the rack supplies, so
/// that rack inventory already claimed by other pickers is out of reach.
/// Throws when the picker's racks cannot cover its orders (no sequence can
/// exist then).
inline SequencingInstance derive_sequencing_instance(const Instance& inst,
                                                     const alloc::Allocation& allocation,
                                                     bool shared_racks, int picker, int bins,
                                                     int max_revisits) {
    if (picker < 0 || picker >= static_cast<int>(allocation.orders_of_picker.size())) {
        throw std::invalid_argument("derive_sequencing_instance: picker out of range");
    }
    if (bins < 1) throw std::invalid_argument("derive_sequencing_instance: bins must be >= 1");
    if (max_revisits < 0)
        throw std::invalid_argument("derive_sequencing_instance: revisits must be >= 0");

    SequencingInstance si;
    si.bins = bins;
    si.max_revisits = max_revisits;
    si.order_ids = allocation.orders_of_picker[picker];
    si.rack_ids = allocation.racks_of_picker[picker];

    // N*: products demanded by this picker's orders.
    std::vector<int> product_map(inst.num_products, -1);
    for (int o : si.order_ids) {
        for (const auto& l : inst.orders[o].lines) {
            if (product_map[l.product] < 0) {
                product_map[l.product] = static_cast<int>(si.product_ids.size());
                si.product_ids.push_back(l.product);
            }
        }
    }
    const int NP = static_cast<int>(si.product_ids.size());

    si.demand.assign(si.order_ids.size(), std::vector<int>(NP, 0));
    for (size_t o = 0; o < si.order_ids.size(); ++o) {
        for (const auto& l : inst.orders[si.order_ids[o]].lines) {
            si.demand[o][product_map[l.product]] += l.units;
        }
    }

    si.supply.assign(si.rack_ids.size(), std::vector<int>(NP, 0));
    if (!shared_racks) {
        for (size_t r = 0; r < si.rack_ids.size(); ++r) {
            for (const auto& l : inst.racks[si.rack_ids[r]].supply) {
                if (product_map[l.product] >= 0) si.supply[r][product_map[l.product]] += l.units;
            }
        }
    } else {
        for (const auto& d : allocation.draws) {
            if (d.picker != picker || product_map[d.product] < 0) continue;
            for (size_t r = 0; r < si.rack_ids.size(); ++r) {
                if (si.rack_ids[r] == d.rack) {
                    si.supply[r][product_map[d.product]] += d.units;
                    break;
                }
            }
        }
    }

    si.derive_single_unit_orders();
    if (auto shortfall = supply_shortfall(si)) {
        throw std::invalid_argument("derive_sequencing_instance: " + *shortfall);
    }
    return si;
}

/// Theorem-2 reduction: drops the single-unit-single-product orders. The
/// deferred list carries (local order index in the full instance, product)
/// pairs for reinsertion. Supplies are untouched. Requires the dedicated-bin
/// regime (B >= 2).
struct Reduction {
    SequencingInstance reduced;
    std::vector<int> kept_orders;                  // reduced order -> full local order
    std::vector<std::pair<int, int>> deferred;     // (full local order, product)
};

inline Reduction reduce_single_unit_orders(const SequencingInstance& si) {
    if (si.bins < 2) {
        throw std::invalid_argument("reduce_single_unit_orders: needs B >= 2 (dedicated bin)");
    }
    Reduction red;
    red.reduced = si;
    red.reduced.order_ids.clear();
    red.reduced.demand.clear();
    for (int o = 0; o < si.num_orders(); ++o) {
        if (si.is_single_unit[o]) {
            red.deferred.push_back({o, si.tau[o]});
        } else {
            red.kept_orders.push_back(o);
            red.reduced.order_ids.push_back(si.order_ids[o]);
            red.reduced.demand.push_back(si.demand[o]);
        }
    }
    red.reduced.derive_single_unit_orders();
    return red;
}

}  // namespace rackopt::seq
