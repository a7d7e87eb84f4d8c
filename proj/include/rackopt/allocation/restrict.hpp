#pragma once

#include <vector>

#include "rackopt/core/instance.hpp"

namespace rackopt::alloc {

/// A sub-instance over subsets of orders and racks, with maps back to the
/// parent indices. Picker capacities are supplied by the caller. Face groups
/// are remapped and keep only their surviving members.
struct RestrictedInstance {
    Instance instance;
    std::vector<int> order_ids;  // sub order -> parent order
    std::vector<int> rack_ids;   // sub rack -> parent rack
};

inline RestrictedInstance restrict_instance(const Instance& parent,
                                            const std::vector<int>& order_subset,
                                            const std::vector<int>& rack_subset,
                                            const std::vector<int>& capacities) {
    RestrictedInstance out;
    out.order_ids = order_subset;
    out.rack_ids = rack_subset;
    out.instance.name = parent.name;
    out.instance.num_products = parent.num_products;
    for (int o : order_subset) out.instance.orders.push_back(parent.orders[o]);
    std::vector<int> new_rack(parent.num_racks(), -1);
    for (int r : rack_subset) {
        new_rack[r] = out.instance.num_racks();
        out.instance.racks.push_back(parent.racks[r]);
    }
    for (int c : capacities) out.instance.pickers.push_back({c});
    for (const auto& group : parent.face_groups) {
        std::vector<int> g;
        for (int r : group) {
            if (new_rack[r] >= 0) g.push_back(new_rack[r]);
        }
        if (g.size() >= 2) out.instance.face_groups.push_back(std::move(g));
    }
    return out;
}

}  // namespace rackopt::alloc
