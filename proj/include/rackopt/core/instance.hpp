#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace rackopt {

/// One (product, units) entry of an order demand or a rack supply.
struct Line {
    int product = 0;
    int units = 0;

    friend bool operator==(const Line&, const Line&) = default;
};

struct Order {
    std::vector<Line> lines;

    friend bool operator==(const Order&, const Order&) = default;

    int total_units() const {
        int s = 0;
        for (const auto& l : lines) s += l.units;
        return s;
    }
};

struct Rack {
    std::vector<Line> supply;

    friend bool operator==(const Rack&, const Rack&) = default;
};

struct Picker {
    int capacity = 0;  // C_p, orders to allocate to this picker

    friend bool operator==(const Picker&, const Picker&) = default;
};

/// An order and rack allocation problem: N products, O orders with demands
/// q_io, R racks with supplies s_ir, P pickers with capacities C_p, and
/// optional groups of racks that are faces of the same physical rack.
struct Instance {
    std::string name;
    int num_products = 0;
    std::vector<Order> orders;
    std::vector<Rack> racks;
    std::vector<Picker> pickers;
    std::vector<std::vector<int>> face_groups;

    friend bool operator==(const Instance&, const Instance&) = default;

    int num_orders() const { return static_cast<int>(orders.size()); }
    int num_racks() const { return static_cast<int>(racks.size()); }
    int num_pickers() const { return static_cast<int>(pickers.size()); }

    int total_capacity() const {
        int s = 0;
        for (const auto& p : pickers) s += p.capacity;
        return s;
    }

    /// Dense demand vector of one order.
    std::vector<int> order_demand(int o) const {
        std::vector<int> d(num_products, 0);
        for (const auto& l : orders[o].lines) d[l.product] += l.units;
        return d;
    }

    /// Dense supply vector of one rack.
    std::vector<int> rack_supply(int r) const {
        std::vector<int> s(num_products, 0);
        for (const auto& l : racks[r].supply) s[l.product] += l.units;
        return s;
    }

    /// Total demand per product over all orders.
    std::vector<int> total_demand() const {
        std::vector<int> d(num_products, 0);
        for (const auto& o : orders)
            for (const auto& l : o.lines) d[l.product] += l.units;
        return d;
    }
};

/// Structural checks; returns one message per violation, empty when valid.
inline std::vector<std::string> validate_instance(const Instance& inst) {
    std::vector<std::string> bad;
    auto note = [&](std::string s) { bad.push_back(std::move(s)); };

    if (inst.num_products < 1) note("num_products must be >= 1");

    auto check_lines = [&](const std::vector<Line>& lines, const std::string& where) {
        std::vector<bool> seen(std::max(inst.num_products, 0), false);
        for (size_t i = 0; i < lines.size(); ++i) {
            const auto& l = lines[i];
            const std::string at = where + "[" + std::to_string(i) + "]";
            if (l.product < 0 || l.product >= inst.num_products) {
                note(at + ": product " + std::to_string(l.product) + " out of range");
                continue;
            }
            if (l.units <= 0) note(at + ": units must be positive");
            if (seen[l.product]) note(at + ": duplicate product " + std::to_string(l.product));
            seen[l.product] = true;
        }
    };

    for (int o = 0; o < inst.num_orders(); ++o) {
        check_lines(inst.orders[o].lines, "orders[" + std::to_string(o) + "].lines");
        if (inst.orders[o].total_units() < 1)
            note("orders[" + std::to_string(o) + "]: total demand must be >= 1");
    }
    for (int r = 0; r < inst.num_racks(); ++r) {
        check_lines(inst.racks[r].supply, "racks[" + std::to_string(r) + "].supply");
    }
    for (int p = 0; p < inst.num_pickers(); ++p) {
        if (inst.pickers[p].capacity < 0)
            note("pickers[" + std::to_string(p) + "]: capacity must be >= 0");
    }
    if (inst.total_capacity() > inst.num_orders()) {
        note("total picker capacity " + std::to_string(inst.total_capacity()) +
             " exceeds number of orders " + std::to_string(inst.num_orders()));
    }

    std::vector<bool> in_group(std::max(inst.num_racks(), 0), false);
    for (size_t g = 0; g < inst.face_groups.size(); ++g) {
        for (int r : inst.face_groups[g]) {
            if (r < 0 || r >= inst.num_racks()) {
                note("face_groups[" + std::to_string(g) + "]: rack " + std::to_string(r) +
                     " out of range");
                continue;
            }
            if (in_group[r]) {
                note("face_groups[" + std::to_string(g) + "]: rack " + std::to_string(r) +
                     " appears in more than one group");
            }
            in_group[r] = true;
        }
    }
    return bad;
}

inline void require_valid_instance(const Instance& inst) {
    auto bad = validate_instance(inst);
    if (bad.empty()) return;
    std::string msg = "invalid instance";
    if (!inst.name.empty()) msg += " '" + inst.name + "'";
    for (const auto& b : bad) msg += "; " + b;
    throw std::invalid_argument(msg);
}

}  // namespace rackopt
