#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "rackopt/core/instance.hpp"
#include "rackopt/milp/model.hpp"

namespace rackopt::alloc {

enum class ObjectiveMode { rack_count, rack_visits };
enum class WorkloadMode { fixed_capacities, min_total };

struct Pin {
    enum class Kind { order_to_picker, rack_to_picker };
    Kind kind = Kind::order_to_picker;
    int item = 0;    // order or rack index
    int picker = 0;
    bool value = true;
};

struct AllocationOptions {
    bool shared_racks = false;                    // racks may serve several pickers
    ObjectiveMode objective = ObjectiveMode::rack_count;
    WorkloadMode workload = WorkloadMode::fixed_capacities;
    int min_total_orders = 0;                     // C*, used with WorkloadMode::min_total
    std::optional<std::vector<int>> preassigned;  // full order -> picker map
    std::vector<Pin> pins;
    bool prune = true;                            // drop racks holding no demanded product
};

struct PruneResult {
    Instance reduced;
    std::vector<int> removed_racks;
    std::vector<int> kept_racks;
};

/// Removes every rack whose supply has no overlap with the demanded products
/// (such a rack can never appear in an optimal or even useful allocation).
inline PruneResult prune_redundant_racks(const Instance& inst) {
    PruneResult out;
    const std::vector<int> demand = inst.total_demand();

    out.reduced = inst;
    out.reduced.racks.clear();
    out.reduced.face_groups.clear();
    std::vector<int> new_index(inst.num_racks(), -1);
    for (int r = 0; r < inst.num_racks(); ++r) {
        long overlap = 0;
        for (const auto& l : inst.racks[r].supply) overlap += static_cast<long>(l.units) * demand[l.product];
        if (overlap > 0) {
            new_index[r] = static_cast<int>(out.reduced.racks.size());
            out.reduced.racks.push_back(inst.racks[r]);
            out.kept_racks.push_back(r);
        } else {
            out.removed_racks.push_back(r);
        }
    }
    for (const auto& group : inst.face_groups) {
        std::vector<int> g;
        for (int r : group) {
            if (new_index[r] >= 0) g.push_back(new_index[r]);
        }
        if (!g.empty()) out.reduced.face_groups.push_back(std::move(g));
    }
    return out;
}

/// A built allocation model together with its variable maps. Rack-indexed
/// maps run over the kept racks; `rack_ids[j]` recovers the original index.
struct AllocationModel {
    milp::MilpModel model;
    std::vector<std::vector<milp::VarRef>> x;  // [order][picker]
    std::vector<int> rack_ids;                 // kept rack -> original rack
    std::vector<milp::VarRef> u;               // [kept rack]
    std::vector<std::vector<milp::VarRef>> y;  // [kept rack][picker]
    // Shared mode draw variables: (product, kept rack, picker) -> var.
    std::map<std::tuple<int, int, int>, milp::VarRef> pi;
    AllocationOptions options;
};

namespace detail {

inline void validate_options(const Instance& inst, const AllocationOptions& opt) {
    if (opt.objective == ObjectiveMode::rack_visits && !opt.shared_racks) {
        throw std::invalid_argument("rack_visits objective requires shared_racks");
    }
    if (opt.workload == WorkloadMode::min_total) {
        if (opt.min_total_orders < 0 || opt.min_total_orders > inst.num_orders()) {
            throw std::invalid_argument("min_total_orders must lie in [0, O]");
        }
    }
    if (opt.preassigned) {
        if (static_cast<int>(opt.preassigned->size()) != inst.num_orders()) {
            throw std::invalid_argument("preassigned map must cover every order");
        }
        for (int p : *opt.preassigned) {
            if (p < 0 || p >= inst.num_pickers()) {
                throw std::invalid_argument("preassigned picker index out of range");
            }
        }
    }
    // Pins that contradict the one-picker-per-order / one-picker-per-rack
    // rows are caught here; other conflicts surface at solve time.
    std::map<int, int> order_pin, rack_pin;
    for (const auto& pin : opt.pins) {
        if (pin.picker < 0 || pin.picker >= inst.num_pickers()) {
            throw std::invalid_argument("pin references picker out of range");
        }
        if (pin.kind == Pin::Kind::order_to_picker) {
            if (pin.item < 0 || pin.item >= inst.num_orders()) {
                throw std::invalid_argument("pin references order out of range");
            }
            if (pin.value) {
                auto [it, fresh] = order_pin.try_emplace(pin.item, pin.picker);
                if (!fresh && it->second != pin.picker) {
                    throw std::invalid_argument("order " + std::to_string(pin.item) +
                                                " pinned to two pickers");
                }
            }
        } else {
            if (pin.item < 0 || pin.item >= inst.num_racks()) {
                throw std::invalid_argument("pin references rack out of range");
            }
            if (pin.value && !opt.shared_racks) {
                auto [it, fresh] = rack_pin.try_emplace(pin.item, pin.picker);
                if (!fresh && it->second != pin.picker) {
                    throw std::invalid_argument("rack " + std::to_string(pin.item) +
                                                " pinned to two pickers in single-rack mode");
                }
            }
        }
    }
}

}  // namespace detail

inline void pin_assignments(AllocationModel& am, const std::vector<Pin>& pins);

/// Builds the order-and-rack allocation integer program.
///
/// Rows, in order: per-picker capacity (or the minimum-total-orders row), the
/// at-most-one-picker row per order, then either the rack usage/supply rows of
/// the single-rack formulation or the draw-variable rows of the shared-rack
/// formulation, then one row per rack-face group. Rack usage variables carry
/// branching priority above all other variables, ordered by ascending rack
/// index.
inline AllocationModel build_allocation_model(const Instance& inst, const AllocationOptions& opt) {
    require_valid_instance(inst);
    detail::validate_options(inst, opt);

    AllocationModel am;
    am.options = opt;
    milp::MilpModel& m = am.model;

    const int O = inst.num_orders();
    const int P = inst.num_pickers();
    const std::vector<int> demand = inst.total_demand();

    std::vector<int> kept;
    std::vector<std::vector<int>> face_groups;
    if (opt.prune) {
        PruneResult pr = prune_redundant_racks(inst);
        kept = pr.kept_racks;
        face_groups = pr.reduced.face_groups;  // indices already remapped to kept positions
    } else {
        kept.resize(inst.num_racks());
        for (int r = 0; r < inst.num_racks(); ++r) kept[r] = r;
        face_groups = inst.face_groups;
    }
    am.rack_ids = kept;
    const int K = static_cast<int>(kept.size());

    std::vector<std::vector<int>> supply(K);
    for (int j = 0; j < K; ++j) supply[j] = inst.rack_supply(kept[j]);
    std::vector<std::vector<int>> order_demand(O);
    for (int o = 0; o < O; ++o) order_demand[o] = inst.order_demand(o);

    am.x.assign(O, {});
    for (int o = 0; o < O; ++o) {
        for (int p = 0; p < P; ++p) {
            am.x[o].push_back(m.add_variable(
                milp::binary_var("x[" + std::to_string(o) + "," + std::to_string(p) + "]")));
        }
    }
    for (int j = 0; j < K; ++j) {
        am.u.push_back(m.add_variable(
            milp::binary_var("u[" + std::to_string(kept[j]) + "]", /*branch_priority=*/K - j)));
    }
    am.y.assign(K, {});
    for (int j = 0; j < K; ++j) {
        for (int p = 0; p < P; ++p) {
            am.y[j].push_back(m.add_variable(
                milp::binary_var("y[" + std::to_string(kept[j]) + "," + std::to_string(p) + "]")));
        }
    }
    if (opt.shared_racks) {
        for (int j = 0; j < K; ++j) {
            for (const auto& line : inst.racks[kept[j]].supply) {
                const int i = line.product;
                if (demand[i] < 1) continue;
                for (int p = 0; p < P; ++p) {
                    am.pi[{i, j, p}] = m.add_variable(milp::integer_var(
                        "pi[" + std::to_string(i) + "," + std::to_string(kept[j]) + "," +
                            std::to_string(p) + "]",
                        0.0, static_cast<double>(line.units)));
                }
            }
        }
    }

    if (opt.workload == WorkloadMode::fixed_capacities) {
        for (int p = 0; p < P; ++p) {
            milp::LinearConstraint c;
            for (int o = 0; o < O; ++o) c.terms.push_back({am.x[o][p], 1.0});
            c.sense = milp::ConstraintSense::equal;
            c.rhs = inst.pickers[p].capacity;
            c.name = "capacity[" + std::to_string(p) + "]";
            m.add_linear_constraint(std::move(c));
        }
    } else {
        milp::LinearConstraint c;
        for (int o = 0; o < O; ++o)
            for (int p = 0; p < P; ++p) c.terms.push_back({am.x[o][p], 1.0});
        c.sense = milp::ConstraintSense::greater_equal;
        c.rhs = opt.min_total_orders;
        c.name = "min_total_orders";
        m.add_linear_constraint(std::move(c));
    }

    for (int o = 0; o < O; ++o) {
        milp::LinearConstraint c;
        for (int p = 0; p < P; ++p) c.terms.push_back({am.x[o][p], 1.0});
        c.sense = milp::ConstraintSense::less_equal;
        c.rhs = 1.0;
        c.name = "one_picker[" + std::to_string(o) + "]";
        m.add_linear_constraint(std::move(c));
    }

    if (!opt.shared_racks) {
        for (int j = 0; j < K; ++j) {
            milp::LinearConstraint c;
            for (int p = 0; p < P; ++p) c.terms.push_back({am.y[j][p], 1.0});
            c.terms.push_back({am.u[j], -1.0});
            c.sense = milp::ConstraintSense::equal;
            c.rhs = 0.0;
            c.name = "usage[" + std::to_string(kept[j]) + "]";
            m.add_linear_constraint(std::move(c));
        }
        for (int i = 0; i < inst.num_products; ++i) {
            if (demand[i] < 1) continue;
            for (int p = 0; p < P; ++p) {
                milp::LinearConstraint c;
                for (int j = 0; j < K; ++j) {
                    if (supply[j][i] > 0) c.terms.push_back({am.y[j][p], static_cast<double>(supply[j][i])});
                }
                for (int o = 0; o < O; ++o) {
                    if (order_demand[o][i] > 0)
                        c.terms.push_back({am.x[o][p], -static_cast<double>(order_demand[o][i])});
                }
                c.sense = milp::ConstraintSense::greater_equal;
                c.rhs = 0.0;
                c.name = "supply[" + std::to_string(i) + "," + std::to_string(p) + "]";
                m.add_linear_constraint(std::move(c));
            }
        }
    } else {
        for (int i = 0; i < inst.num_products; ++i) {
            if (demand[i] < 1) continue;
            for (int p = 0; p < P; ++p) {
                milp::LinearConstraint c;
                for (int j = 0; j < K; ++j) {
                    auto it = am.pi.find({i, j, p});
                    if (it != am.pi.end()) c.terms.push_back({it->second, 1.0});
                }
                for (int o = 0; o < O; ++o) {
                    if (order_demand[o][i] > 0)
                        c.terms.push_back({am.x[o][p], -static_cast<double>(order_demand[o][i])});
                }
                c.sense = milp::ConstraintSense::greater_equal;
                c.rhs = 0.0;
                c.name = "draw_supply[" + std::to_string(i) + "," + std::to_string(p) + "]";
                m.add_linear_constraint(std::move(c));
            }
        }
        for (const auto& [key, var] : am.pi) {
            const auto& [i, j, p] = key;
            milp::LinearConstraint c;
            c.terms.push_back({var, 1.0});
            c.terms.push_back({am.y[j][p], -static_cast<double>(supply[j][i])});
            c.sense = milp::ConstraintSense::less_equal;
            c.rhs = 0.0;
            c.name = "draw_rack[" + std::to_string(i) + "," + std::to_string(kept[j]) + "," +
                     std::to_string(p) + "]";
            m.add_linear_constraint(std::move(c));
        }
        for (int j = 0; j < K; ++j) {
            for (const auto& line : inst.racks[kept[j]].supply) {
                const int i = line.product;
                if (demand[i] < 1) continue;
                milp::LinearConstraint c;
                for (int p = 0; p < P; ++p) c.terms.push_back({am.pi.at({i, j, p}), 1.0});
                c.sense = milp::ConstraintSense::less_equal;
                c.rhs = line.units;
                c.name = "rack_stock[" + std::to_string(i) + "," + std::to_string(kept[j]) + "]";
                m.add_linear_constraint(std::move(c));
            }
        }
        for (int j = 0; j < K; ++j) {
            for (int p = 0; p < P; ++p) {
                milp::LinearConstraint c;
                c.terms.push_back({am.y[j][p], 1.0});
                c.terms.push_back({am.u[j], -1.0});
                c.sense = milp::ConstraintSense::less_equal;
                c.rhs = 0.0;
                c.name = "visit_usage[" + std::to_string(kept[j]) + "," + std::to_string(p) + "]";
                m.add_linear_constraint(std::move(c));
            }
        }
    }

    for (size_t g = 0; g < face_groups.size(); ++g) {
        if (face_groups[g].size() < 2) continue;
        milp::LinearConstraint c;
        for (int j : face_groups[g]) c.terms.push_back({am.u[j], 1.0});
        c.sense = milp::ConstraintSense::less_equal;
        c.rhs = 1.0;
        c.name = "face[" + std::to_string(g) + "]";
        m.add_linear_constraint(std::move(c));
    }

    milp::Objective obj;
    obj.sense = milp::ObjectiveSense::minimize;
    if (opt.objective == ObjectiveMode::rack_count) {
        for (int j = 0; j < K; ++j) obj.terms.push_back({am.u[j], 1.0});
    } else {
        for (int j = 0; j < K; ++j)
            for (int p = 0; p < P; ++p) obj.terms.push_back({am.y[j][p], 1.0});
    }
    m.set_objective(std::move(obj));

    if (opt.preassigned) {
        for (int o = 0; o < O; ++o) {
            for (int p = 0; p < P; ++p) {
                m.fix_variable(am.x[o][p], (*opt.preassigned)[o] == p ? 1.0 : 0.0);
            }
        }
    }
    if (!opt.pins.empty()) pin_assignments(am, opt.pins);

    return am;
}

/// Fixes order/rack assignment variables in a built model. Contradictions
/// between pins surface as ProvenInfeasible at solve time unless a pin
/// directly violates the variable's current bounds.
inline void pin_assignments(AllocationModel& am, const std::vector<Pin>& pins) {
    const int P = am.x.empty() ? 0 : static_cast<int>(am.x[0].size());
    std::vector<int> kept_pos;  // original rack -> kept position
    for (const auto& pin : pins) {
        if (pin.picker < 0 || pin.picker >= P) {
            throw std::invalid_argument("pin_assignments: picker out of range");
        }
        if (pin.kind == Pin::Kind::order_to_picker) {
            if (pin.item < 0 || pin.item >= static_cast<int>(am.x.size())) {
                throw std::invalid_argument("pin_assignments: order out of range");
            }
            am.model.fix_variable(am.x[pin.item][pin.picker], pin.value ? 1.0 : 0.0);
        } else {
            int j = -1;
            for (size_t k = 0; k < am.rack_ids.size(); ++k) {
                if (am.rack_ids[k] == pin.item) { j = static_cast<int>(k); break; }
            }
            if (j < 0) {
                if (!pin.value) continue;  // pruned racks are already unused
                throw std::invalid_argument("pin_assignments: rack " + std::to_string(pin.item) +
                                            " was pruned as redundant and cannot be pinned in");
            }
            am.model.fix_variable(am.y[j][pin.picker], pin.value ? 1.0 : 0.0);
        }
    }
}

}  // namespace rackopt::alloc
