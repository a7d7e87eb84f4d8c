#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "rackopt/milp/model.hpp"
#include "rackopt/sequencing/instance.hpp"

namespace rackopt::seq {

/// The sequencing feasibility model and its variable maps. Positions k and
/// rack slots e run over 0..K-1 where K = (M+1)*L in revisit mode and K = L
/// otherwise; slot e stands for rack e % L (copies share the original's
/// supply).
struct SequencingModel {
    milp::MilpModel model;
    SequencingMode mode = SequencingMode::no_revisit;
    int slots = 0;

    std::vector<std::vector<milp::VarRef>> z;      // [position][rack slot]
    std::vector<std::vector<milp::VarRef>> alpha;  // [order][position]
    std::vector<std::vector<milp::VarRef>> beta;   // [order][position]
    std::map<std::tuple<int, int, int>, milp::VarRef> gamma;        // (product, order, position)
    std::map<std::tuple<int, int, int>, milp::VarRef> big_gamma;    // (product, order, rack slot)
    std::map<std::tuple<int, int, int, int>, milp::VarRef> lambda;  // (product, order, position, rack slot)
};

/// Builds the picker rack-sequencing feasibility program (the objective is
/// constant). Modes:
///  - no_revisit: every rack is presented exactly once.
///  - revisit:    M copies per rack, coupled to the shared inventory through
///                the linearised per-rack totals.
///  - single_bin: replaces the open-order capacity row with the B=1 variant
///                and its interference rows.
/// With B = 1 and a mode other than single_bin, an order needing two racks
/// makes the model infeasible through the capacity row; that is the modelled
/// behaviour, not an error.
inline SequencingModel build_sequencing_model(const SequencingInstance& si, SequencingMode mode) {
    if (mode == SequencingMode::revisit && si.max_revisits < 1) {
        throw std::invalid_argument("build_sequencing_model: revisit mode needs M >= 1");
    }
    if (mode == SequencingMode::single_bin && si.bins != 1) {
        throw std::invalid_argument("build_sequencing_model: single_bin mode is the B = 1 case");
    }

    SequencingModel sm;
    sm.mode = mode;
    const int L = si.num_racks();
    const int K = si.num_slots(mode);
    sm.slots = K;
    const int O = si.num_orders();
    const int NP = si.num_products();
    milp::MilpModel& m = sm.model;

    auto rack_of_slot = [&](int e) { return e % L; };

    // Products available somewhere on the picker's racks; a demanded product
    // with no supply is expressed as an (infeasible) empty demand row.
    std::vector<bool> available(NP, false);
    for (int i = 0; i < NP; ++i) {
        for (int r = 0; r < L; ++r) {
            if (si.supply[r][i] > 0) { available[i] = true; break; }
        }
    }

    sm.z.assign(K, {});
    for (int k = 0; k < K; ++k) {
        for (int e = 0; e < K; ++e) {
            sm.z[k].push_back(m.add_variable(
                milp::binary_var("z[" + std::to_string(k) + "," + std::to_string(e) + "]")));
        }
    }
    sm.alpha.assign(O, {});
    sm.beta.assign(O, {});
    for (int o = 0; o < O; ++o) {
        for (int k = 0; k < K; ++k) {
            sm.alpha[o].push_back(m.add_variable(
                milp::binary_var("alpha[" + std::to_string(o) + "," + std::to_string(k) + "]")));
        }
        for (int k = 0; k < K; ++k) {
            sm.beta[o].push_back(m.add_variable(
                milp::binary_var("beta[" + std::to_string(o) + "," + std::to_string(k) + "]")));
        }
    }
    for (int i = 0; i < NP; ++i) {
        for (int o = 0; o < O; ++o) {
            if (si.demand[o][i] < 1 || !available[i]) continue;
            for (int k = 0; k < K; ++k) {
                sm.gamma[{i, o, k}] = m.add_variable(milp::integer_var(
                    "gamma[" + std::to_string(i) + "," + std::to_string(o) + "," + std::to_string(k) + "]",
                    0.0, si.demand[o][i]));
            }
        }
    }
    if (mode == SequencingMode::revisit) {
        for (int i = 0; i < NP; ++i) {
            for (int o = 0; o < O; ++o) {
                for (int e = 0; e < K; ++e) {
                    const int r = rack_of_slot(e);
                    if (si.demand[o][i] < 1 || si.supply[r][i] < 1) continue;
                    const int q_cap = std::min(si.demand[o][i], si.supply[r][i]);
                    sm.big_gamma[{i, o, e}] = m.add_variable(milp::integer_var(
                        "Gamma[" + std::to_string(i) + "," + std::to_string(o) + "," +
                            std::to_string(e) + "]",
                        0.0, q_cap));
                    for (int k = 0; k < K; ++k) {
                        sm.lambda[{i, o, k, e}] = m.add_variable(milp::integer_var(
                            "Lambda[" + std::to_string(i) + "," + std::to_string(o) + "," +
                                std::to_string(k) + "," + std::to_string(e) + "]",
                            0.0, q_cap));
                    }
                }
            }
        }
    }

    // Every rack slot takes one position, every position takes one slot.
    for (int e = 0; e < K; ++e) {
        milp::LinearConstraint c;
        for (int k = 0; k < K; ++k) c.terms.push_back({sm.z[k][e], 1.0});
        c.sense = milp::ConstraintSense::equal;
        c.rhs = 1.0;
        c.name = "one_position[" + std::to_string(e) + "]";
        m.add_linear_constraint(std::move(c));
    }
    for (int k = 0; k < K; ++k) {
        milp::LinearConstraint c;
        for (int e = 0; e < K; ++e) c.terms.push_back({sm.z[k][e], 1.0});
        c.sense = milp::ConstraintSense::equal;
        c.rhs = 1.0;
        c.name = "one_rack[" + std::to_string(k) + "]";
        m.add_linear_constraint(std::move(c));
    }

    // Per-position supply of each product.
    for (int i = 0; i < NP; ++i) {
        if (!available[i]) continue;
        for (int k = 0; k < K; ++k) {
            milp::LinearConstraint c;
            for (int o = 0; o < O; ++o) {
                auto it = sm.gamma.find({i, o, k});
                if (it != sm.gamma.end()) c.terms.push_back({it->second, 1.0});
            }
            if (c.terms.empty()) continue;
            for (int e = 0; e < K; ++e) {
                const int s = si.supply[rack_of_slot(e)][i];
                if (s > 0) c.terms.push_back({sm.z[k][e], -static_cast<double>(s)});
            }
            c.sense = milp::ConstraintSense::less_equal;
            c.rhs = 0.0;
            c.name = "slot_supply[" + std::to_string(i) + "," + std::to_string(k) + "]";
            m.add_linear_constraint(std::move(c));
        }
    }

    // Every order receives its demand.
    for (int i = 0; i < NP; ++i) {
        for (int o = 0; o < O; ++o) {
            if (si.demand[o][i] < 1) continue;
            milp::LinearConstraint c;
            for (int k = 0; k < K; ++k) {
                auto it = sm.gamma.find({i, o, k});
                if (it != sm.gamma.end()) c.terms.push_back({it->second, 1.0});
            }
            c.sense = milp::ConstraintSense::equal;
            c.rhs = si.demand[o][i];
            c.name = "demand[" + std::to_string(i) + "," + std::to_string(o) + "]";
            m.add_linear_constraint(std::move(c));
        }
    }

    // Picks only for open orders.
    for (const auto& [key, var] : sm.gamma) {
        const auto& [i, o, k] = key;
        milp::LinearConstraint c;
        c.terms.push_back({var, 1.0});
        c.terms.push_back({sm.alpha[o][k], -static_cast<double>(si.demand[o][i])});
        c.sense = milp::ConstraintSense::less_equal;
        c.rhs = 0.0;
        c.name = "open_pick[" + std::to_string(i) + "," + std::to_string(o) + "," + std::to_string(k) + "]";
        m.add_linear_constraint(std::move(c));
    }

    // Bin capacity at each position.
    if (mode != SequencingMode::single_bin) {
        for (int k = 0; k < K; ++k) {
            milp::LinearConstraint c;
            for (int o = 0; o < O; ++o) {
                c.terms.push_back({sm.alpha[o][k], 1.0});
                c.terms.push_back({sm.beta[o][k], -1.0});
            }
            if (c.terms.empty()) continue;
            c.sense = milp::ConstraintSense::less_equal;
            c.rhs = si.bins - 1;
            c.name = "bins[" + std::to_string(k) + "]";
            m.add_linear_constraint(std::move(c));
        }
    } else {
        for (int k = 0; k < K; ++k) {
            milp::LinearConstraint c;
            for (int o = 0; o < O; ++o) {
                c.terms.push_back({sm.alpha[o][k], 1.0});
                c.terms.push_back({sm.beta[o][k], -1.0});
            }
            if (c.terms.empty()) continue;
            c.sense = milp::ConstraintSense::less_equal;
            c.rhs = 1.0;
            c.name = "single_bin[" + std::to_string(k) + "]";
            m.add_linear_constraint(std::move(c));
        }
        // An order opened and closed at an interior position cannot share it
        // with an order that is carried across that position.
        for (int o = 0; o < O; ++o) {
            if (!si.is_single_unit[o]) continue;
            for (int d = 0; d < O; ++d) {
                if (si.is_single_unit[d]) continue;
                for (int k = 1; k + 1 < K; ++k) {
                    milp::LinearConstraint c;
                    c.terms.push_back({sm.alpha[o][k], 1.0});
                    c.terms.push_back({sm.alpha[d][k - 1], 1.0});
                    for (int r = k + 1; r < K; ++r) c.terms.push_back({sm.beta[d][r], 1.0});
                    c.sense = milp::ConstraintSense::less_equal;
                    c.rhs = 2.0;
                    c.name = "single_bin_block[" + std::to_string(o) + "," + std::to_string(d) + "," +
                             std::to_string(k) + "]";
                    m.add_linear_constraint(std::move(c));
                }
            }
        }
    }

    // Single-unit orders open and close with the same rack, and their single
    // pick coincides with being open.
    for (int o = 0; o < O; ++o) {
        if (!si.is_single_unit[o]) continue;
        for (int k = 0; k < K; ++k) {
            milp::LinearConstraint c;
            c.terms.push_back({sm.alpha[o][k], 1.0});
            c.terms.push_back({sm.beta[o][k], -1.0});
            c.sense = milp::ConstraintSense::equal;
            c.rhs = 0.0;
            c.name = "single_open_close[" + std::to_string(o) + "," + std::to_string(k) + "]";
            m.add_linear_constraint(std::move(c));
        }
        const int t = si.tau[o];
        for (int k = 0; k < K; ++k) {
            auto it = sm.gamma.find({t, o, k});
            if (it == sm.gamma.end()) continue;
            milp::LinearConstraint c;
            c.terms.push_back({it->second, 1.0});
            c.terms.push_back({sm.alpha[o][k], -1.0});
            c.sense = milp::ConstraintSense::equal;
            c.rhs = 0.0;
            c.name = "single_pick[" + std::to_string(o) + "," + std::to_string(k) + "]";
            m.add_linear_constraint(std::move(c));
        }
    }

    // Every order closes exactly once.
    for (int o = 0; o < O; ++o) {
        milp::LinearConstraint c;
        for (int k = 0; k < K; ++k) c.terms.push_back({sm.beta[o][k], 1.0});
        c.sense = milp::ConstraintSense::equal;
        c.rhs = 1.0;
        c.name = "close_once[" + std::to_string(o) + "]";
        m.add_linear_constraint(std::move(c));
    }

    // Multi-rack orders: close as soon as no future picks remain, never open
    // before the first pick, never reopen, stay open until closed.
    for (int o = 0; o < O; ++o) {
        if (si.is_single_unit[o]) continue;

        {
            milp::LinearConstraint c;  // close at the first position if nothing follows
            c.terms.push_back({sm.beta[o][0], 1.0});
            for (int i = 0; i < NP; ++i) {
                for (int k = 1; k < K; ++k) {
                    auto it = sm.gamma.find({i, o, k});
                    if (it != sm.gamma.end()) c.terms.push_back({it->second, 1.0});
                }
            }
            c.sense = milp::ConstraintSense::greater_equal;
            c.rhs = 1.0;
            c.name = "close_first[" + std::to_string(o) + "]";
            m.add_linear_constraint(std::move(c));
        }
        for (int k = 1; k + 1 < K; ++k) {
            milp::LinearConstraint c;
            c.terms.push_back({sm.beta[o][k], 1.0});
            for (int i = 0; i < NP; ++i) {
                for (int n = k + 1; n < K; ++n) {
                    auto it = sm.gamma.find({i, o, n});
                    if (it != sm.gamma.end()) c.terms.push_back({it->second, 1.0});
                }
            }
            for (int n = 0; n < k; ++n) c.terms.push_back({sm.beta[o][n], 1.0});
            c.sense = milp::ConstraintSense::greater_equal;
            c.rhs = 1.0;
            c.name = "close_when_done[" + std::to_string(o) + "," + std::to_string(k) + "]";
            m.add_linear_constraint(std::move(c));
        }
        for (int k = 0; k < K; ++k) {
            milp::LinearConstraint c;  // open requires a pick no later than k
            c.terms.push_back({sm.alpha[o][k], 1.0});
            for (int i = 0; i < NP; ++i) {
                for (int n = 0; n <= k; ++n) {
                    auto it = sm.gamma.find({i, o, n});
                    if (it != sm.gamma.end()) c.terms.push_back({it->second, -1.0});
                }
            }
            c.sense = milp::ConstraintSense::less_equal;
            c.rhs = 0.0;
            c.name = "open_needs_pick[" + std::to_string(o) + "," + std::to_string(k) + "]";
            m.add_linear_constraint(std::move(c));
        }
        for (int k = 1; k < K; ++k) {
            milp::LinearConstraint c;  // no reopening after the close
            c.terms.push_back({sm.alpha[o][k], 1.0});
            for (int n = 0; n < k; ++n) c.terms.push_back({sm.beta[o][n], 1.0});
            c.sense = milp::ConstraintSense::less_equal;
            c.rhs = 1.0;
            c.name = "no_reopen[" + std::to_string(o) + "," + std::to_string(k) + "]";
            m.add_linear_constraint(std::move(c));
        }
        for (int k = 0; k + 1 < K; ++k) {
            milp::LinearConstraint c;  // open stays open until closed
            c.terms.push_back({sm.alpha[o][k + 1], 1.0});
            c.terms.push_back({sm.alpha[o][k], -1.0});
            c.terms.push_back({sm.beta[o][k], 1.0});
            c.sense = milp::ConstraintSense::greater_equal;
            c.rhs = 0.0;
            c.name = "stay_open[" + std::to_string(o) + "," + std::to_string(k) + "]";
            m.add_linear_constraint(std::move(c));
        }
    }

    if (mode == SequencingMode::revisit) {
        // Gamma totals, their linearisation, and the shared rack inventory.
        for (const auto& [key, gv] : sm.big_gamma) {
            const auto& [i, o, e] = key;
            milp::LinearConstraint c;
            c.terms.push_back({gv, 1.0});
            for (int k = 0; k < K; ++k) c.terms.push_back({sm.lambda.at({i, o, k, e}), -1.0});
            c.sense = milp::ConstraintSense::equal;
            c.rhs = 0.0;
            c.name = "rack_total[" + std::to_string(i) + "," + std::to_string(o) + "," +
                     std::to_string(e) + "]";
            m.add_linear_constraint(std::move(c));
        }
        for (const auto& [key, lv] : sm.lambda) {
            const auto& [i, o, k, e] = key;
            const double q_cap = std::min(si.demand[o][i], si.supply[rack_of_slot(e)][i]);
            {
                milp::LinearConstraint c;  // zero unless the slot holds this rack
                c.terms.push_back({lv, 1.0});
                c.terms.push_back({sm.z[k][e], -q_cap});
                c.sense = milp::ConstraintSense::less_equal;
                c.rhs = 0.0;
                c.name = "lin_gate[" + std::to_string(i) + "," + std::to_string(o) + "," +
                         std::to_string(k) + "," + std::to_string(e) + "]";
                m.add_linear_constraint(std::move(c));
            }
            auto gamma_it = sm.gamma.find({i, o, k});
            if (gamma_it == sm.gamma.end()) continue;
            {
                milp::LinearConstraint c;  // lambda <= gamma + q_cap (1 - z)
                c.terms.push_back({lv, 1.0});
                c.terms.push_back({gamma_it->second, -1.0});
                c.terms.push_back({sm.z[k][e], q_cap});
                c.sense = milp::ConstraintSense::less_equal;
                c.rhs = q_cap;
                c.name = "lin_upper[" + std::to_string(i) + "," + std::to_string(o) + "," +
                         std::to_string(k) + "," + std::to_string(e) + "]";
                m.add_linear_constraint(std::move(c));
            }
            {
                milp::LinearConstraint c;  // gamma - q_cap (1 - z) <= lambda
                c.terms.push_back({gamma_it->second, 1.0});
                c.terms.push_back({lv, -1.0});
                c.terms.push_back({sm.z[k][e], q_cap});
                c.sense = milp::ConstraintSense::less_equal;
                c.rhs = q_cap;
                c.name = "lin_lower[" + std::to_string(i) + "," + std::to_string(o) + "," +
                         std::to_string(k) + "," + std::to_string(e) + "]";
                m.add_linear_constraint(std::move(c));
            }
        }
        for (int i = 0; i < NP; ++i) {
            for (int r = 0; r < L; ++r) {
                if (si.supply[r][i] < 1) continue;
                milp::LinearConstraint c;
                for (int m_copy = 0; m_copy <= si.max_revisits; ++m_copy) {
                    const int e = r + m_copy * L;
                    for (int o = 0; o < O; ++o) {
                        auto it = sm.big_gamma.find({i, o, e});
                        if (it != sm.big_gamma.end()) c.terms.push_back({it->second, 1.0});
                    }
                }
                if (c.terms.empty()) continue;
                c.sense = milp::ConstraintSense::less_equal;
                c.rhs = si.supply[r][i];
                c.name = "rack_inventory[" + std::to_string(i) + "," + std::to_string(r) + "]";
                m.add_linear_constraint(std::move(c));
            }
        }
    }

    // Feasibility problem: constant objective.
    m.set_objective({{}, milp::ObjectiveSense::minimize});
    return sm;
}

}  // namespace rackopt::seq
