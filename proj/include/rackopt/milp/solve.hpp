#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <queue>
#include <stdexcept>
#include <vector>

#include "rackopt/milp/model.hpp"
#include "rackopt/milp/simplex.hpp"

namespace rackopt::milp {

struct SolveParams {
    double time_limit_s = 300.0;
    double integrality_tol = 1e-6;
    double feasibility_tol = 1e-6;
    double rel_gap_tol = 1e-9;
    std::uint64_t seed = 0;  // accepted for interface stability; the search is deterministic
    std::optional<std::int64_t> node_limit;
};

enum class SolveStatus {
    optimal,
    feasible_time_limit,
    proven_infeasible,
    unbounded,
    unknown_time_limit,
};

inline const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::optimal: return "optimal";
        case SolveStatus::feasible_time_limit: return "feasible_time_limit";
        case SolveStatus::proven_infeasible: return "proven_infeasible";
        case SolveStatus::unbounded: return "unbounded";
        case SolveStatus::unknown_time_limit: return "unknown_time_limit";
    }
    return "?";
}

struct Incumbent {
    std::vector<double> values;  // indexed by VarRef
    double objective = 0.0;
};

struct SolveOutcome {
    SolveStatus status = SolveStatus::unknown_time_limit;
    std::optional<Incumbent> incumbent;     // UB when present
    std::optional<double> best_bound;       // LB
    std::optional<double> root_bound;       // FLB, the root LP relaxation value
    std::int64_t nodes = 0;                 // NS, every node whose LP was solved
    double total_time_s = 0.0;              // T(s)
    double incumbent_time_s = 0.0;          // B(s), when the final best was first found
};

namespace detail {

struct BnbNode {
    std::vector<double> lower, upper;
    double bound = 0.0;  // parent LP objective, minimize orientation
    std::int64_t seq = 0;
};

struct NodeOrder {
    bool operator()(const BnbNode& a, const BnbNode& b) const {
        if (a.bound != b.bound) return a.bound > b.bound;  // min-heap on bound
        return a.seq > b.seq;
    }
};

inline LpCore build_core(const MilpModel& model, bool* trivially_infeasible) {
    LpCore core;
    core.num_structural = model.num_variables();
    core.cols.assign(core.num_structural, {});
    core.cost.assign(core.num_structural, 0.0);

    const double dir = model.objective().sense == ObjectiveSense::minimize ? 1.0 : -1.0;
    for (const auto& t : model.objective().terms) core.cost[t.var.index] = dir * t.coef;

    *trivially_infeasible = false;
    for (const auto& c : model.constraints()) {
        if (c.terms.empty()) {
            // Constant row: check it outright instead of handing it to the LP.
            const bool ok = (c.sense == ConstraintSense::less_equal && 0.0 <= c.rhs) ||
                            (c.sense == ConstraintSense::equal && c.rhs == 0.0) ||
                            (c.sense == ConstraintSense::greater_equal && 0.0 >= c.rhs);
            if (!ok) *trivially_infeasible = true;
            continue;
        }
        const int row = core.num_rows++;
        core.sense.push_back(c.sense);
        core.rhs.push_back(c.rhs);
        for (const auto& t : c.terms) core.cols[t.var.index].push_back({row, t.coef});
    }
    return core;
}

inline bool integral_objective(const MilpModel& model) {
    for (const auto& t : model.objective().terms) {
        if (t.coef == 0.0) continue;
        if (model.variable(t.var).kind == VarKind::continuous) return false;
        if (std::abs(t.coef - std::round(t.coef)) > 1e-9) return false;
    }
    return true;
}

}  // namespace detail

enum class RelaxationStatus { optimal, infeasible, unbounded };

struct RelaxationBound {
    RelaxationStatus status = RelaxationStatus::infeasible;
    double value = 0.0;  // in the model's objective sense, valid when optimal
};

/// FLB: optimal value of the LP relaxation (all integrality dropped).
inline RelaxationBound lp_relaxation_bound(const MilpModel& model) {
    bool trivially_infeasible = false;
    detail::LpCore core = detail::build_core(model, &trivially_infeasible);
    if (trivially_infeasible) return {RelaxationStatus::infeasible, 0.0};

    std::vector<double> lb(core.num_structural), ub(core.num_structural);
    for (int j = 0; j < core.num_structural; ++j) {
        lb[j] = model.variables()[j].lower;
        ub[j] = model.variables()[j].upper;
    }
    detail::SimplexSolver simplex(core);
    detail::LpSolution sol = simplex.solve(lb, ub);
    const double dir = model.objective().sense == ObjectiveSense::minimize ? 1.0 : -1.0;
    switch (sol.status) {
        case detail::LpStatus::optimal: return {RelaxationStatus::optimal, dir * sol.objective};
        case detail::LpStatus::infeasible: return {RelaxationStatus::infeasible, 0.0};
        case detail::LpStatus::unbounded: return {RelaxationStatus::unbounded, 0.0};
        case detail::LpStatus::aborted: break;
    }
    throw std::runtime_error("lp_relaxation_bound: simplex did not converge");
}

/// Deterministic LP-based branch and bound.
///
/// Node selection is best-bound with depth-first plunging into the
/// down-branch (floor) child. Branching picks the fractional integer variable
/// with the highest branch_priority, breaking ties by most-fractional value
/// and then lowest index. Nodes are counted whenever their LP is solved, the
/// root included. The wall-clock limit is tested between node LP solves.
inline SolveOutcome solve(const MilpModel& model, const SolveParams& params) {
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(clock::now() - t0).count(); };

    SolveOutcome out;
    const bool maximize = model.objective().sense == ObjectiveSense::maximize;
    const double dir = maximize ? -1.0 : 1.0;  // internal orientation is minimize
    auto to_external = [&](double v) { return dir * v; };

    bool trivially_infeasible = false;
    detail::LpCore core = detail::build_core(model, &trivially_infeasible);
    if (trivially_infeasible) {
        out.status = SolveStatus::proven_infeasible;
        out.total_time_s = elapsed();
        return out;
    }

    const int n = core.num_structural;
    std::vector<int> int_vars;
    for (int j = 0; j < n; ++j) {
        if (model.variables()[j].kind != VarKind::continuous) int_vars.push_back(j);
    }
    const bool lift_bounds = detail::integral_objective(model);
    auto lift = [&](double b) {
        if (!lift_bounds) return b;
        const double r = std::round(b);
        return std::abs(b - r) <= params.feasibility_tol ? r : std::ceil(b);
    };

    detail::BnbNode root;
    root.lower.resize(n);
    root.upper.resize(n);
    for (int j = 0; j < n; ++j) {
        root.lower[j] = model.variables()[j].lower;
        root.upper[j] = model.variables()[j].upper;
    }
    root.bound = -kInfinity;

    detail::SimplexSolver simplex(core);
    std::priority_queue<detail::BnbNode, std::vector<detail::BnbNode>, detail::NodeOrder> open;
    std::optional<detail::BnbNode> current = std::move(root);
    std::int64_t seq = 0;

    std::optional<Incumbent> incumbent;
    double incumbent_obj = kInfinity;  // internal minimize orientation
    bool hit_limit = false;

    auto cutoff = [&](double bound) {
        if (!incumbent) return false;
        const double eps = params.rel_gap_tol * std::max(1.0, std::abs(incumbent_obj));
        return lift(bound) >= incumbent_obj - eps;
    };

    while (true) {
        if (!current) {
            bool found = false;
            while (!open.empty()) {
                detail::BnbNode top = open.top();
                open.pop();
                if (cutoff(top.bound)) continue;  // stale against the current incumbent
                current = std::move(top);
                found = true;
                break;
            }
            if (!found) break;
        }

        if (elapsed() >= params.time_limit_s ||
            (params.node_limit && out.nodes >= *params.node_limit)) {
            hit_limit = true;
            break;
        }

        detail::BnbNode node = std::move(*current);
        current.reset();

        detail::LpSolution lp = simplex.solve(node.lower, node.upper);
        ++out.nodes;

        if (lp.status == detail::LpStatus::aborted) {
            throw std::runtime_error("milp::solve: simplex did not converge");
        }
        if (out.nodes == 1) {
            if (lp.status == detail::LpStatus::infeasible) {
                out.status = SolveStatus::proven_infeasible;
                out.total_time_s = elapsed();
                return out;
            }
            if (lp.status == detail::LpStatus::unbounded) {
                out.status = SolveStatus::unbounded;
                out.total_time_s = elapsed();
                return out;
            }
            out.root_bound = to_external(lp.objective);
        }
        if (lp.status == detail::LpStatus::infeasible) continue;
        if (lp.status == detail::LpStatus::unbounded) {
            // Cannot happen below a bounded root; treat as a numerical fault.
            throw std::runtime_error("milp::solve: unbounded node below bounded root");
        }

        const double bound = lp.objective;
        if (cutoff(bound)) continue;

        // Branching variable: highest priority, then most fractional, then
        // lowest index.
        int branch = -1;
        double branch_val = 0.0;
        int best_prio = 0;
        double best_frac = 0.0;
        for (int j : int_vars) {
            const double v = lp.x[j];
            const double frac = v - std::floor(v);
            const double dist = std::min(frac, 1.0 - frac);
            if (dist <= params.integrality_tol) continue;
            const int prio = model.variables()[j].branch_priority;
            if (branch < 0 || prio > best_prio ||
                (prio == best_prio && dist > best_frac + 1e-12)) {
                branch = j;
                branch_val = v;
                best_prio = prio;
                best_frac = dist;
            }
        }

        if (branch < 0) {
            // Integral solution: snap the integer variables and recompute the
            // objective from the snapped vector so integral data yields exact
            // objective values.
            std::vector<double> vals = lp.x;
            for (int j : int_vars) vals[j] = std::round(vals[j]);
            double snapped = 0.0;
            for (int j = 0; j < n; ++j) snapped += core.cost[j] * vals[j];
            if (snapped < incumbent_obj - 1e-12) {
                incumbent_obj = snapped;
                incumbent = Incumbent{std::move(vals), to_external(snapped)};
                out.incumbent_time_s = elapsed();
            }
            continue;
        }

        const double down = std::floor(branch_val);
        const double up = down + 1.0;

        detail::BnbNode down_child;
        down_child.lower = node.lower;
        down_child.upper = node.upper;
        down_child.upper[branch] = down;
        down_child.bound = bound;
        down_child.seq = ++seq;

        detail::BnbNode up_child;
        up_child.lower = std::move(node.lower);
        up_child.upper = std::move(node.upper);
        up_child.lower[branch] = up;
        up_child.bound = bound;
        up_child.seq = ++seq;

        const bool down_ok = down_child.lower[branch] <= down_child.upper[branch];
        const bool up_ok = up_child.lower[branch] <= up_child.upper[branch];
        if (up_ok && down_ok) {
            open.push(std::move(up_child));
            current = std::move(down_child);  // plunge into the floor child
        } else if (down_ok) {
            current = std::move(down_child);
        } else if (up_ok) {
            current = std::move(up_child);
        }
    }

    out.total_time_s = elapsed();
    out.incumbent = incumbent;

    if (!hit_limit) {
        if (incumbent) {
            out.status = SolveStatus::optimal;
            out.best_bound = incumbent->objective;  // exhausted tree: LB = UB
        } else {
            out.status = SolveStatus::proven_infeasible;
        }
        return out;
    }

    // Truncated search: the surviving bound is the min over open nodes.
    double open_bound = kInfinity;
    if (current) open_bound = std::min(open_bound, current->bound);
    while (!open.empty()) {
        open_bound = std::min(open_bound, open.top().bound);
        open.pop();
    }
    if (incumbent) {
        out.status = SolveStatus::feasible_time_limit;
        out.best_bound = to_external(std::min(open_bound, incumbent_obj));
    } else {
        out.status = SolveStatus::unknown_time_limit;
        if (open_bound != kInfinity) out.best_bound = to_external(open_bound);
    }
    return out;
}

}  // namespace rackopt::milp
