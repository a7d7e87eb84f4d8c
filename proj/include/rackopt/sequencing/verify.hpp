#pragma once

#include <map>
#include <string>
#include <vector>

#include "rackopt/core/verify_report.hpp"
#include "rackopt/sequencing/instance.hpp"
#include "rackopt/sequencing/solution.hpp"

namespace rackopt::seq {

/// Checks a sequence solution against the instance, independently of any
/// model: rack coverage of the positions, demand totals, per-position and
/// per-rack supply, open/close window structure, picks only inside windows,
/// and the bin-occupancy rule (the B = 1 case uses the single-bin semantics
/// with its open-and-close-here carve-out). Orders opened and closed at one
/// position ride the dedicated bin and do not count against B - 1.
inline VerifyReport verify_sequence(const SequencingInstance& si, const SequenceSolution& sol) {
    VerifyReport rep;
    const int O = si.num_orders();
    const int NP = si.num_products();
    const int L = si.num_racks();
    const int K = static_cast<int>(sol.rack_order.size());

    for (int k = 0; k < K; ++k) {
        if (sol.rack_order[k] < 0 || sol.rack_order[k] >= L) {
            rep.add("shape", "position " + std::to_string(k) + " names rack " +
                                 std::to_string(sol.rack_order[k]) + " out of range");
            return rep;
        }
    }
    if (!sol.unbounded_revisits) {
        const int expected = (si.max_revisits + 1) * L;
        if (K != expected) {
            rep.add("permutation", "expected " + std::to_string(expected) + " positions, got " +
                                       std::to_string(K));
        } else {
            std::vector<int> count(L, 0);
            for (int k = 0; k < K; ++k) ++count[sol.rack_order[k]];
            for (int r = 0; r < L; ++r) {
                if (count[r] != si.max_revisits + 1) {
                    rep.add("permutation", "rack " + std::to_string(r) + " appears " +
                                               std::to_string(count[r]) + " times, expected " +
                                               std::to_string(si.max_revisits + 1));
                }
            }
        }
    }

    // Windows from the open/close events.
    std::vector<int> open_pos(O, -1), close_pos(O, -1);
    for (const auto& e : sol.opens) {
        if (e.order < 0 || e.order >= O || e.position < 0 || e.position >= K) {
            rep.add("shape", "open event out of range");
            return rep;
        }
        if (open_pos[e.order] >= 0) {
            rep.add("window", "order " + std::to_string(e.order) + " opened more than once");
        }
        open_pos[e.order] = e.position;
    }
    for (const auto& e : sol.closes) {
        if (e.order < 0 || e.order >= O || e.position < 0 || e.position >= K) {
            rep.add("shape", "close event out of range");
            return rep;
        }
        if (close_pos[e.order] >= 0) {
            rep.add("close_once", "order " + std::to_string(e.order) + " closed more than once");
        }
        close_pos[e.order] = e.position;
    }
    for (int o = 0; o < O; ++o) {
        if (open_pos[o] < 0) rep.add("window", "order " + std::to_string(o) + " never opened");
        if (close_pos[o] < 0) rep.add("close_once", "order " + std::to_string(o) + " never closed");
        if (open_pos[o] >= 0 && close_pos[o] >= 0 && close_pos[o] < open_pos[o]) {
            rep.add("window", "order " + std::to_string(o) + " closes before it opens");
        }
    }

    // Aggregate picks; duplicates of the same (product, order, position) are
    // structural noise worth flagging.
    std::map<std::tuple<int, int, int>, int> gamma;
    for (const auto& p : sol.picks) {
        if (p.product < 0 || p.product >= NP || p.order < 0 || p.order >= O || p.position < 0 ||
            p.position >= K) {
            rep.add("shape", "pick entry out of range");
            return rep;
        }
        if (p.units < 1) {
            rep.add("shape", "pick entry with non-positive units");
            continue;
        }
        auto [it, fresh] = gamma.try_emplace({p.product, p.order, p.position}, p.units);
        if (!fresh) {
            rep.add("shape", "duplicate pick entry for product " + std::to_string(p.product) +
                                 ", order " + std::to_string(p.order) + ", position " +
                                 std::to_string(p.position));
            it->second += p.units;
        }
    }

    // Demand totals per (product, order).
    for (int o = 0; o < O; ++o) {
        for (int i = 0; i < NP; ++i) {
            int got = 0;
            for (int k = 0; k < K; ++k) {
                auto it = gamma.find({i, o, k});
                if (it != gamma.end()) got += it->second;
            }
            if (got != si.demand[o][i]) {
                rep.add("demand", "order " + std::to_string(o) + " product " + std::to_string(i) +
                                      ": picked " + std::to_string(got) + ", demand " +
                                      std::to_string(si.demand[o][i]));
            }
        }
    }

    // Supply: per position against the presented rack, and per original rack
    // across all of its presentations.
    std::vector<std::vector<long>> per_rack(L, std::vector<long>(NP, 0));
    for (int k = 0; k < K; ++k) {
        const int r = sol.rack_order[k];
        for (int i = 0; i < NP; ++i) {
            long at_slot = 0;
            for (int o = 0; o < O; ++o) {
                auto it = gamma.find({i, o, k});
                if (it != gamma.end()) at_slot += it->second;
            }
            per_rack[r][i] += at_slot;
            if (at_slot > si.supply[r][i]) {
                rep.add("slot_supply", "position " + std::to_string(k) + " (rack " +
                                           std::to_string(r) + ") product " + std::to_string(i) +
                                           ": picked " + std::to_string(at_slot) + " of " +
                                           std::to_string(si.supply[r][i]));
            }
        }
    }
    for (int r = 0; r < L; ++r) {
        for (int i = 0; i < NP; ++i) {
            if (per_rack[r][i] > si.supply[r][i]) {
                rep.add("rack_inventory", "rack " + std::to_string(r) + " product " +
                                              std::to_string(i) + ": picked " +
                                              std::to_string(per_rack[r][i]) + " of " +
                                              std::to_string(si.supply[r][i]) +
                                              " across presentations");
            }
        }
    }

    // Picks must fall inside the order's open window.
    for (const auto& [key, units] : gamma) {
        const auto& [i, o, k] = key;
        (void)i;
        (void)units;
        if (open_pos[o] < 0 || close_pos[o] < 0) continue;
        if (k < open_pos[o] || k > close_pos[o]) {
            rep.add("pick_window", "order " + std::to_string(o) + " picks at position " +
                                       std::to_string(k) + " outside its window [" +
                                       std::to_string(open_pos[o]) + "," +
                                       std::to_string(close_pos[o]) + "]");
        }
    }

    // Occupancy: orders carried across a position boundary hold a
    // non-dedicated bin; those opened and closed at one position do not.
    auto carried = [&](int k) {
        int c = 0;
        for (int o = 0; o < O; ++o) {
            if (open_pos[o] < 0 || close_pos[o] < 0) continue;
            if (open_pos[o] <= k && k < close_pos[o]) ++c;
        }
        return c;
    };
    if (si.bins >= 2) {
        for (int k = 0; k < K; ++k) {
            const int c = carried(k);
            if (c > si.bins - 1) {
                rep.add("bins", "position " + std::to_string(k) + " carries " + std::to_string(c) +
                                    " open orders, limit " + std::to_string(si.bins - 1));
            }
        }
    } else {
        for (int k = 0; k < K; ++k) {
            const int c = carried(k);
            if (c > 1) {
                rep.add("single_bin", "position " + std::to_string(k) + " carries " +
                                          std::to_string(c) + " open orders, limit 1");
            }
        }
        // Interior one-shot orders cannot share a position with an order that
        // spans it.
        for (int o = 0; o < O; ++o) {
            if (!si.is_single_unit[o]) continue;
            if (open_pos[o] < 0 || open_pos[o] != close_pos[o]) continue;
            const int k = open_pos[o];
            if (k == 0 || k == K - 1) continue;
            for (int d = 0; d < O; ++d) {
                if (d == o || si.is_single_unit[d]) continue;
                if (open_pos[d] < 0 || close_pos[d] < 0) continue;
                if (open_pos[d] <= k - 1 && close_pos[d] >= k + 1) {
                    rep.add("single_bin_block",
                            "one-shot order " + std::to_string(o) + " at position " +
                                std::to_string(k) + " collides with order " + std::to_string(d) +
                                " spanning it");
                }
            }
        }
    }

    return rep;
}

}  // namespace rackopt::seq
