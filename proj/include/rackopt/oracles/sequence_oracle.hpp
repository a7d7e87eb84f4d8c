#pragma once

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <vector>

#include "rackopt/sequencing/instance.hpp"

namespace rackopt::oracle {

namespace detail {

/// Transportation feasibility for one product: orders (with demands) draw
/// from the positions inside their windows; a position passes its flow to
/// its rack, capped by the rack's stock of the product. Sizes here are a
/// handful of nodes, so plain augmenting paths suffice.
class TinyFlow {
public:
    // Node layout: 0 = source, 1..A = orders, A+1..A+K = positions,
    // A+K+1..A+K+L = racks, A+K+L+1 = sink.
    TinyFlow(int orders, int positions, int racks)
        : orders_(orders), positions_(positions), racks_(racks),
          nodes_(orders + positions + racks + 2), cap_(nodes_, std::vector<int>(nodes_, 0)) {}

    void set_demand(int order, int units) { cap_[0][1 + order] = units; }
    void allow(int order, int position) { cap_[1 + order][1 + orders_ + position] = 1000; }
    void set_position_cap(int position, int rack, int units) {
        cap_[1 + orders_ + position][1 + orders_ + positions_ + rack] = units;
    }
    void set_rack_cap(int rack, int units) {
        cap_[1 + orders_ + positions_ + rack][nodes_ - 1] = units;
    }

    int max_flow() {
        int total = 0;
        std::vector<int> parent(nodes_);
        for (;;) {
            std::fill(parent.begin(), parent.end(), -1);
            parent[0] = 0;
            std::vector<int> queue = {0};
            for (size_t h = 0; h < queue.size() && parent[nodes_ - 1] < 0; ++h) {
                const int u = queue[h];
                for (int v = 0; v < nodes_; ++v) {
                    if (parent[v] < 0 && cap_[u][v] > 0) {
                        parent[v] = u;
                        queue.push_back(v);
                    }
                }
            }
            if (parent[nodes_ - 1] < 0) return total;
            int push = 1 << 30;
            for (int v = nodes_ - 1; v != 0; v = parent[v]) push = std::min(push, cap_[parent[v]][v]);
            for (int v = nodes_ - 1; v != 0; v = parent[v]) {
                cap_[parent[v]][v] -= push;
                cap_[v][parent[v]] += push;
            }
            total += push;
        }
    }

private:
    int orders_, positions_, racks_, nodes_;
    std::vector<std::vector<int>> cap_;
};

}  // namespace detail

/// Exhaustive feasibility decision for one picker's rack sequencing.
///
/// Enumerates the distinct rack sequences (copies of a rack are
/// interchangeable, and fully identical racks are deduplicated by a canonical
/// first-appearance order), then searches over per-order pick windows with
/// carry-count pruning; a window combination is accepted when, for every
/// product, a transportation flow can route each order's demand through the
/// positions of its window without exceeding position or rack stocks.
/// Windows mirror the model semantics: an order opens at its first pick and
/// closes at its last, single-unit orders take a single position, and the
/// carried-order count at a position boundary is limited by B-1 (by 1 in
/// single-bin mode, which also forbids an interior one-shot order while
/// another order spans that position).
///
/// Refuses instances beyond 5 rack positions, 5 orders, or per-entry demand
/// above 2.
inline bool brute_force_sequence_feasible(const seq::SequencingInstance& si,
                                          seq::SequencingMode mode) {
    using seq::SequencingMode;
    const int L = si.num_racks();
    const int O = si.num_orders();
    const int NP = si.num_products();
    const int copies = mode == SequencingMode::revisit ? si.max_revisits + 1 : 1;
    const int K = copies * L;

    if (K > 5 || O > 5) {
        throw std::invalid_argument("brute_force_sequence_feasible: instance beyond enumeration bounds");
    }
    for (int o = 0; o < O; ++o) {
        for (int i = 0; i < NP; ++i) {
            if (si.demand[o][i] > 2) {
                throw std::invalid_argument("brute_force_sequence_feasible: demand entry above 2");
            }
        }
    }
    if (O == 0) return true;

    const int carry_limit = mode == SequencingMode::single_bin ? 1 : si.bins - 1;
    if (carry_limit < 0) return false;  // B = 0 has no bins at all

    std::vector<int> order_units(O, 0);
    for (int o = 0; o < O; ++o)
        for (int i = 0; i < NP; ++i) order_units[o] += si.demand[o][i];

    // Identical racks (equal supply vectors) are interchangeable; demand a
    // canonical first-appearance order for them.
    std::vector<int> rack_class(L, -1);
    {
        int next = 0;
        for (int r = 0; r < L; ++r) {
            if (rack_class[r] >= 0) continue;
            rack_class[r] = next;
            for (int r2 = r + 1; r2 < L; ++r2) {
                if (rack_class[r2] < 0 && si.supply[r2] == si.supply[r]) rack_class[r2] = next;
            }
            ++next;
        }
    }

    std::vector<int> base;
    for (int r = 0; r < L; ++r)
        for (int c = 0; c < copies; ++c) base.push_back(r);
    std::sort(base.begin(), base.end());

    std::vector<int> open_at(O), close_at(O);
    std::vector<int> carry(K, 0);

    auto flows_ok = [&](const std::vector<int>& seq_racks, int placed) {
        for (int i = 0; i < NP; ++i) {
            int needed = 0;
            detail::TinyFlow flow(placed, K, L);
            for (int o = 0; o < placed; ++o) {
                if (si.demand[o][i] < 1) continue;
                flow.set_demand(o, si.demand[o][i]);
                needed += si.demand[o][i];
                for (int k = open_at[o]; k <= close_at[o]; ++k) flow.allow(o, k);
            }
            if (needed == 0) continue;
            for (int k = 0; k < K; ++k) flow.set_position_cap(k, seq_racks[k], si.supply[seq_racks[k]][i]);
            for (int r = 0; r < L; ++r) flow.set_rack_cap(r, si.supply[r][i]);
            if (flow.max_flow() < needed) return false;
        }
        return true;
    };

    // Window DFS over orders for one fixed rack sequence.
    std::function<bool(const std::vector<int>&, int)> place =
        [&](const std::vector<int>& seq_racks, int o) -> bool {
        if (o == O) return true;
        for (int a = 0; a < K; ++a) {
            const int b_max = order_units[o] == 1 ? a : K - 1;
            for (int b = a; b <= b_max; ++b) {
                // Window endpoints must offer something the order needs, and
                // the window alone must reach the order's demand per product.
                bool endpoints_ok = false;
                for (int i = 0; i < NP && !endpoints_ok; ++i)
                    endpoints_ok = si.demand[o][i] > 0 && si.supply[seq_racks[a]][i] > 0;
                if (!endpoints_ok) continue;
                if (b != a) {
                    bool end_ok = false;
                    for (int i = 0; i < NP && !end_ok; ++i)
                        end_ok = si.demand[o][i] > 0 && si.supply[seq_racks[b]][i] > 0;
                    if (!end_ok) continue;
                }
                bool reachable = true;
                for (int i = 0; i < NP && reachable; ++i) {
                    if (si.demand[o][i] < 1) continue;
                    std::vector<bool> seen(L, false);
                    long cover = 0;
                    for (int k = a; k <= b; ++k) {
                        const int r = seq_racks[k];
                        if (!seen[r]) {
                            seen[r] = true;
                            cover += si.supply[r][i];
                        }
                    }
                    reachable = cover >= si.demand[o][i];
                }
                if (!reachable) continue;

                bool carry_ok = true;
                for (int k = a; k < b && carry_ok; ++k) carry_ok = carry[k] + 1 <= carry_limit;
                if (!carry_ok) continue;

                if (mode == SequencingMode::single_bin) {
                    bool clash = false;
                    for (int d = 0; d < o && !clash; ++d) {
                        // Either of the pair may be the interior one-shot.
                        const bool o_shot = order_units[o] == 1 && a == b && a > 0 && a < K - 1;
                        const bool d_shot = open_at[d] == close_at[d] && si.is_single_unit[d] &&
                                            open_at[d] > 0 && open_at[d] < K - 1;
                        if (o_shot && !si.is_single_unit[d]) {
                            // d spans position a entirely?
                            clash = open_at[d] <= a - 1 && close_at[d] >= a + 1;
                        }
                        if (!clash && d_shot && order_units[o] > 1) {
                            const int kk = open_at[d];
                            clash = a <= kk - 1 && b >= kk + 1;
                        }
                    }
                    if (clash) continue;
                }

                open_at[o] = a;
                close_at[o] = b;
                for (int k = a; k < b; ++k) ++carry[k];
                const bool ok = flows_ok(seq_racks, o + 1) && place(seq_racks, o + 1);
                for (int k = a; k < b; ++k) --carry[k];
                if (ok) return true;
            }
        }
        return false;
    };

    std::vector<int> perm = base;
    do {
        // Canonical order among fully identical racks.
        std::vector<int> first_seen;
        bool canonical = true;
        std::vector<int> best_first(L, -1);
        for (int k = 0; k < K && canonical; ++k) {
            const int r = perm[k];
            if (best_first[r] < 0) {
                best_first[r] = k;
                for (int r2 = 0; r2 < r; ++r2) {
                    if (rack_class[r2] == rack_class[r] && best_first[r2] < 0) canonical = false;
                }
            }
        }
        (void)first_seen;
        if (!canonical) continue;
        if (place(perm, 0)) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));

    return false;
}

}  // namespace rackopt::oracle
