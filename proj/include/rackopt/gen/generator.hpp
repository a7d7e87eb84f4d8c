#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "rackopt/core/instance.hpp"
#include "rackopt/gen/rng.hpp"

namespace rackopt::gen {

/// Parameters of the order/rack sampling scheme. Orders draw their item count
/// m from a geometric law truncated to {1..max_items}; racks stock
/// `rack_slots` distinct products with a uniform unit count per product.
struct GenParams {
    double mu = 1.0 / 1.73;
    int max_items = 4;
    int rack_slots = 25;
    std::vector<int> unit_choices = {1, 2, 3, 4};
    int rejection_cap = 1000;
};

/// P(m): probability that an order comprises m items,
/// mu*(1-mu)^(m-1) / sum_{n=1..max} mu*(1-mu)^(n-1).
inline double item_count_probability(double mu, int m, int max_items = 4) {
    if (m < 1 || m > max_items) return 0.0;
    double z = 0.0;
    for (int n = 1; n <= max_items; ++n) z += mu * std::pow(1.0 - mu, n - 1);
    return mu * std::pow(1.0 - mu, m - 1) / z;
}

namespace detail {

inline int draw_item_count(Rng& rng, double mu, int max_items) {
    const double u = rng.unit();
    double acc = 0.0;
    for (int m = 1; m < max_items; ++m) {
        acc += item_count_probability(mu, m, max_items);
        if (u < acc) return m;
    }
    return max_items;
}

// Two distinct products, uniformly; the shifted second draw avoids rejection.
inline std::pair<int, int> draw_two_products(Rng& rng, int num_products) {
    const int a = rng.below_int(num_products);
    int b = rng.below_int(num_products - 1);
    if (b >= a) ++b;
    return {a, b};
}

}  // namespace detail

/// Draws one order: m=1 is one unit of one product; m=2 is either two
/// products with one unit each or one product with two units (equal odds);
/// m=3 is one product with one unit plus another with two; m=4 is two
/// products with two units each. Products are drawn without replacement,
/// and for m=3 the first-drawn product is the single-unit one.
inline Order sample_order(Rng& rng, double mu, int num_products) {
    if (num_products < 2) {
        throw std::invalid_argument("sample_order: needs at least 2 products");
    }
    const int m = detail::draw_item_count(rng, mu, 4);
    Order order;
    switch (m) {
        case 1:
            order.lines.push_back({rng.below_int(num_products), 1});
            break;
        case 2:
            if (rng.coin()) {
                auto [a, b] = detail::draw_two_products(rng, num_products);
                order.lines.push_back({a, 1});
                order.lines.push_back({b, 1});
            } else {
                order.lines.push_back({rng.below_int(num_products), 2});
            }
            break;
        case 3: {
            auto [a, b] = detail::draw_two_products(rng, num_products);
            order.lines.push_back({a, 1});
            order.lines.push_back({b, 2});
            break;
        }
        default: {
            auto [a, b] = detail::draw_two_products(rng, num_products);
            order.lines.push_back({a, 2});
            order.lines.push_back({b, 2});
            break;
        }
    }
    std::sort(order.lines.begin(), order.lines.end(),
              [](const Line& x, const Line& y) { return x.product < y.product; });
    return order;
}

/// Draws one rack: min(rack_slots, N) distinct products, each stocked with a
/// unit count drawn uniformly from unit_choices.
inline Rack sample_rack(Rng& rng, int num_products, const GenParams& params) {
    const int slots = std::min(params.rack_slots, num_products);
    std::vector<int> pool(num_products);
    std::iota(pool.begin(), pool.end(), 0);
    Rack rack;
    for (int j = 0; j < slots; ++j) {
        const int pick = j + rng.below_int(num_products - j);
        std::swap(pool[j], pool[pick]);
        const int units = params.unit_choices[rng.below_int(static_cast<int>(params.unit_choices.size()))];
        rack.supply.push_back({pool[j], units});
    }
    std::sort(rack.supply.begin(), rack.supply.end(),
              [](const Line& x, const Line& y) { return x.product < y.product; });
    return rack;
}

/// Generates a full instance. A draw is rejected and redone whenever some
/// product's total demand exceeds the total supply across all racks; the
/// retry continues the same random stream, so the result is a deterministic
/// function of (seed, shape, params).
inline Instance generate_instance(std::uint64_t seed, int num_products, int num_orders,
                                  int num_racks, const std::vector<int>& capacities,
                                  const GenParams& params = GenParams()) {
    int total_capacity = 0;
    for (int c : capacities) total_capacity += c;
    if (total_capacity > num_orders) {
        throw std::invalid_argument("generate_instance: sum of capacities exceeds order count");
    }
    if (params.mu <= 0.0 || params.mu >= 1.0) {
        throw std::invalid_argument("generate_instance: mu must lie in (0,1)");
    }

    Rng rng(seed);
    for (int attempt = 0; attempt < params.rejection_cap; ++attempt) {
        Instance inst;
        inst.num_products = num_products;
        inst.name = "gen-s" + std::to_string(seed) + "-n" + std::to_string(num_products) + "-o" +
                    std::to_string(num_orders) + "-r" + std::to_string(num_racks) + "-p" +
                    std::to_string(capacities.size());
        for (int o = 0; o < num_orders; ++o) inst.orders.push_back(sample_order(rng, params.mu, num_products));
        for (int r = 0; r < num_racks; ++r) inst.racks.push_back(sample_rack(rng, num_products, params));
        for (int c : capacities) inst.pickers.push_back({c});

        std::vector<int> demand = inst.total_demand();
        std::vector<int> supply(num_products, 0);
        for (const auto& rack : inst.racks)
            for (const auto& l : rack.supply) supply[l.product] += l.units;

        bool ok = true;
        for (int i = 0; i < num_products; ++i) {
            if (demand[i] > supply[i]) { ok = false; break; }
        }
        if (ok) return inst;
    }
    throw std::runtime_error(
        "generate_instance: rejection cap reached; racks cannot cover the sampled demand, "
        "increase the number of racks or the cap");
}

}  // namespace rackopt::gen
