#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rackopt/allocation/build.hpp"
#include "rackopt/allocation/solve.hpp"

namespace rackopt::heur {

struct HeuristicParams {
    double total_time_limit_s = 300.0;
    int tau = 1;                // PIO block size
    std::uint64_t seed = 0;     // forwarded to the solver params
    milp::SolveParams solver;   // tolerances; time limits are set per stage
};

struct StageRecord {
    int stage = 0;  // 1-based; the final improvement solve is the last stage
    std::string label;
    milp::SolveStatus status = milp::SolveStatus::unknown_time_limit;
    std::optional<double> objective;
    double time_s = 0.0;
    std::vector<int> chosen_orders;  // parent indices (SPB stages)
    std::vector<int> chosen_racks;   // parent indices

    friend bool operator==(const StageRecord&, const StageRecord&) = default;
};

struct HeuristicResult {
    alloc::AllocationResult result;
    std::vector<StageRecord> trace;
};

namespace detail {

class StageClock {
public:
    StageClock(double total_budget_s, int stages)
        : start_(std::chrono::steady_clock::now()), budget_(total_budget_s), stages_(stages) {}

    double elapsed() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

    /// Even split of what remains over the remaining stages; unused time from
    /// earlier stages rolls forward automatically.
    double stage_budget(int stages_done) const {
        const double remaining = std::max(0.01, budget_ - elapsed());
        const int left = std::max(1, stages_ - stages_done);
        return remaining / left;
    }

private:
    std::chrono::steady_clock::time_point start_;
    double budget_;
    int stages_;
};

/// Heuristics run the plain single-rack capacity formulation; reject option
/// combinations they do not model.
inline void require_heuristic_options(const alloc::AllocationOptions& opt) {
    if (opt.shared_racks || opt.objective != alloc::ObjectiveMode::rack_count ||
        opt.workload != alloc::WorkloadMode::fixed_capacities || opt.preassigned ||
        !opt.pins.empty()) {
        throw std::invalid_argument(
            "heuristics support only the single-rack, fixed-capacity rack-count formulation");
    }
}

/// Pickers ordered by decreasing capacity, ties by original index.
inline std::vector<int> pickers_by_capacity(const Instance& inst) {
    std::vector<int> order(inst.num_pickers());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return inst.pickers[a].capacity > inst.pickers[b].capacity;
    });
    return order;
}

}  // namespace detail

}  // namespace rackopt::heur
