#pragma once

#include <vector>

namespace rackopt::seq {

/// A rack sequence with its picking detail. Indices are local to the
/// sequencing instance. `rack_order` lists the rack presented at each
/// position; in revisit mode a rack id recurs once per visit. Orders occupy a
/// bin from their open position through their close position.
struct SequenceSolution {
    struct Pick {
        int product = 0;
        int order = 0;
        int position = 0;
        int units = 0;

        friend bool operator==(const Pick&, const Pick&) = default;
    };
    struct Event {
        int order = 0;
        int position = 0;

        friend bool operator==(const Event&, const Event&) = default;
    };

    std::vector<int> rack_order;
    std::vector<Pick> picks;
    std::vector<Event> opens;
    std::vector<Event> closes;

    /// Pool-built sequences may present a rack any number of times; the
    /// position count then carries no (M+1)*L structure.
    bool unbounded_revisits = false;

    friend bool operator==(const SequenceSolution&, const SequenceSolution&) = default;
};

}  // namespace rackopt::seq
