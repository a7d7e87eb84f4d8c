#pragma once

#include <string>
#include <vector>

namespace rackopt {

/// Outcome of an independent feasibility check. Violations are data, not
/// errors: an empty list means the checked object satisfies every family of
/// constraints the verifier knows about.
struct VerifyReport {
    struct Violation {
        std::string family;
        std::string detail;
    };

    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }

    void add(std::string family, std::string detail) {
        violations.push_back({std::move(family), std::move(detail)});
    }

    std::string to_string() const {
        if (ok()) return "ok";
        std::string s;
        for (const auto& v : violations) {
            if (!s.empty()) s += "\n";
            s += v.family + ": " + v.detail;
        }
        return s;
    }
};

}  // namespace rackopt
