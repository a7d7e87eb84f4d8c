#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>

namespace rackopt::gen {

/// Seeded random stream used by the instance generator.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard, and all sampling is done with explicit rejection so the stream
/// of draws for a given seed never depends on the standard library's
/// distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, n), n >= 1. Rejection sampling on the top of
    /// the 64-bit range keeps the draw exactly uniform.
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("Rng::below: n must be >= 1");
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return v % n;
    }

    int below_int(int n) { return static_cast<int>(below(static_cast<std::uint64_t>(n))); }

    /// Uniform double in [0, 1) with 53-bit resolution.
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool coin() { return (engine_() & 1ull) != 0; }

private:
    std::mt19937_64 engine_;
};

}  // namespace rackopt::gen
