#pragma once

#include <cstdint>
#include <random>

namespace srcp {

// Deterministic random source used everywhere the simulator or the workload
// generator needs randomness.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. The standard distributions are not, so all conversions to
// doubles and bounded integers are done here with fixed arithmetic.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53 bits of precision.
    double next_unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform in [0, bound). bound must be nonzero. Rejection sampling keeps
    // the result unbiased.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % bound;
    }

    bool one_in(std::uint64_t n) { return next_below(n) == 0; }

private:
    std::mt19937_64 engine_;
};

}  // namespace srcp
