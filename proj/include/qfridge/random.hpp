#pragma once

// Portable seeded draws. std::mt19937_64's output sequence is fixed by the
// standard, but the <random> distributions are not, so the mappings to
// integers and reals are done here:
//
//   below(n)   rejection sampling on the raw 64-bit output, then r % n
//   unit()     ((r >> 11) + 1) * 2^-53, a real in (0, 1]
//
// Identical seeds give identical sequences on every platform.

#include <cstdint>
#include <random>

namespace qfridge {

class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;
        std::uint64_t r = engine_();
        while (r < threshold) r = engine_();
        return r % n;
    }

    double unit() { return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace qfridge
