#pragma once

// Self-check suite run by `qfridge verify`.

#include "qfridge/model.hpp"
#include "qfridge/random.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qfridge {

struct VerifyOptions {
    std::uint64_t seed = 0;
    double tol = 1e-10;
    unsigned threads = 0;
    bool include_d2_sweep = true;  // the 40320-row sweep dominates the runtime
    bool flip_cold_sign = false;   // mutation seam: negate every Q_c the suite reads
};

struct GroupResult {
    std::string name;
    bool passed = true;
    std::size_t checks = 0;
    std::string first_failure;  // empty when passed
    double seconds = 0.0;
};

struct VerifyReport {
    std::vector<GroupResult> groups;
    bool all_passed() const noexcept;
};

/// Runs every invariant group in a fixed order.
VerifyReport run_verify(const VerifyOptions& options);

/// Random spec with β_c > β_h and β_h ω_h > β_c ω_c (so a_c > a_h).
MachineSpec random_cooling_spec(SeededRng& rng);

}  // namespace qfridge
