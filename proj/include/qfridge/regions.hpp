#pragma once

// COP-versus-d curves and cooling-region maps.
//
// A region point is described by two ratios only; the simulated machine uses
// β_h = ω_h = 1, β_c = beta_ratio and ω_c = omega_ratio.

#include "qfridge/model.hpp"
#include "qfridge/thermo.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace qfridge {

/// ω_c β_c / (ω_h β_h): the smallest node ratio d/n′ that still cools.
double cooling_ratio_threshold(const MachineSpec& spec) noexcept;

/// floor(β_h ω_h / (β_c ω_c)), the largest catalyst dimension pi_1 can use.
std::size_t admissible_d_max(const MachineSpec& spec);

struct CopPoint {
    std::size_t d;
    double cop;                           // ω_c / (ω_h/d − ω_c)
    double normalized_cop;                // cop / Carnot
    std::optional<double> cop_simulated;  // pi_1(d) with its stationary catalyst
    Mode mode;                            // simulated mode; Idle at the zero-power point
};

/// d = 1 … min(d_max, admissible_d_max). Throws std::domain_error unless
/// β_c > β_h and β_h ω_h > β_c ω_c.
std::vector<CopPoint> cop_curve(const MachineSpec& spec, std::size_t d_max, double tol = 1e-10);

/// β_h ω_h ≥ β_c ω_c and β_c > β_h.
bool noncat_coolable(const MachineSpec& spec) noexcept;

/// β_c > β_h and d/n′ ≥ ω_c β_c/(ω_h β_h). Throws std::invalid_argument
/// unless 1 ≤ n_prime ≤ d.
bool cat_coolable(const MachineSpec& spec, std::size_t d, std::size_t n_prime);

/// ω_c / (d ω_h / n′ − ω_c), the pi_2(d − n′, n′) refrigerator COP.
double extended_cop(const MachineSpec& spec, std::size_t d, std::size_t n_prime);

struct Witness {
    std::size_t d;
    std::size_t n_prime;
    bool operator==(const Witness&) const = default;
};

struct RegionPoint {
    double beta_ratio;
    double omega_ratio;
    double cap;  // largest d/n′ allowed
    bool coolable;
    std::optional<Witness> witness;
    std::optional<double> cop_formula;
    std::optional<double> cop_simulated;  // present when the simulation refrigerates
    std::optional<Mode> simulated_mode;   // present when a witness was simulated
    double cop_slack = 0.0;               // rounding bound on cop_simulated
};

struct RegionOptions {
    std::size_t max_d = 64;
    bool simulate = true;
    double tol = 1e-10;
    unsigned threads = 0;  // 0 = hardware concurrency
};

/// One point per (beta_ratio, omega_ratio, cap), beta outermost and cap
/// innermost. The witness is the lexicographically smallest (d, n′) with
/// d ≤ max_d and threshold ≤ d/n′ ≤ cap; it can be absent for a coolable
/// point when no such pair exists under max_d. Throws std::invalid_argument
/// on empty grids or non-positive, non-finite values.
std::vector<RegionPoint> scan_region(std::span<const double> beta_ratios,
                                     std::span<const double> omega_ratios,
                                     std::span<const double> caps, RegionOptions options = {});

/// Smallest-pair witness for one threshold and cap.
std::optional<Witness> find_witness(double threshold, double cap, std::size_t max_d);

/// n evenly spaced values from lo to hi inclusive (n = 1 gives {lo}).
std::vector<double> linear_grid(double lo, double hi, std::size_t n);

}  // namespace qfridge
