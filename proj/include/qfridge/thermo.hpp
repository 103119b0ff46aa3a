#pragma once

// Energy accounting for one two-stroke cycle.
//
// Stroke one permutes the populations of the product state; stroke two
// rethermalizes both TLSs, so the state returns to build_joint_state(). Heats
// are read off the TLS Hamiltonians only:
//
//   Q_h = Σ e_hot  · (ρ' − ρ)     heat released into the hot bath
//   Q_c = Σ e_cold · (ρ − ρ')     heat drawn from the cold bath (> 0 cools)
//   W   = Q_h − Q_c

#include "qfridge/model.hpp"
#include "qfridge/permutations.hpp"

#include <optional>
#include <string_view>

namespace qfridge {

enum class Mode { Refrigerator, Engine, Accelerator, Idle, Forbidden };

std::string_view to_string(Mode mode) noexcept;

/// Heats within this of zero are treated as exactly zero when classifying.
inline constexpr double kTieTolerance = 1e-12;

struct EnergyFlows {
    double q_hot = 0.0;
    double q_cold = 0.0;
    double work = 0.0;
    std::optional<double> cop;  // q_cold / work; empty when |work| ≤ tie tolerance
    Mode mode = Mode::Idle;
};

/// Sign pattern of (Q_c, W) after snapping |x| ≤ tol to zero:
///   W = 0          Idle
///   W > 0, Q_c > 0 Refrigerator      W > 0, Q_c ≤ 0 Accelerator
///   W < 0, Q_c < 0 Engine            W < 0, Q_c ≥ 0 Forbidden
Mode classify_mode(double q_cold, double work, double tol);

/// Builds the record from the two heats (work and cop derived).
EnergyFlows flows_from_heats(double q_hot, double q_cold, double tol = kTieTolerance);

/// Throws std::invalid_argument on a dimension mismatch.
EnergyFlows energy_flows(const MachineSpec& spec, const CatalystDistribution& cat,
                         const Permutation& perm);

/// Flows between two arbitrary population vectors of the same machine (used
/// for bistochastic mixtures, whose post-stroke state is not a permutation).
EnergyFlows energy_flows(const MachineSpec& spec, const JointState& before,
                         const JointState& after);

/// −β_c Q_c + β_h Q_h; non-negative for every physical cycle.
double second_law_margin(const MachineSpec& spec, const EnergyFlows& flows) noexcept;

/// Rounding bound on flows.cop. Each heat is a sum of population differences
/// scaled by its gap, so it carries a few ulps of ω; dividing by W amplifies
/// that by 1/|W|, which matters near a zero-power boundary. Infinite when
/// cop is empty.
double cop_rounding(const MachineSpec& spec, const EnergyFlows& flows) noexcept;

/// β_h / (β_c − β_h). Throws std::domain_error unless β_c > β_h.
double carnot_cop(const MachineSpec& spec);

struct SubspaceHeats {
    double q_cold_flow;  // ω_c · net population leaving the cold-excited subspace
    double q_hot_flow;   // ω_h · net population entering the hot-excited subspace
};

/// Heats by counting only the populations that cross a subspace boundary.
/// Agrees with energy_flows() to rounding; kept as an independent route.
SubspaceHeats subspace_heats(const MachineSpec& spec, const CatalystDistribution& cat,
                             const Permutation& perm);

/// Σ e_cat · (ρ' − ρ). Zero whenever the catalyst marginal is preserved.
double catalyst_energy_change(const MachineSpec& spec, const CatalystDistribution& cat,
                              const Permutation& perm);

}  // namespace qfridge
