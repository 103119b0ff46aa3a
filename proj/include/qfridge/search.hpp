#pragma once

// Exhaustive and structured searches over work-stroke permutations.

#include "qfridge/catalyst.hpp"
#include "qfridge/model.hpp"
#include "qfridge/permutations.hpp"
#include "qfridge/thermo.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace qfridge {

struct SearchRow {
    Permutation perm;
    EnergyFlows flows;
    CatalystDistribution catalyst;
    bool unique;                 // stationary catalyst was the only fixed point
    double stationary_residual;  // ‖M p − p‖∞
    double marginal_error;       // ‖marginal(ρ') − p‖∞
};

struct SearchResult {
    std::vector<SearchRow> rows;
    std::optional<std::size_t> best_refrigerator;
};

/// Refrigerator-mode row with the largest COP. COPs within 1e-12 of each
/// other tie, and ties go to the lexicographically smallest map.
std::optional<std::size_t> best_refrigerator(std::span<const SearchRow> rows);

struct SearchOptions {
    double tol = 1e-10;    // stationary-solve tolerance
    unsigned threads = 0;  // 0 = hardware concurrency
};

/// Every permutation of the 4d states (d ∈ {1, 2}) with its own stationary
/// catalyst. Rows are in enumerate_all order; the result does not depend on
/// the thread count. Throws std::invalid_argument for other d.
SearchResult exhaustive_catalytic(const MachineSpec& spec, std::size_t d, SearchOptions options = {});

/// The 24 bare two-qubit permutations, in enumerate_all(4) order.
SearchResult table1(const MachineSpec& spec);

/// Closed-form (Q_c, COP) for a 1-based row of the bare-machine table. The
/// COP is empty for the identity row, where no work is done.
struct ClosedForm {
    double q_cold;
    std::optional<double> cop;
};
ClosedForm table1_closed_form(std::size_t row, const MachineSpec& spec);

struct BestPermutation {
    Permutation perm;
    double cop;
};

/// Best refrigerating bare-machine permutation. Empty unless
/// β_h ω_h > β_c ω_c and β_c > β_h.
std::optional<BestPermutation> best_noncatalytic(const MachineSpec& spec);

struct ConvexBoundCheck {
    EnergyFlows aggregate;                // flows of Λρ with Λ = Σ α Π
    std::vector<EnergyFlows> term_flows;  // one per mixture term
    std::optional<double> cop_mixture;
    std::optional<double> cop_best_perm;  // best refrigerating COP over the terms and all 24 permutations
    std::optional<bool> holds;            // empty when the aggregate is not a refrigerator
};

/// Checks that a refrigerating bistochastic mixture on the bare machine never
/// beats its best refrigerating permutation (1e-12 slack). Throws
/// std::invalid_argument unless the mixture acts on 4 states.
ConvexBoundCheck verify_convex_bound(const MachineSpec& spec, const ConvexMixture& mixture);

struct ModeOrdering {
    std::optional<double> max_accelerator;
    std::optional<double> min_refrigerator;
    std::optional<double> max_refrigerator;
    std::optional<double> min_engine;
    bool holds;
};

/// max COP(Accelerator) ≤ min COP(Refrigerator) ≤ max COP(Refrigerator) ≤
/// min COP(Engine), skipping empty groups, with 1e-12 slack. Engine COP is
/// (Q_h/Q_c − 1)^-1, which equals Q_c/W.
ModeOrdering verify_mode_ordering(std::span<const SearchRow> rows);

}  // namespace qfridge
