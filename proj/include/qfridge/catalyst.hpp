#pragma once

// The cyclic-catalyst constraint. For a fixed machine and permutation, the
// catalyst marginal after the work stroke is linear in the catalyst state p:
// marginal = M p with M column-stochastic. A valid catalyst is a fixed point
// of M.

#include "qfridge/model.hpp"
#include "qfridge/permutations.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace qfridge {

/// Row-major d x d column-stochastic matrix. Entry (i, m) is the probability
/// that catalyst level m ends in level i, weighted by the thermal TLS
/// populations N · a_h^j · a_c^k of the source basis states.
class TransferMatrix {
public:
    static constexpr double kColumnTolerance = 1e-12;

    /// Throws std::invalid_argument unless the entries are non-negative and
    /// every column sums to one within kColumnTolerance.
    TransferMatrix(std::size_t d, std::vector<double> entries);

    std::size_t dim() const noexcept { return d_; }
    double operator()(std::size_t row, std::size_t col) const noexcept { return entries_[row * d_ + col]; }
    std::span<const double> entries() const noexcept { return entries_; }

    std::vector<double> apply(std::span<const double> p) const;

private:
    std::size_t d_;
    std::vector<double> entries_;
};

/// Throws std::invalid_argument if perm.size() != 4d.
TransferMatrix transfer_matrix(const MachineSpec& spec, const Permutation& perm, std::size_t d);

struct StationaryResult {
    CatalystDistribution distribution;
    bool unique;      // false when the fixed-point space has dimension > 1
    double residual;  // ‖M p − p‖∞
};

/// Fixed point of M on the simplex.
///
/// The nullspace of (M − I) is computed with a full-pivot LU. A
/// one-dimensional nullspace gives the unique answer directly. Otherwise the
/// result is the limit of power iteration on the lazy chain (I + M) / 2 from
/// the uniform distribution, flagged unique = false; the lazy chain has the
/// same fixed points as M and cannot oscillate. Power iteration stops when
/// successive iterates differ by less than tol / 10 in the ∞-norm, and throws
/// std::runtime_error after kMaxPowerIterations.
inline constexpr std::size_t kMaxPowerIterations = 1'000'000;
StationaryResult stationary_distribution(const TransferMatrix& tm, double tol);

/// Convenience: transfer matrix of perm on 4d states followed by the stationary solve.
StationaryResult stationary_catalyst(const MachineSpec& spec, const Permutation& perm,
                                     std::size_t d, double tol);

/// True iff the catalyst marginal after apply(perm, ρ) equals cat.p within tol.
bool is_catalytic(const MachineSpec& spec, const Permutation& perm,
                  const CatalystDistribution& cat, double tol);

/// One inter-node transposition and the net population it moves.
///
/// Orientation: the receiving state is the endpoint with the hot TLS excited;
/// if both or neither are, the endpoint with the cold TLS in its ground
/// state; if still tied, the one in the lower node. delta_p is the net
/// population gained by target_node, i.e. pop[source_state] − pop[target_state].
/// With this orientation, a positive delta_p always moves population toward
/// the hot-excited / cold-ground side, the refrigerating direction.
struct FlowRecord {
    std::size_t source_node;
    std::size_t target_node;
    std::size_t source_state;
    std::size_t target_state;
    double delta_p;
};

struct FlowReport {
    std::vector<FlowRecord> records;
    std::optional<double> uniform_flow;  // set when every delta_p agrees within 1e-12
};

inline constexpr double kUniformFlowTolerance = 1e-12;

/// Per-transposition node flows for a permutation built from disjoint
/// transpositions. Intra-node transpositions move no catalyst population and
/// are not reported. Throws std::invalid_argument if perm has a longer cycle.
FlowReport node_flows(const MachineSpec& spec, const Permutation& perm,
                      const CatalystDistribution& cat);

}  // namespace qfridge
