#pragma once

// Bistochastic matrices and their decomposition into permutations.

#include "qfridge/permutations.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace qfridge {

/// Row-major dim x dim matrix with non-negative entries and unit row and
/// column sums (within 1e-10). Permutation matrices follow the pull
/// convention: entry (i, perm[i]) = 1, so (P x)[i] = x[perm[i]].
class BistochasticMatrix {
public:
    static constexpr double kSumTolerance = 1e-10;

    /// Throws std::invalid_argument if the shape or invariants are violated.
    BistochasticMatrix(std::size_t dim, std::vector<double> entries);

    static BistochasticMatrix from_permutation(const Permutation& perm);
    /// Σ weight · matrix(perm). Throws on an empty mixture or mixed dimensions.
    static BistochasticMatrix from_mixture(const ConvexMixture& mixture);

    std::size_t dim() const noexcept { return dim_; }
    double operator()(std::size_t row, std::size_t col) const noexcept {
        return entries_[row * dim_ + col];
    }
    std::span<const double> entries() const noexcept { return entries_; }

    /// y = Λ x
    std::vector<double> apply(std::span<const double> x) const;

private:
    std::size_t dim_;
    std::vector<double> entries_;
};

/// Greedy Birkhoff–von Neumann decomposition.
///
/// Repeatedly finds a perfect matching on the bipartite graph of residual
/// entries > tol (Kuhn's augmenting paths, rows and columns scanned in
/// increasing index order), records the permutation with weight equal to the
/// smallest matched entry (first occurrence on ties), and subtracts it. Stops
/// once every residual entry is ≤ tol. Each step shrinks the support, so at
/// most (dim-1)^2 + 1 terms are produced.
///
/// Throws std::domain_error if no perfect matching exists while residual mass
/// remains above tol, which means the input was not bistochastic within tol.
ConvexMixture birkhoff_decompose(const BistochasticMatrix& lambda, double tol);

}  // namespace qfridge
