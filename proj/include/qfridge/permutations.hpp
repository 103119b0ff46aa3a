#pragma once

// Permutations of the 4d joint basis.
//
// A Permutation stores pull semantics: map[i] is the source index whose
// population lands at index i, so applying it is a single gather. The
// projector |a⟩⟨b| in a bra-ket listing corresponds to map[a] = b.

#include "qfridge/model.hpp"

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace qfridge {

class Permutation {
public:
    /// Throws std::invalid_argument unless map is a bijection on [0, n).
    explicit Permutation(std::vector<std::int32_t> map);

    static Permutation identity(std::size_t n);
    /// Product of the given swaps applied to the identity. The pairs must be
    /// disjoint; throws std::invalid_argument otherwise.
    static Permutation from_swaps(std::size_t n,
                                  std::span<const std::pair<std::size_t, std::size_t>> swaps);

    std::size_t size() const noexcept { return map_.size(); }
    std::span<const std::int32_t> map() const noexcept { return map_; }
    std::size_t operator[](std::size_t i) const noexcept { return static_cast<std::size_t>(map_[i]); }

    bool is_identity() const noexcept;

    /// JSON integer array, e.g. "[0,2,1,3]".
    std::string to_json() const;

    bool operator==(const Permutation&) const = default;
    /// Lexicographic on the map vector.
    std::strong_ordering operator<=>(const Permutation& other) const noexcept {
        return map_ <=> other.map_;
    }

private:
    std::vector<std::int32_t> map_;
};

/// apply(compose(g, f), s) == apply(g, apply(f, s))
Permutation compose(const Permutation& g, const Permutation& f);
Permutation inverse(const Permutation& f);

/// out[i] = state[perm[i]]. Throws std::invalid_argument on size mismatch.
JointState apply(const Permutation& perm, const JointState& state);
std::vector<double> apply(const Permutation& perm, std::span<const double> values);

/// The disjoint transpositions making up perm (each pair ordered low, high),
/// or nullopt if perm has a cycle longer than two.
std::optional<std::vector<std::pair<std::size_t, std::size_t>>> as_transpositions(
    const Permutation& perm);

/// Swap of |01⟩ and |10⟩ on the bare two-qubit machine: map (0, 2, 1, 3).
Permutation pi_opt();

/// Cyclic cold-to-ground ladder over d catalyst nodes (0-based):
///   (m, 0, 0) <-> (m+1, 0, 1)   for m = 0 … d-2
///   (0, 0, 1) <-> (d-1, 1, 0)
/// Reduces to pi_opt at d = 1.
Permutation pi_1(std::size_t d);

/// Operating-window family on d = n + n_prime nodes (0-based):
///   (m, 0, 0) <-> (m+1, 1, 0)   for m = 0 … n-1
///   (m, 0, 1) <-> (m+1, 1, 0)   for m = n … n+n_prime-2
///   (d-1, 0, 1) <-> (0, 1, 0)
/// Throws std::invalid_argument if n_prime == 0.
Permutation pi_2(std::size_t n, std::size_t n_prime);

/// Every permutation of [0, dim) in lexicographic order of the map vector.
/// Index-addressable, so a range can be split across workers and each slice
/// reproduces exactly the same elements.
class PermutationSequence {
public:
    static constexpr std::size_t kMaxDim = 8;

    /// Throws std::invalid_argument if dim is 0 or exceeds kMaxDim.
    explicit PermutationSequence(std::size_t dim);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return count_; }

    /// The rank-th permutation (0-based), decoded from the factorial number system.
    Permutation at(std::size_t rank) const;

    /// Lexicographic rank of perm within this sequence.
    std::size_t rank_of(const Permutation& perm) const;

private:
    std::size_t dim_;
    std::size_t count_;
};

inline PermutationSequence enumerate_all(std::size_t dim) { return PermutationSequence(dim); }

struct MixtureTerm {
    double weight;
    Permutation perm;
};

/// Convex combination of permutations; weights positive, summing to one.
struct ConvexMixture {
    std::vector<MixtureTerm> terms;

    std::size_t dim() const noexcept { return terms.empty() ? 0 : terms.front().perm.size(); }
    double weight_sum() const noexcept;
};

/// k permutations of [0, dim) from independent Fisher–Yates shuffles, each
/// with a weight drawn from (0, 1], then normalized. Draw order per term:
/// the shuffle (i = dim-1 … 1, j = below(i+1)) followed by the weight. Uses
/// SeededRng, so the output is fixed for a given seed on every platform.
ConvexMixture random_mixture(std::uint64_t seed, std::size_t dim, std::size_t k);

}  // namespace qfridge
