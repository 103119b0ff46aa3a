#include "qfridge/permutations.hpp"

#include "qfridge/kernels.hpp"
#include "qfridge/random.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qfridge {

Permutation::Permutation(std::vector<std::int32_t> map) : map_(std::move(map)) {
    std::vector<bool> seen(map_.size(), false);
    for (std::int32_t v : map_) {
        if (v < 0 || static_cast<std::size_t>(v) >= map_.size() || seen[static_cast<std::size_t>(v)]) {
            throw std::invalid_argument("permutation map is not a bijection on [0, " +
                                        std::to_string(map_.size()) + ")");
        }
        seen[static_cast<std::size_t>(v)] = true;
    }
}

Permutation Permutation::identity(std::size_t n) {
    std::vector<std::int32_t> m(n);
    std::iota(m.begin(), m.end(), 0);
    return Permutation(std::move(m));
}

Permutation Permutation::from_swaps(std::size_t n,
                                   std::span<const std::pair<std::size_t, std::size_t>> swaps) {
    std::vector<std::int32_t> m(n);
    std::iota(m.begin(), m.end(), 0);
    std::vector<bool> touched(n, false);
    for (auto [a, b] : swaps) {
        if (a >= n || b >= n || a == b || touched[a] || touched[b]) {
            throw std::invalid_argument("swaps must be disjoint pairs of distinct indices below " +
                                        std::to_string(n));
        }
        touched[a] = touched[b] = true;
        std::swap(m[a], m[b]);
    }
    return Permutation(std::move(m));
}

bool Permutation::is_identity() const noexcept {
    for (std::size_t i = 0; i < map_.size(); ++i) {
        if (static_cast<std::size_t>(map_[i]) != i) return false;
    }
    return true;
}

std::string Permutation::to_json() const {
    std::string s = "[";
    for (std::size_t i = 0; i < map_.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(map_[i]);
    }
    return s + "]";
}

Permutation compose(const Permutation& g, const Permutation& f) {
    if (g.size() != f.size()) throw std::invalid_argument("compose: dimension mismatch");
    std::vector<std::int32_t> m(f.size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = f.map()[g[i]];
    return Permutation(std::move(m));
}

Permutation inverse(const Permutation& f) {
    std::vector<std::int32_t> m(f.size());
    for (std::size_t i = 0; i < m.size(); ++i) m[f[i]] = static_cast<std::int32_t>(i);
    return Permutation(std::move(m));
}

std::vector<double> apply(const Permutation& perm, std::span<const double> values) {
    if (perm.size() != values.size()) {
        throw std::invalid_argument("apply: permutation has size " + std::to_string(perm.size()) +
                                    " but the state has " + std::to_string(values.size()));
    }
    std::vector<double> out(values.size());
    kernels::gather(values, perm.map(), out);
    return out;
}

JointState apply(const Permutation& perm, const JointState& state) {
    return JointState(apply(perm, state.populations()));
}

std::optional<std::vector<std::pair<std::size_t, std::size_t>>> as_transpositions(
    const Permutation& perm) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < perm.size(); ++i) {
        const std::size_t j = perm[i];
        if (j == i) continue;
        if (perm[j] != i) return std::nullopt;
        if (i < j) out.emplace_back(i, j);
    }
    return out;
}

Permutation pi_opt() { return Permutation({0, 2, 1, 3}); }

Permutation pi_1(std::size_t d) {
    if (d == 0) throw std::invalid_argument("pi_1: catalyst dimension must be at least 1");
    std::vector<std::pair<std::size_t, std::size_t>> swaps;
    for (std::size_t m = 0; m + 1 < d; ++m) {
        swaps.emplace_back(basis_index(m, 0, 0), basis_index(m + 1, 0, 1));
    }
    swaps.emplace_back(basis_index(0, 0, 1), basis_index(d - 1, 1, 0));
    return Permutation::from_swaps(kStatesPerNode * d, swaps);
}

Permutation pi_2(std::size_t n, std::size_t n_prime) {
    if (n_prime == 0) throw std::invalid_argument("pi_2: n_prime must be at least 1");
    const std::size_t d = n + n_prime;
    std::vector<std::pair<std::size_t, std::size_t>> swaps;
    for (std::size_t m = 0; m < n; ++m) {
        swaps.emplace_back(basis_index(m, 0, 0), basis_index(m + 1, 1, 0));
    }
    for (std::size_t m = n; m + 1 < d; ++m) {
        swaps.emplace_back(basis_index(m, 0, 1), basis_index(m + 1, 1, 0));
    }
    swaps.emplace_back(basis_index(d - 1, 0, 1), basis_index(0, 1, 0));
    return Permutation::from_swaps(kStatesPerNode * d, swaps);
}

PermutationSequence::PermutationSequence(std::size_t dim) : dim_(dim), count_(1) {
    if (dim == 0 || dim > kMaxDim) {
        throw std::invalid_argument("enumeration dimension must be in [1, " +
                                    std::to_string(kMaxDim) + "], got " + std::to_string(dim));
    }
    for (std::size_t k = 2; k <= dim; ++k) count_ *= k;
}

Permutation PermutationSequence::at(std::size_t rank) const {
    if (rank >= count_) throw std::out_of_range("permutation rank out of range");
    std::vector<std::int32_t> pool(dim_);
    std::iota(pool.begin(), pool.end(), 0);
    std::vector<std::int32_t> out;
    out.reserve(dim_);
    std::size_t block = count_;
    for (std::size_t left = dim_; left > 0; --left) {
        block /= left;
        const std::size_t digit = rank / block;
        rank %= block;
        out.push_back(pool[digit]);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(digit));
    }
    return Permutation(std::move(out));
}

std::size_t PermutationSequence::rank_of(const Permutation& perm) const {
    if (perm.size() != dim_) throw std::invalid_argument("rank_of: dimension mismatch");
    std::size_t rank = 0;
    std::size_t block = count_;
    for (std::size_t i = 0; i < dim_; ++i) {
        block /= dim_ - i;
        std::size_t smaller = 0;
        for (std::size_t j = i + 1; j < dim_; ++j) smaller += perm[j] < perm[i] ? 1 : 0;
        rank += smaller * block;
    }
    return rank;
}

double ConvexMixture::weight_sum() const noexcept {
    double s = 0.0;
    for (const auto& t : terms) s += t.weight;
    return s;
}

ConvexMixture random_mixture(std::uint64_t seed, std::size_t dim, std::size_t k) {
    if (k == 0) throw std::invalid_argument("random_mixture: k must be at least 1");
    if (dim == 0 || dim > PermutationSequence::kMaxDim) {
        throw std::invalid_argument("random_mixture: dim must be in [1, 8]");
    }
    SeededRng rng(seed);
    ConvexMixture mix;
    double total = 0.0;
    for (std::size_t t = 0; t < k; ++t) {
        std::vector<std::int32_t> m(dim);
        std::iota(m.begin(), m.end(), 0);
        for (std::size_t i = dim - 1; i > 0; --i) std::swap(m[i], m[rng.below(i + 1)]);
        const double w = rng.unit();
        total += w;
        mix.terms.push_back({w, Permutation(std::move(m))});
    }
    for (auto& term : mix.terms) term.weight /= total;
    return mix;
}

}  // namespace qfridge
