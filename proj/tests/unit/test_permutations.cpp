#include <catch_amalgamated.hpp>

#include "gen.hpp"
#include "qfridge/permutations.hpp"

#include <set>

using namespace qfridge;
using Catch::Matchers::WithinAbs;

TEST_CASE("permutation construction validates bijection", "[permutations]") {
    CHECK_THROWS_AS(Permutation({0, 0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(Permutation({0, 3}), std::invalid_argument);
    CHECK_THROWS_AS(Permutation({-1, 0}), std::invalid_argument);
    CHECK(Permutation::identity(4).is_identity());
    CHECK(Permutation({1, 0}).to_json() == "[1,0]");
    using Swaps = std::vector<std::pair<std::size_t, std::size_t>>;
    CHECK_THROWS_AS(Permutation::from_swaps(4, Swaps{{0, 1}, {1, 2}}), std::invalid_argument);
    CHECK(Permutation::from_swaps(4, Swaps{{1, 2}}) == pi_opt());
}

TEST_CASE("apply pulls from the source index", "[permutations]") {
    const std::vector<double> v{10, 20, 30, 40};
    CHECK(qfridge::apply(Permutation({3, 0, 1, 2}), std::span<const double>(v)) == std::vector<double>{40, 10, 20, 30});
}

TEST_CASE("composition and inverse laws", "[permutations][property]") {
    gen::Source g(21);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + g.index(12);
        const auto f = g.permutation(n);
        const auto h = g.permutation(n);
        std::vector<double> v(n);
        for (auto& x : v) x = g.real(0.0, 1.0);
        const auto lhs = qfridge::apply(compose(h, f), std::span<const double>(v));
        const auto inner = qfridge::apply(f, std::span<const double>(v));
        const auto rhs = qfridge::apply(h, std::span<const double>(inner));
        CHECK(lhs == rhs);
        CHECK(compose(f, inverse(f)).is_identity());
        CHECK(compose(inverse(f), f).is_identity());
        CHECK(inverse(inverse(f)) == f);
    }
}

TEST_CASE("transposition decomposition", "[permutations]") {
    const auto t = as_transpositions(pi_1(3));
    REQUIRE(t);
    CHECK(t->size() == 3);
    for (auto [a, b] : *t) CHECK(a < b);
    CHECK_FALSE(as_transpositions(Permutation({1, 2, 0})).has_value());
    CHECK(as_transpositions(Permutation::identity(4))->empty());
}

TEST_CASE("named permutations", "[permutations]") {
    CHECK(gen::map_of(pi_opt()) == std::vector<std::int32_t>{0, 2, 1, 3});
    CHECK(pi_1(1) == pi_opt());
    CHECK(gen::map_of(pi_1(2)) == std::vector<std::int32_t>{5, 6, 2, 3, 4, 0, 1, 7});
    CHECK(gen::map_of(pi_2(1, 1)) == std::vector<std::int32_t>{6, 1, 5, 3, 4, 2, 0, 7});
    CHECK(pi_2(0, 1) == pi_opt());
    CHECK_THROWS_AS(pi_1(0), std::invalid_argument);
    CHECK_THROWS_AS(pi_2(2, 0), std::invalid_argument);
    for (std::size_t d = 1; d <= 10; ++d) {
        CHECK(as_transpositions(pi_1(d))->size() == d);
        for (std::size_t np = 1; np <= d; ++np) {
            const auto p = pi_2(d - np, np);
            CHECK(p.size() == 4 * d);
            CHECK(as_transpositions(p)->size() == d);
        }
    }
}

TEST_CASE("enumeration is lexicographic and rank-addressable", "[permutations]") {
    const auto seq = enumerate_all(4);
    REQUIRE(seq.size() == 24);
    CHECK(seq.at(0).is_identity());
    CHECK(gen::map_of(seq.at(6)) == std::vector<std::int32_t>{1, 0, 2, 3});
    CHECK(gen::map_of(seq.at(23)) == std::vector<std::int32_t>{3, 2, 1, 0});
    for (std::size_t r = 1; r < seq.size(); ++r) CHECK(seq.at(r - 1) < seq.at(r));
    CHECK_THROWS_AS(seq.at(24), std::out_of_range);
    CHECK_THROWS_AS(PermutationSequence(0), std::invalid_argument);
    CHECK_THROWS_AS(PermutationSequence(9), std::invalid_argument);

    const auto big = enumerate_all(8);
    CHECK(big.size() == 40320);
    gen::Source g(5);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t r = g.index(big.size());
        CHECK(big.rank_of(big.at(r)) == r);
    }
}

TEST_CASE("random mixtures are seeded and normalized", "[permutations]") {
    const auto a = random_mixture(42, 4, 6);
    const auto b = random_mixture(42, 4, 6);
    const auto c = random_mixture(43, 4, 6);
    REQUIRE(a.terms.size() == 6);
    CHECK_THAT(a.weight_sum(), WithinAbs(1.0, 1e-15));
    bool same = true;
    bool differs = false;
    for (std::size_t i = 0; i < 6; ++i) {
        same = same && a.terms[i].perm == b.terms[i].perm && a.terms[i].weight == b.terms[i].weight;
        differs = differs || a.terms[i].perm != c.terms[i].perm;
        CHECK(a.terms[i].weight > 0.0);
    }
    CHECK(same);
    CHECK(differs);
    CHECK(a.dim() == 4);
    CHECK_THROWS_AS(random_mixture(1, 4, 0), std::invalid_argument);
}
