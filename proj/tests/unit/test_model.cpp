#include <catch_amalgamated.hpp>

#include "gen.hpp"
#include "qfridge/model.hpp"

#include <cmath>
#include <limits>
#include <numeric>

using namespace qfridge;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
const MachineSpec kSpec(1.0, 2.0, 2.0, 0.4);
}

TEST_CASE("basis index puts the catalyst slowest", "[model]") {
    CHECK(basis_index(0, 0, 0) == 0);
    CHECK(basis_index(0, 0, 1) == 1);
    CHECK(basis_index(0, 1, 0) == 2);
    CHECK(basis_index(2, 1, 1) == 11);
    for (std::size_t i = 0; i < 32; ++i) {
        CHECK(basis_index(node_of(i), hot_of(i), cold_of(i)) == i);
    }
}

TEST_CASE("machine spec rejects non-positive or non-finite fields by name", "[model]") {
    CHECK_THROWS_WITH(MachineSpec(0.0, 1.0, 1.0, 1.0), ContainsSubstring("beta_h"));
    CHECK_THROWS_WITH(MachineSpec(1.0, -1.0, 1.0, 1.0), ContainsSubstring("beta_c"));
    CHECK_THROWS_WITH(MachineSpec(1.0, 1.0, std::numeric_limits<double>::infinity(), 1.0),
                      ContainsSubstring("omega_h"));
    CHECK_THROWS_WITH(MachineSpec(1.0, 1.0, 1.0, std::nan("")), ContainsSubstring("omega_c"));
    CHECK_NOTHROW(MachineSpec(3.0, 1.0, 1.0, 1.0));  // no ordering between the baths
}

TEST_CASE("gibbs weights for the reference spec", "[model]") {
    const auto w = gibbs_weights(kSpec);
    CHECK_THAT(w.a_h, WithinRel(0.1353352832366127, 1e-15));
    CHECK_THAT(w.a_c, WithinRel(0.4493289641172216, 1e-15));
    CHECK_THAT(w.n_factor, WithinRel(0.6077275068565066, 1e-15));
}

TEST_CASE("joint state is the product of catalyst and thermal qubits", "[model]") {
    const auto rho = build_joint_state(kSpec, CatalystDistribution({0.5, 0.5}));
    REQUIRE(rho.size() == 8);
    CHECK_THAT(rho[basis_index(1, 0, 0)], WithinRel(0.3038637534282533, 1e-14));
    const auto w = gibbs_weights(kSpec);
    CHECK_THAT(rho[basis_index(1, 1, 1)], WithinRel(0.5 * w.n_factor * w.a_h * w.a_c, 1e-14));
}

TEST_CASE("joint state marginal returns the catalyst distribution", "[model][property]") {
    gen::Source g(3);
    for (int trial = 0; trial < 200; ++trial) {
        const auto spec = g.spec();
        const std::size_t d = 1 + g.index(8);
        const auto p = g.simplex(d);
        const auto rho = build_joint_state(spec, CatalystDistribution(p));
        const auto pops = rho.populations();
        CHECK_THAT(std::accumulate(pops.begin(), pops.end(), 0.0), WithinAbs(1.0, 1e-14));
        const auto m = rho.catalyst_marginal();
        for (std::size_t k = 0; k < d; ++k) CHECK_THAT(m[k], WithinAbs(p[k], 1e-15));
    }
}

TEST_CASE("catalyst distribution validation", "[model]") {
    CHECK_THROWS_AS(CatalystDistribution({}), std::invalid_argument);
    CHECK_THROWS_AS(CatalystDistribution({0.5, 0.6}), std::invalid_argument);
    CHECK_THROWS_AS(CatalystDistribution({1.5, -0.5}), std::invalid_argument);
    CHECK_THROWS_AS(CatalystDistribution({0.5, 0.5}, {1.0}), std::invalid_argument);
    CHECK_NOTHROW(CatalystDistribution({0.5, 0.5 + 5e-13}));
    const auto u = CatalystDistribution::uniform(4);
    CHECK(u.dim() == 4);
    CHECK(u[2] == 0.25);
    CHECK(u.level_energies().size() == 4);
    const auto e = u.with_level_energies({0, 1, 2, 3});
    CHECK(e.level_energies()[3] == 3.0);
    CHECK(CatalystDistribution::trivial().dim() == 1);
}

TEST_CASE("joint state validation", "[model]") {
    CHECK_THROWS_AS(JointState({0.5, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(JointState({0.5, 0.5, 0.5, -0.5}), std::invalid_argument);
    CHECK_THROWS_AS(JointState({0.5, 0.5, 0.5, 0.5}), std::invalid_argument);
    CHECK_NOTHROW(JointState({0.25, 0.25, 0.25, 0.25}));
}

TEST_CASE("energy vectors follow the basis layout", "[model]") {
    const auto cat = CatalystDistribution({0.25, 0.75}, {0.0, 1.5});
    const auto e = energy_vectors(kSpec, cat);
    REQUIRE(e.hot.size() == 8);
    CHECK(e.hot[basis_index(1, 1, 0)] == 2.0);
    CHECK(e.hot[basis_index(1, 0, 1)] == 0.0);
    CHECK(e.cold[basis_index(0, 1, 1)] == 0.4);
    CHECK(e.catalyst[basis_index(1, 0, 0)] == 1.5);
    CHECK(e.catalyst[basis_index(0, 1, 1)] == 0.0);
}
