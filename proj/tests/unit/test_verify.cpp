#include <catch_amalgamated.hpp>

#include "qfridge/verify.hpp"

#include <algorithm>

using namespace qfridge;

namespace {

const GroupResult& group(const VerifyReport& r, const std::string& name) {
    const auto it = std::find_if(r.groups.begin(), r.groups.end(), [&](const auto& g) { return g.name == name; });
    REQUIRE(it != r.groups.end());
    return *it;
}

}  // namespace

TEST_CASE("verify suite passes and is seed-robust", "[verify][slow]") {
    for (std::uint64_t seed : {0u, 7u}) {
        VerifyOptions opt;
        opt.seed = seed;
        opt.include_d2_sweep = false;
        const auto report = run_verify(opt);
        REQUIRE(report.groups.size() == 10);
        for (const auto& g : report.groups) {
            INFO("seed " << seed << " group " << g.name << ": " << g.first_failure);
            CHECK(g.passed);
            CHECK(g.checks > 0);
        }
        CHECK(report.all_passed());
    }
}

TEST_CASE("flipping the sign of Q_c breaks the second law group", "[verify][slow]") {
    VerifyOptions opt;
    opt.include_d2_sweep = false;
    opt.flip_cold_sign = true;
    const auto report = run_verify(opt);
    CHECK_FALSE(report.all_passed());
    CHECK_FALSE(group(report, "second-law-and-modes").passed);
    // Groups that never read Q_c are unaffected.
    CHECK(group(report, "birkhoff-round-trip").passed);
}

TEST_CASE("random cooling specs satisfy their contract", "[verify]") {
    SeededRng rng(3);
    for (int i = 0; i < 1000; ++i) {
        const auto s = random_cooling_spec(rng);
        CHECK(s.beta_c() > s.beta_h());
        CHECK(s.beta_h() * s.omega_h() > s.beta_c() * s.omega_c());
    }
}
