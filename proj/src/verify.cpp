#include "qfridge/verify.hpp"

#include "qfridge/birkhoff.hpp"
#include "qfridge/catalyst.hpp"
#include "qfridge/permutations.hpp"
#include "qfridge/regions.hpp"
#include "qfridge/search.hpp"
#include "qfridge/thermo.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

namespace qfridge {

bool VerifyReport::all_passed() const noexcept {
    return std::all_of(groups.begin(), groups.end(), [](const GroupResult& g) { return g.passed; });
}

MachineSpec random_cooling_spec(SeededRng& rng) {
    const double beta_h = rng.uniform(0.2, 2.0);
    const double omega_h = rng.uniform(0.5, 3.0);
    const double beta_c = beta_h * rng.uniform(1.1, 5.0);
    const double omega_c = beta_h * omega_h / beta_c * rng.uniform(0.05, 0.95);
    return {beta_h, beta_c, omega_h, omega_c};
}

namespace {

constexpr double kSlack = 1e-12;

class Group {
public:
    Group(std::string name, const VerifyOptions& opt) : opt_(opt) { result_.name = std::move(name); }

    template <class Msg>
    void check(bool ok, Msg&& msg) {
        ++result_.checks;
        if (ok) return;
        if (result_.passed) {
            std::ostringstream os;
            os.precision(17);
            msg(os);
            result_.first_failure = os.str();
        }
        result_.passed = false;
    }

    // Flows as the suite sees them, with the mutation applied.
    EnergyFlows observe(const EnergyFlows& f) const {
        return opt_.flip_cold_sign ? flows_from_heats(f.q_hot, -f.q_cold) : f;
    }

    const VerifyOptions& options() const { return opt_; }
    GroupResult& result() { return result_; }

private:
    const VerifyOptions& opt_;
    GroupResult result_;
};

SeededRng group_rng(const VerifyOptions& opt, std::uint64_t salt) {
    return SeededRng(opt.seed * 0x9E3779B97F4A7C15ULL + salt);
}

void table1_group(Group& g) {
    auto rng = group_rng(g.options(), 1);
    const double tol = g.options().tol;
    for (int s = 0; s < 20; ++s) {
        const MachineSpec spec = random_cooling_spec(rng);
        const SearchResult t = table1(spec);
        int positive = 0;
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            const EnergyFlows f = g.observe(t.rows[r].flows);
            const ClosedForm cf = table1_closed_form(r + 1, spec);
            g.check(std::abs(f.q_cold - cf.q_cold) <= tol,
                    [&](auto& os) { os << "row " << r + 1 << " Q_c " << f.q_cold << " vs " << cf.q_cold; });
            g.check(f.cop.has_value() == cf.cop.has_value() &&
                        (!cf.cop || std::abs(*f.cop - *cf.cop) <= tol),
                    [&](auto& os) { os << "row " << r + 1 << " COP mismatch"; });
            if (f.q_cold > kSlack) ++positive;
        }
        g.check(positive == 4, [&](auto& os) { os << positive << " rows with Q_c > 0, expected 4"; });
    }
}

void otto_group(Group& g) {
    for (int i = 0; i < 20; ++i) {
        for (int j = 0; j < 20; ++j) {
            const double beta_c = 1.1 + 0.2 * i;
            const double omega_c = (0.04 + 0.048 * j) / beta_c;
            const MachineSpec spec(1.0, beta_c, 1.0, omega_c);
            const auto best = best_noncatalytic(spec);
            const double otto = omega_c / (1.0 - omega_c);
            g.check(best && std::abs(best->cop - otto) <= kSlack, [&](auto& os) {
                os << "beta_c=" << beta_c << " omega_c=" << omega_c << " best COP differs from Otto " << otto;
            });
        }
    }
}

void catalytic_law_group(Group& g) {
    auto rng = group_rng(g.options(), 3);
    const double tol = g.options().tol;
    for (int s = 0; s < 10; ++s) {
        const double beta_h = rng.uniform(0.5, 2.0);
        const double omega_h = rng.uniform(1.0, 3.0);
        const double beta_c = beta_h * rng.uniform(1.2, 4.0);
        const double omega_c = beta_h * omega_h / (beta_c * rng.uniform(8.5, 20.0));
        const MachineSpec spec(beta_h, beta_c, omega_h, omega_c);
        const double carnot = carnot_cop(spec);
        double previous = -1.0;
        for (std::size_t d = 1; d <= 8; ++d) {
            const Permutation perm = pi_1(d);
            const auto st = stationary_catalyst(spec, perm, d, tol);
            const EnergyFlows f = g.observe(energy_flows(spec, st.distribution, perm));
            const double law = omega_c / (omega_h / static_cast<double>(d) - omega_c);
            g.check(f.mode == Mode::Refrigerator && f.cop && std::abs(*f.cop - law) <= tol,
                    [&](auto& os) { os << "pi_1(" << d << ") COP off the law " << law; });
            const double cop = f.cop.value_or(-1.0);
            g.check(cop > previous && cop <= carnot + kSlack,
                    [&](auto& os) { os << "pi_1(" << d << ") COP " << cop << " not increasing or above Carnot"; });
            previous = cop;
        }
    }
    // Zero-power point: d equals β_h ω_h / (β_c ω_c).
    for (std::size_t d = 1; d <= 6; ++d) {
        const double beta_c = rng.uniform(1.2, 4.0);
        const MachineSpec spec(1.0, beta_c, 2.0, 2.0 / (beta_c * static_cast<double>(d)));
        const Permutation perm = pi_1(d);
        const auto st = stationary_catalyst(spec, perm, d, tol);
        const EnergyFlows f = g.observe(energy_flows(spec, st.distribution, perm));
        g.check(std::abs(f.q_cold) <= kSlack && std::abs(f.work) <= kSlack,
                [&](auto& os) { os << "Carnot point d=" << d << " still moves heat " << f.q_cold; });
        if (d > 1) {
            const FlowReport flows = node_flows(spec, perm, st.distribution);
            g.check(flows.uniform_flow && std::abs(*flows.uniform_flow) <= kSlack,
                    [&](auto& os) { os << "Carnot point d=" << d << " has nonzero node flow"; });
        }
    }
}

void extended_window_group(Group& g) {
    const double tol = g.options().tol;
    const std::array<std::array<double, 2>, 4> specs{{{1.5, 1.2}, {2.0, 1.5}, {3.0, 2.5}, {1.3, 1.05}}};
    for (const auto& [beta_c, omega_c] : specs) {
        const MachineSpec spec(1.0, beta_c, 1.0, omega_c);
        for (std::size_t d = 1; d <= 12; ++d) {
            for (std::size_t np = 1; np <= d; ++np) {
                const Permutation perm = pi_2(d - np, np);
                const auto st = stationary_catalyst(spec, perm, d, tol);
                const EnergyFlows f = g.observe(energy_flows(spec, st.distribution, perm));
                const double lhs = static_cast<double>(d);
                const double rhs = static_cast<double>(np) * omega_c * beta_c;
                if (lhs > rhs) {
                    const double law = extended_cop(spec, d, np);
                    g.check(f.mode == Mode::Refrigerator && f.cop && std::abs(*f.cop - law) <= tol,
                            [&](auto& os) { os << "pi_2 d=" << d << " n'=" << np << " expected COP " << law; });
                } else if (lhs < rhs) {
                    g.check(f.mode != Mode::Refrigerator,
                            [&](auto& os) { os << "pi_2 d=" << d << " n'=" << np << " cools outside the window"; });
                } else {
                    g.check(f.mode == Mode::Idle,
                            [&](auto& os) { os << "pi_2 d=" << d << " n'=" << np << " not idle on the boundary"; });
                }
            }
        }
    }
}

// Rows from the d = 1 sweeps of 20 specs and, optionally, one d = 2 sweep.
struct Sweeps {
    std::vector<std::pair<MachineSpec, SearchResult>> d1;
    std::optional<std::pair<MachineSpec, SearchResult>> d2;
};

Sweeps build_sweeps(const VerifyOptions& opt) {
    auto rng = group_rng(opt, 5);
    Sweeps s;
    for (int i = 0; i < 20; ++i) {
        const MachineSpec spec = random_cooling_spec(rng);
        s.d1.emplace_back(spec, table1(spec));
    }
    if (opt.include_d2_sweep) {
        const MachineSpec spec = random_cooling_spec(rng);
        s.d2.emplace(spec, exhaustive_catalytic(spec, 2, {.tol = opt.tol, .threads = opt.threads}));
    }
    return s;
}

void invariance_group(Group& g, const Sweeps& sweeps) {
    const double tol = g.options().tol;
    auto scan = [&](const MachineSpec& spec, const SearchResult& r) {
        for (const auto& row : r.rows) {
            g.check(row.stationary_residual <= tol && row.marginal_error <= tol, [&](auto& os) {
                os << "perm " << row.perm.to_json() << " residual " << row.stationary_residual
                   << " marginal error " << row.marginal_error;
            });
            const SubspaceHeats sub = subspace_heats(spec, row.catalyst, row.perm);
            g.check(std::abs(sub.q_cold_flow - row.flows.q_cold) <= kSlack &&
                        std::abs(sub.q_hot_flow - row.flows.q_hot) <= kSlack,
                    [&](auto& os) { os << "perm " << row.perm.to_json() << " subspace heats disagree"; });
        }
    };
    for (const auto& [spec, r] : sweeps.d1) scan(spec, r);
    if (sweeps.d2) scan(sweeps.d2->first, sweeps.d2->second);
}

void second_law_group(Group& g, const Sweeps& sweeps) {
    auto scan = [&](const MachineSpec& spec, const SearchResult& r) {
        for (const auto& row : r.rows) {
            const EnergyFlows f = g.observe(row.flows);
            const double margin = second_law_margin(spec, f);
            g.check(margin >= -kSlack,
                    [&](auto& os) { os << "perm " << row.perm.to_json() << " margin " << margin; });
            g.check(f.mode != Mode::Forbidden,
                    [&](auto& os) { os << "perm " << row.perm.to_json() << " is Forbidden"; });
        }
    };
    for (const auto& [spec, r] : sweeps.d1) {
        scan(spec, r);
        std::vector<SearchRow> rows = r.rows;
        for (auto& row : rows) row.flows = g.observe(row.flows);
        const ModeOrdering o = verify_mode_ordering(rows);
        g.check(o.holds, [&](auto& os) { os << "mode ordering fails at beta_c=" << spec.beta_c(); });
    }
    if (sweeps.d2) scan(sweeps.d2->first, sweeps.d2->second);
}

void convex_group(Group& g) {
    auto rng = group_rng(g.options(), 7);
    std::size_t refrigerating = 0;
    for (int i = 0; i < 1000; ++i) {
        const MachineSpec spec = random_cooling_spec(rng);
        const auto k = static_cast<std::size_t>(1 + rng.below(10));
        const ConvexMixture mix = random_mixture(rng.next(), kStatesPerNode, k);
        const ConvexBoundCheck c = verify_convex_bound(spec, mix);
        if (!c.holds) continue;
        ++refrigerating;
        g.check(*c.holds, [&](auto& os) {
            os << "mixture " << i << " COP " << *c.cop_mixture << " beats " << c.cop_best_perm.value_or(-1.0);
        });
    }
    g.check(refrigerating > 0, [](auto& os) { os << "no refrigerating mixture was drawn"; });
}

void birkhoff_group(Group& g) {
    auto rng = group_rng(g.options(), 8);
    for (int i = 0; i < 200; ++i) {
        const std::size_t dim = i % 2 == 0 ? 4 : 8;
        const auto k = static_cast<std::size_t>(1 + rng.below(12));
        const auto lambda = BistochasticMatrix::from_mixture(random_mixture(rng.next(), dim, k));
        const ConvexMixture dec = birkhoff_decompose(lambda, 1e-12);
        const auto back = BistochasticMatrix::from_mixture(dec);
        double err = 0.0;
        for (std::size_t e = 0; e < lambda.entries().size(); ++e) {
            err = std::max(err, std::abs(lambda.entries()[e] - back.entries()[e]));
        }
        g.check(err <= 1e-10 && dec.terms.size() <= (dim - 1) * (dim - 1) + 1, [&](auto& os) {
            os << "dim " << dim << " round-trip error " << err << " with " << dec.terms.size() << " terms";
        });
    }
}

void cop_curve_group(Group& g) {
    for (double ratio : {0.0056, 0.0122, 0.0188, 0.0256}) {
        const MachineSpec spec(1.0, 10.0, 1.0, ratio);
        const auto curve = cop_curve(spec, 1000, g.options().tol);
        const auto expected = static_cast<std::size_t>(std::floor(1.0 / (10.0 * ratio)));
        g.check(curve.size() == expected,
                [&](auto& os) { os << "omega ratio " << ratio << " gives " << curve.size() << " points"; });
        double previous = 0.0;
        for (const auto& pt : curve) {
            g.check(pt.normalized_cop > previous && pt.normalized_cop <= 1.0 + kSlack,
                    [&](auto& os) { os << "omega ratio " << ratio << " d=" << pt.d << " breaks monotonicity"; });
            g.check(pt.cop_simulated && std::abs(*pt.cop_simulated - pt.cop) <= g.options().tol,
                    [&](auto& os) { os << "omega ratio " << ratio << " d=" << pt.d << " simulation off"; });
            previous = pt.normalized_cop;
        }
    }
}

void region_group(Group& g) {
    const auto betas = linear_grid(0.5, 5.0, 50);
    const auto omegas = linear_grid(0.05, 3.0, 50);
    const std::vector<double> caps{1.0, 2.0, 4.0, 1e6};
    const auto pts = scan_region(betas, omegas, caps,
                                 {.max_d = 64, .simulate = true, .tol = g.options().tol, .threads = g.options().threads});
    const std::size_t nc = caps.size();
    auto at = [&](std::size_t b, std::size_t w, std::size_t c) -> const RegionPoint& {
        return pts[(b * omegas.size() + w) * nc + c];
    };
    for (std::size_t b = 0; b < betas.size(); ++b) {
        for (std::size_t w = 0; w < omegas.size(); ++w) {
            for (std::size_t c = 0; c < nc; ++c) {
                const RegionPoint& p = at(b, w, c);
                if (c > 0) {
                    g.check(!at(b, w, c - 1).coolable || p.coolable,
                            [&](auto& os) { os << "regions not nested at " << p.beta_ratio << "," << p.omega_ratio; });
                }
                if (c == 0) {
                    const MachineSpec spec(1.0, p.beta_ratio, 1.0, p.omega_ratio);
                    g.check(p.coolable == noncat_coolable(spec),
                            [&](auto& os) { os << "cap 1 differs from the bare condition at " << p.beta_ratio; });
                }
                // The flip must sit between neighbouring cells straddling the threshold.
                if (w + 1 < omegas.size() && p.coolable && !at(b, w + 1, c).coolable) {
                    g.check(p.beta_ratio * omegas[w] <= p.cap && p.beta_ratio * omegas[w + 1] > p.cap,
                            [&](auto& os) { os << "boundary misplaced at beta " << p.beta_ratio; });
                }
                if (p.simulated_mode) {
                    const bool fridge = *p.simulated_mode == Mode::Refrigerator;
                    g.check(fridge || *p.simulated_mode == Mode::Idle,
                            [&](auto& os) { os << "witness does not cool at " << p.beta_ratio << "," << p.omega_ratio; });
                    g.check(!fridge || std::abs(*p.cop_simulated - *p.cop_formula) <= g.options().tol + p.cop_slack,
                            [&](auto& os) { os << "witness COP off at " << p.beta_ratio << "," << p.omega_ratio; });
                }
            }
        }
    }
}

}  // namespace

VerifyReport run_verify(const VerifyOptions& options) {
    VerifyReport report;
    auto timed = [&](const char* name, const std::function<void(Group&)>& body) {
        Group g(name, options);
        const auto t0 = std::chrono::steady_clock::now();
        try {
            body(g);
        } catch (const std::exception& e) {
            g.check(false, [&](auto& os) { os << "exception: " << e.what(); });
        }
        g.result().seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        report.groups.push_back(std::move(g.result()));
    };

    timed("table1-closed-forms", table1_group);
    timed("otto-optimum", otto_group);
    timed("catalytic-cop-law", catalytic_law_group);
    timed("extended-window", extended_window_group);
    const Sweeps sweeps = build_sweeps(options);
    timed("catalyst-invariance", [&](Group& g) { invariance_group(g, sweeps); });
    timed("second-law-and-modes", [&](Group& g) { second_law_group(g, sweeps); });
    timed("convex-bound", convex_group);
    timed("birkhoff-round-trip", birkhoff_group);
    timed("cop-curve", cop_curve_group);
    timed("region-map", region_group);
    return report;
}

}  // namespace qfridge
