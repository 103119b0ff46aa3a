#include "qfridge/search.hpp"

#include "qfridge/birkhoff.hpp"
#include "qfridge/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>

namespace qfridge {
namespace {

constexpr double kCopTie = 1e-12;

SearchRow evaluate(const MachineSpec& spec, Permutation perm, std::size_t d, double tol) {
    StationaryResult st = stationary_catalyst(spec, perm, d, tol);
    const EnergyFlows flows = energy_flows(spec, st.distribution, perm);
    const JointState after = apply(perm, build_joint_state(spec, st.distribution));
    const double marginal_error =
        kernels::max_abs_diff(after.catalyst_marginal(), st.distribution.probabilities());
    return {std::move(perm), flows, std::move(st.distribution), st.unique, st.residual, marginal_error};
}

}  // namespace

std::optional<std::size_t> best_refrigerator(std::span<const SearchRow> rows) {
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (r.flows.mode != Mode::Refrigerator || !r.flows.cop) continue;
        if (!best) {
            best = i;
            continue;
        }
        const double incumbent = *rows[*best].flows.cop;
        const double cop = *r.flows.cop;
        if (cop > incumbent + kCopTie ||
            (std::abs(cop - incumbent) <= kCopTie && r.perm < rows[*best].perm)) {
            best = i;
        }
    }
    return best;
}

SearchResult exhaustive_catalytic(const MachineSpec& spec, std::size_t d, SearchOptions options) {
    if (d != 1 && d != 2) {
        throw std::invalid_argument("exhaustive_catalytic supports d = 1 or 2, got " +
                                    std::to_string(d));
    }
    const PermutationSequence seq(kStatesPerNode * d);
    std::vector<std::optional<SearchRow>> slots(seq.size());

    unsigned workers = options.threads ? options.threads : std::thread::hardware_concurrency();
    workers = std::clamp<unsigned>(workers, 1U, 64U);
    const std::size_t chunk = (seq.size() + workers - 1) / workers;

    auto run = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) slots[i] = evaluate(spec, seq.at(i), d, options.tol);
    };
    if (workers == 1) {
        run(0, seq.size());
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t lo = 0; lo < seq.size(); lo += chunk) {
            pool.emplace_back(run, lo, std::min(seq.size(), lo + chunk));
        }
    }

    SearchResult result;
    result.rows.reserve(slots.size());
    for (auto& s : slots) result.rows.push_back(std::move(*s));
    result.best_refrigerator = best_refrigerator(result.rows);
    return result;
}

SearchResult table1(const MachineSpec& spec) {
    return exhaustive_catalytic(spec, 1, {.tol = 1e-10, .threads = 1});
}

ClosedForm table1_closed_form(std::size_t row, const MachineSpec& spec) {
    const auto [ah, ac, n] = gibbs_weights(spec);
    const double wh = spec.omega_h();
    const double wc = spec.omega_c();

    // Q_c families shared between rows.
    const double gain = n * (ac - ah) * wc;            // (a_c − a_h) ω_c N
    const double hot_loss = -n * ah * (1 - ac) * wc;   // −a_h (1 − a_c) ω_c N
    const double cold_loss = -n * (1 - ac) * wc;       // −(1 − a_c) ω_c N
    const double pair_loss = -(1 - ac) * wc / (1 + ac);
    const double both_loss = -n * (1 - ac * ah) * wc;  // −(1 − a_c a_h) ω_c N

    // COP = ω_c / (x ω_h − ω_c) for refrigerating rows, −ω_c / (x ω_h + ω_c) otherwise.
    auto fridge = [&](double x) { return wc / (x * wh - wc); };
    auto loss = [&](double x) { return -wc / (x * wh + wc); };

    switch (row) {
        case 1: return {0.0, std::nullopt};
        case 2: return {hot_loss, -1.0};
        case 3: return {gain, wc / (wh - wc)};
        case 4: return {hot_loss, loss((ac - ah) / (ah * (1 - ac)))};
        case 5: return {gain, fridge((1 - ah) / (1 - ah / ac))};
        case 6: return {0.0, 0.0};
        case 7: return {cold_loss, -1.0};
        case 8: return {pair_loss, -1.0};
        case 9: return {gain, fridge((1 - ah) / (ac - ah))};
        case 10: return {pair_loss, loss((1 - ah) / ((1 - ac) * (1 + ah)))};
        case 11: return {gain, fridge((1 - ac * ah) / (ac - ah))};
        case 12: return {cold_loss, loss((1 - ac * ah) / (1 - ac))};
        case 13: return {cold_loss, loss((ac - ah) / (1 - ac))};
        case 14: return {both_loss, loss((ac - ah) / (1 - ac * ah))};
        case 15: return {0.0, 0.0};
        case 16: return {both_loss, loss((1 - ah) / (1 - ac * ah))};
        case 17: return {0.0, 0.0};
        case 18: return {cold_loss, loss((1 - ah) * (1 + ac) / (1 - ac))};
        case 19: return {pair_loss, loss(ac * (1 - ah) / ((1 - ac) * (1 + ah)))};
        case 20: return {both_loss, loss(ac * (1 - ah) / (1 - ac * ah))};
        case 21: return {hot_loss, loss((1 - ac * ah) / (ah * (1 - ac)))};
        case 22: return {both_loss, -wc / (wh + wc)};
        case 23: return {hot_loss, loss((1 + ac) * (1 - ah) / (ah * (1 - ac)))};
        case 24: return {pair_loss, loss((1 + ac) * (1 - ah) / ((1 - ac) * (1 + ah)))};
        default: throw std::out_of_range("table1_closed_form: row must be in [1, 24]");
    }
}

std::optional<BestPermutation> best_noncatalytic(const MachineSpec& spec) {
    const bool window = spec.beta_h() * spec.omega_h() > spec.beta_c() * spec.omega_c() &&
                        spec.beta_c() > spec.beta_h();
    if (!window) return std::nullopt;
    SearchResult t = table1(spec);
    if (!t.best_refrigerator) return std::nullopt;
    auto& row = t.rows[*t.best_refrigerator];
    return BestPermutation{std::move(row.perm), *row.flows.cop};
}

ConvexBoundCheck verify_convex_bound(const MachineSpec& spec, const ConvexMixture& mixture) {
    if (mixture.dim() != kStatesPerNode) {
        throw std::invalid_argument("verify_convex_bound: mixture must act on the 4 bare states");
    }
    const auto cat = CatalystDistribution::trivial();
    const JointState rho = build_joint_state(spec, cat);
    const auto lambda = BistochasticMatrix::from_mixture(mixture);

    ConvexBoundCheck check;
    check.aggregate = energy_flows(spec, rho, JointState(lambda.apply(rho.populations())));

    std::optional<double> best;
    auto consider = [&](const EnergyFlows& f) {
        if (f.mode == Mode::Refrigerator && f.cop && (!best || *f.cop > *best)) best = f.cop;
    };
    for (const auto& term : mixture.terms) {
        check.term_flows.push_back(energy_flows(spec, cat, term.perm));
        consider(check.term_flows.back());
    }
    const PermutationSequence all(kStatesPerNode);
    for (std::size_t i = 0; i < all.size(); ++i) consider(energy_flows(spec, cat, all.at(i)));
    check.cop_best_perm = best;

    if (check.aggregate.mode == Mode::Refrigerator && check.aggregate.cop) {
        check.cop_mixture = check.aggregate.cop;
        check.holds = best && *check.cop_mixture <= *best + kCopTie;
    }
    return check;
}

ModeOrdering verify_mode_ordering(std::span<const SearchRow> rows) {
    ModeOrdering o{};
    auto lower = [](std::optional<double>& slot, double v) { slot = slot ? std::min(*slot, v) : v; };
    auto upper = [](std::optional<double>& slot, double v) { slot = slot ? std::max(*slot, v) : v; };
    for (const auto& r : rows) {
        if (!r.flows.cop) continue;
        const double cop = *r.flows.cop;
        switch (r.flows.mode) {
            case Mode::Accelerator: upper(o.max_accelerator, cop); break;
            case Mode::Refrigerator:
                lower(o.min_refrigerator, cop);
                upper(o.max_refrigerator, cop);
                break;
            case Mode::Engine: lower(o.min_engine, cop); break;
            default: break;
        }
    }
    // Chain the non-empty groups in order and require each link to hold.
    std::vector<double> chain;
    for (const auto& v : {o.max_accelerator, o.min_refrigerator, o.max_refrigerator, o.min_engine}) {
        if (v) chain.push_back(*v);
    }
    o.holds = true;
    for (std::size_t i = 1; i < chain.size(); ++i) {
        if (chain[i - 1] > chain[i] + kCopTie) o.holds = false;
    }
    return o;
}

}  // namespace qfridge
