#include "qfridge/regions.hpp"

#include "qfridge/catalyst.hpp"
#include "qfridge/permutations.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>

namespace qfridge {

double cooling_ratio_threshold(const MachineSpec& spec) noexcept {
    return spec.omega_c() * spec.beta_c() / (spec.omega_h() * spec.beta_h());
}

std::size_t admissible_d_max(const MachineSpec& spec) {
    const double x = spec.beta_h() * spec.omega_h() / (spec.beta_c() * spec.omega_c());
    const double r = std::round(x);
    // An exactly integral ratio can land a few ulps below the integer.
    const double f = std::abs(x - r) <= 1e-12 * x ? r : std::floor(x);
    return f < 1.0 ? 0 : static_cast<std::size_t>(f);
}

std::vector<CopPoint> cop_curve(const MachineSpec& spec, std::size_t d_max, double tol) {
    if (!(spec.beta_c() > spec.beta_h()) ||
        !(spec.beta_h() * spec.omega_h() > spec.beta_c() * spec.omega_c())) {
        throw std::domain_error("cop_curve requires beta_c > beta_h and beta_h*omega_h > beta_c*omega_c");
    }
    const double carnot = carnot_cop(spec);
    const std::size_t top = std::min(d_max, admissible_d_max(spec));
    std::vector<CopPoint> out;
    out.reserve(top);
    for (std::size_t d = 1; d <= top; ++d) {
        const double cop = spec.omega_c() / (spec.omega_h() / static_cast<double>(d) - spec.omega_c());
        const Permutation perm = pi_1(d);
        const auto st = stationary_catalyst(spec, perm, d, tol);
        const EnergyFlows f = energy_flows(spec, st.distribution, perm);
        std::optional<double> simulated;
        if (f.mode == Mode::Refrigerator) simulated = f.cop;
        out.push_back({d, cop, cop / carnot, simulated, f.mode});
    }
    return out;
}

bool noncat_coolable(const MachineSpec& spec) noexcept {
    return spec.beta_h() * spec.omega_h() >= spec.beta_c() * spec.omega_c() &&
           spec.beta_c() > spec.beta_h();
}

bool cat_coolable(const MachineSpec& spec, std::size_t d, std::size_t n_prime) {
    if (n_prime < 1 || n_prime > d) {
        throw std::invalid_argument("cat_coolable: need 1 <= n_prime <= d, got d=" +
                                    std::to_string(d) + " n_prime=" + std::to_string(n_prime));
    }
    return spec.beta_c() > spec.beta_h() &&
           static_cast<double>(d) * spec.omega_h() * spec.beta_h() >=
               static_cast<double>(n_prime) * spec.omega_c() * spec.beta_c();
}

double extended_cop(const MachineSpec& spec, std::size_t d, std::size_t n_prime) {
    return spec.omega_c() /
           (static_cast<double>(d) * spec.omega_h() / static_cast<double>(n_prime) - spec.omega_c());
}

std::optional<Witness> find_witness(double threshold, double cap, std::size_t max_d) {
    for (std::size_t d = 1; d <= max_d; ++d) {
        for (std::size_t np = 1; np <= d; ++np) {
            const double dd = static_cast<double>(d);
            const double nn = static_cast<double>(np);
            if (nn * threshold <= dd && dd <= cap * nn) return Witness{d, np};
        }
    }
    return std::nullopt;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t n) {
    if (n == 0) throw std::invalid_argument("linear_grid: need at least one point");
    if (n == 1) return {lo};
    std::vector<double> g(n);
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) g[i] = lo + step * static_cast<double>(i);
    g.back() = hi;
    return g;
}

namespace {

void check_grid(std::span<const double> grid, const char* name) {
    if (grid.empty()) throw std::invalid_argument(std::string(name) + " grid is empty");
    for (double v : grid) {
        if (!std::isfinite(v) || v <= 0.0) {
            throw std::invalid_argument(std::string(name) + " values must be finite and positive");
        }
    }
}

RegionPoint evaluate_point(double beta, double omega, double cap, const RegionOptions& opt) {
    RegionPoint pt{beta, omega, cap, false, std::nullopt, std::nullopt, std::nullopt, std::nullopt, 0.0};
    const double threshold = omega * beta;
    pt.coolable = beta > 1.0 && threshold <= cap;
    if (!pt.coolable) return pt;
    pt.witness = find_witness(threshold, cap, opt.max_d);
    if (!pt.witness) return pt;

    const MachineSpec spec(1.0, beta, 1.0, omega);
    const auto [d, np] = *pt.witness;
    pt.cop_formula = extended_cop(spec, d, np);
    if (!opt.simulate) return pt;
    const Permutation perm = pi_2(d - np, np);
    const auto st = stationary_catalyst(spec, perm, d, opt.tol);
    const EnergyFlows f = energy_flows(spec, st.distribution, perm);
    pt.simulated_mode = f.mode;
    if (f.mode == Mode::Refrigerator) {
        pt.cop_simulated = f.cop;
        pt.cop_slack = cop_rounding(spec, f);
    }
    return pt;
}

}  // namespace

std::vector<RegionPoint> scan_region(std::span<const double> beta_ratios,
                                     std::span<const double> omega_ratios,
                                     std::span<const double> caps, RegionOptions options) {
    check_grid(beta_ratios, "beta_ratio");
    check_grid(omega_ratios, "omega_ratio");
    check_grid(caps, "cap");

    const std::size_t nw = omega_ratios.size();
    const std::size_t nc = caps.size();
    const std::size_t total = beta_ratios.size() * nw * nc;
    std::vector<std::optional<RegionPoint>> slots(total);

    auto run = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t k = lo; k < hi; ++k) {
            const std::size_t b = k / (nw * nc);
            const std::size_t w = (k / nc) % nw;
            const std::size_t c = k % nc;
            slots[k] = evaluate_point(beta_ratios[b], omega_ratios[w], caps[c], options);
        }
    };
    unsigned workers = options.threads ? options.threads : std::thread::hardware_concurrency();
    workers = std::clamp<unsigned>(workers, 1U, 64U);
    if (workers == 1) {
        run(0, total);
    } else {
        const std::size_t chunk = (total + workers - 1) / workers;
        std::vector<std::jthread> pool;
        for (std::size_t lo = 0; lo < total; lo += chunk) pool.emplace_back(run, lo, std::min(total, lo + chunk));
    }

    std::vector<RegionPoint> out;
    out.reserve(total);
    for (auto& s : slots) out.push_back(*s);
    return out;
}

}  // namespace qfridge
