#include "qfridge/thermo.hpp"

#include "qfridge/kernels.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qfridge {

std::string_view to_string(Mode mode) noexcept {
    switch (mode) {
        case Mode::Refrigerator: return "Refrigerator";
        case Mode::Engine: return "Engine";
        case Mode::Accelerator: return "Accelerator";
        case Mode::Idle: return "Idle";
        case Mode::Forbidden: return "Forbidden";
    }
    return "?";
}

Mode classify_mode(double q_cold, double work, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("classify_mode: tol must be positive");
    const double qc = std::abs(q_cold) <= tol ? 0.0 : q_cold;
    if (std::abs(work) <= tol) return Mode::Idle;
    if (work > 0.0) return qc > 0.0 ? Mode::Refrigerator : Mode::Accelerator;
    return qc < 0.0 ? Mode::Engine : Mode::Forbidden;
}

EnergyFlows flows_from_heats(double q_hot, double q_cold, double tol) {
    EnergyFlows f;
    f.q_hot = q_hot;
    f.q_cold = q_cold;
    f.work = q_hot - q_cold;
    if (std::abs(f.work) > tol) f.cop = q_cold / f.work;
    f.mode = classify_mode(q_cold, f.work, tol);
    return f;
}

EnergyFlows energy_flows(const MachineSpec& spec, const CatalystDistribution& cat,
                         const Permutation& perm) {
    if (perm.size() != kStatesPerNode * cat.dim()) {
        throw std::invalid_argument("energy_flows: permutation does not match 4d");
    }
    const JointState rho = build_joint_state(spec, cat);
    const EnergyVectors e = energy_vectors(spec, cat);
    // Σ e (ρ' − ρ) with ρ'[i] = ρ[perm[i]]
    const double q_hot = kernels::permuted_delta_dot(e.hot, rho.populations(), perm.map());
    const double q_cold = -kernels::permuted_delta_dot(e.cold, rho.populations(), perm.map());
    return flows_from_heats(q_hot, q_cold);
}

EnergyFlows energy_flows(const MachineSpec& spec, const JointState& before,
                         const JointState& after) {
    if (before.size() != after.size()) throw std::invalid_argument("energy_flows: size mismatch");
    double q_hot = 0.0;
    double q_cold = 0.0;
    for (std::size_t i = 0; i < before.size(); ++i) {
        const double delta = after[i] - before[i];
        q_hot += hot_of(i) * spec.omega_h() * delta;
        q_cold -= cold_of(i) * spec.omega_c() * delta;
    }
    return flows_from_heats(q_hot, q_cold);
}

double second_law_margin(const MachineSpec& spec, const EnergyFlows& flows) noexcept {
    return -spec.beta_c() * flows.q_cold + spec.beta_h() * flows.q_hot;
}

double cop_rounding(const MachineSpec& spec, const EnergyFlows& flows) noexcept {
    if (!flows.cop) return std::numeric_limits<double>::infinity();
    constexpr double kUlps = 64.0 * std::numeric_limits<double>::epsilon();
    const double scale = spec.omega_c() + std::abs(*flows.cop) * (spec.omega_h() + spec.omega_c());
    return kUlps * scale / std::abs(flows.work);
}

double carnot_cop(const MachineSpec& spec) {
    if (!(spec.beta_c() > spec.beta_h())) {
        throw std::domain_error("carnot_cop requires beta_c > beta_h");
    }
    return spec.beta_h() / (spec.beta_c() - spec.beta_h());
}

SubspaceHeats subspace_heats(const MachineSpec& spec, const CatalystDistribution& cat,
                             const Permutation& perm) {
    const JointState rho = build_joint_state(spec, cat);
    if (perm.size() != rho.size()) throw std::invalid_argument("subspace_heats: dimension mismatch");
    double cold_out = 0.0;
    double hot_in = 0.0;
    for (std::size_t dst = 0; dst < perm.size(); ++dst) {
        const std::size_t src = perm[dst];
        const double moved = rho[src];
        if (cold_of(src) != cold_of(dst)) cold_out += cold_of(src) ? moved : -moved;
        if (hot_of(src) != hot_of(dst)) hot_in += hot_of(dst) ? moved : -moved;
    }
    return {spec.omega_c() * cold_out, spec.omega_h() * hot_in};
}

double catalyst_energy_change(const MachineSpec& spec, const CatalystDistribution& cat,
                              const Permutation& perm) {
    if (perm.size() != kStatesPerNode * cat.dim()) {
        throw std::invalid_argument("catalyst_energy_change: dimension mismatch");
    }
    const JointState rho = build_joint_state(spec, cat);
    const EnergyVectors e = energy_vectors(spec, cat);
    return kernels::permuted_delta_dot(e.catalyst, rho.populations(), perm.map());
}

}  // namespace qfridge
