#include "qfridge/model.hpp"

#include "qfridge/kernels.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qfridge {
namespace {

constexpr double kNormTolerance = 1e-12;

double require_positive(double value, const char* field) {
    if (!std::isfinite(value) || value <= 0.0) {
        throw std::invalid_argument(std::string(field) + " must be positive and finite, got " +
                                    std::to_string(value));
    }
    return value;
}

}  // namespace

MachineSpec::MachineSpec(double beta_h, double beta_c, double omega_h, double omega_c)
    : beta_h_(require_positive(beta_h, "beta_h")),
      beta_c_(require_positive(beta_c, "beta_c")),
      omega_h_(require_positive(omega_h, "omega_h")),
      omega_c_(require_positive(omega_c, "omega_c")) {}

GibbsWeights gibbs_weights(const MachineSpec& spec) noexcept {
    const double a_h = std::exp(-spec.beta_h() * spec.omega_h());
    const double a_c = std::exp(-spec.beta_c() * spec.omega_c());
    return {a_h, a_c, 1.0 / ((1.0 + a_h) * (1.0 + a_c))};
}

CatalystDistribution::CatalystDistribution(std::vector<double> p, std::vector<double> epsilon)
    : p_(std::move(p)), epsilon_(std::move(epsilon)) {
    if (p_.empty()) throw std::invalid_argument("catalyst.p must have at least one level");
    for (double v : p_) {
        if (!std::isfinite(v) || v < 0.0) {
            throw std::invalid_argument("catalyst.p entries must be finite and non-negative");
        }
    }
    const double total = std::accumulate(p_.begin(), p_.end(), 0.0);
    if (std::abs(total - 1.0) > kNormTolerance) {
        throw std::invalid_argument("catalyst.p must sum to 1, sums to " + std::to_string(total));
    }
    if (epsilon_.empty()) {
        epsilon_.assign(p_.size(), 0.0);
    } else if (epsilon_.size() != p_.size()) {
        throw std::invalid_argument("catalyst.epsilon must have one energy per level");
    }
}

CatalystDistribution CatalystDistribution::uniform(std::size_t d) {
    if (d == 0) throw std::invalid_argument("catalyst dimension must be at least 1");
    return CatalystDistribution(std::vector<double>(d, 1.0 / static_cast<double>(d)));
}

CatalystDistribution CatalystDistribution::with_level_energies(std::vector<double> epsilon) const {
    return CatalystDistribution(p_, std::move(epsilon));
}

JointState::JointState(std::vector<double> pop) : pop_(std::move(pop)) {
    if (pop_.empty() || pop_.size() % kStatesPerNode != 0) {
        throw std::invalid_argument("joint state length must be a positive multiple of 4");
    }
    double total = 0.0;
    for (double v : pop_) {
        if (!std::isfinite(v) || v < 0.0) {
            throw std::invalid_argument("joint state populations must be finite and non-negative");
        }
        total += v;
    }
    if (std::abs(total - 1.0) > kNormTolerance) {
        throw std::invalid_argument("joint state must be normalized, sums to " +
                                    std::to_string(total));
    }
}

std::vector<double> JointState::catalyst_marginal() const {
    std::vector<double> out(catalyst_dim());
    kernels::block_sums4(pop_, out);
    return out;
}

JointState build_joint_state(const MachineSpec& spec, const CatalystDistribution& cat) {
    const auto [a_h, a_c, n] = gibbs_weights(spec);
    const double tls[4] = {n, n * a_c, n * a_h, n * a_h * a_c};
    std::vector<double> pop(kStatesPerNode * cat.dim());
    for (std::size_t m = 0; m < cat.dim(); ++m) {
        for (std::size_t s = 0; s < kStatesPerNode; ++s) pop[kStatesPerNode * m + s] = cat[m] * tls[s];
    }
    return JointState(std::move(pop));
}

EnergyVectors energy_vectors(const MachineSpec& spec, const CatalystDistribution& cat) {
    const std::size_t n = kStatesPerNode * cat.dim();
    EnergyVectors e{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
    const auto eps = cat.level_energies();
    for (std::size_t i = 0; i < n; ++i) {
        e.hot[i] = hot_of(i) * spec.omega_h();
        e.cold[i] = cold_of(i) * spec.omega_c();
        e.catalyst[i] = eps[node_of(i)];
    }
    return e;
}

}  // namespace qfridge
