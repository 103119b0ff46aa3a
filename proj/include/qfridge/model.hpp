#pragma once

// Machine parameters, Gibbs populations and the joint product state of
// (catalyst ⊗ hot TLS ⊗ cold TLS).
//
// Basis convention, used by every module and every file we write:
//
//     index(node, hot, cold) = 4 * node + 2 * hot + cold
//
// with node ∈ [0, d) the catalyst level (0-based), hot, cold ∈ {0, 1}. The
// catalyst is the slowest index, so each catalyst level owns a contiguous
// block of four basis states ("node").

#include <cstddef>
#include <span>
#include <vector>

namespace qfridge {

inline constexpr std::size_t kStatesPerNode = 4;

constexpr std::size_t basis_index(std::size_t node, int hot, int cold) noexcept {
    return kStatesPerNode * node + 2 * static_cast<std::size_t>(hot) + static_cast<std::size_t>(cold);
}
constexpr std::size_t node_of(std::size_t index) noexcept { return index / kStatesPerNode; }
constexpr int hot_of(std::size_t index) noexcept { return static_cast<int>((index >> 1) & 1U); }
constexpr int cold_of(std::size_t index) noexcept { return static_cast<int>(index & 1U); }

/// Bath inverse temperatures and TLS gaps. All four strictly positive and
/// finite; no ordering between beta_c and beta_h is imposed here.
class MachineSpec {
public:
    /// Throws std::invalid_argument naming the offending field.
    MachineSpec(double beta_h, double beta_c, double omega_h, double omega_c);

    double beta_h() const noexcept { return beta_h_; }
    double beta_c() const noexcept { return beta_c_; }
    double omega_h() const noexcept { return omega_h_; }
    double omega_c() const noexcept { return omega_c_; }

    bool operator==(const MachineSpec&) const = default;

private:
    double beta_h_;
    double beta_c_;
    double omega_h_;
    double omega_c_;
};

struct GibbsWeights {
    double a_h;       // exp(-beta_h * omega_h)
    double a_c;       // exp(-beta_c * omega_c)
    double n_factor;  // 1 / ((1 + a_h)(1 + a_c))
};

GibbsWeights gibbs_weights(const MachineSpec& spec) noexcept;

/// Diagonal catalyst state: probabilities p over d levels plus optional level
/// energies (zero by default; they never enter a heat or work formula).
class CatalystDistribution {
public:
    /// Throws std::invalid_argument if p is empty, has a negative entry, does
    /// not sum to one within 1e-12, or if epsilon has the wrong length.
    explicit CatalystDistribution(std::vector<double> p, std::vector<double> epsilon = {});

    static CatalystDistribution trivial() { return CatalystDistribution({1.0}); }
    static CatalystDistribution uniform(std::size_t d);

    std::size_t dim() const noexcept { return p_.size(); }
    std::span<const double> probabilities() const noexcept { return p_; }
    std::span<const double> level_energies() const noexcept { return epsilon_; }
    double operator[](std::size_t m) const noexcept { return p_[m]; }

    /// Same probabilities, new level energies.
    CatalystDistribution with_level_energies(std::vector<double> epsilon) const;

private:
    std::vector<double> p_;
    std::vector<double> epsilon_;
};

/// Population vector over the 4d joint basis states.
class JointState {
public:
    /// Throws std::invalid_argument unless the length is a positive multiple
    /// of four, every entry is non-negative and the total is one within 1e-12.
    explicit JointState(std::vector<double> pop);

    std::size_t catalyst_dim() const noexcept { return pop_.size() / kStatesPerNode; }
    std::size_t size() const noexcept { return pop_.size(); }
    std::span<const double> populations() const noexcept { return pop_; }
    double operator[](std::size_t i) const noexcept { return pop_[i]; }

    /// Marginal catalyst distribution, one entry per node.
    std::vector<double> catalyst_marginal() const;

private:
    std::vector<double> pop_;
};

/// pop[index(m, j, k)] = p_m · N · a_h^j · a_c^k
JointState build_joint_state(const MachineSpec& spec, const CatalystDistribution& cat);

struct EnergyVectors {
    std::vector<double> hot;       // j · omega_h
    std::vector<double> cold;      // k · omega_c
    std::vector<double> catalyst;  // epsilon_m
};

EnergyVectors energy_vectors(const MachineSpec& spec, const CatalystDistribution& cat);

}  // namespace qfridge
