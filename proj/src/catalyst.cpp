#include "qfridge/catalyst.hpp"

#include "qfridge/kernels.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qfridge {

TransferMatrix::TransferMatrix(std::size_t d, std::vector<double> entries)
    : d_(d), entries_(std::move(entries)) {
    if (d_ == 0 || entries_.size() != d_ * d_) {
        throw std::invalid_argument("transfer matrix must be square with d >= 1");
    }
    for (std::size_t c = 0; c < d_; ++c) {
        double sum = 0.0;
        for (std::size_t r = 0; r < d_; ++r) {
            const double v = entries_[r * d_ + c];
            if (!std::isfinite(v) || v < 0.0) {
                throw std::invalid_argument("transfer matrix entries must be non-negative");
            }
            sum += v;
        }
        if (std::abs(sum - 1.0) > kColumnTolerance) {
            throw std::invalid_argument("transfer matrix column " + std::to_string(c) +
                                        " sums to " + std::to_string(sum));
        }
    }
}

std::vector<double> TransferMatrix::apply(std::span<const double> p) const {
    if (p.size() != d_) throw std::invalid_argument("transfer apply: dimension mismatch");
    std::vector<double> out(d_);
    kernels::matvec(entries_, p, out);
    return out;
}

TransferMatrix transfer_matrix(const MachineSpec& spec, const Permutation& perm, std::size_t d) {
    if (perm.size() != kStatesPerNode * d) {
        throw std::invalid_argument("transfer_matrix: permutation size " +
                                    std::to_string(perm.size()) + " does not match 4d = " +
                                    std::to_string(kStatesPerNode * d));
    }
    const auto [a_h, a_c, n] = gibbs_weights(spec);
    const double tls[4] = {n, n * a_c, n * a_h, n * a_h * a_c};
    std::vector<double> e(d * d, 0.0);
    // Population at destination i comes from source perm[i].
    for (std::size_t i = 0; i < perm.size(); ++i) {
        const std::size_t src = perm[i];
        e[node_of(i) * d + node_of(src)] += tls[src % kStatesPerNode];
    }
    return TransferMatrix(d, std::move(e));
}

namespace {

constexpr double kPivotThreshold = 1e-13;

std::vector<double> normalized_nonneg(std::vector<double> v) {
    for (double& x : v) x = std::max(x, 0.0);
    const double s = std::accumulate(v.begin(), v.end(), 0.0);
    for (double& x : v) x /= s;
    return v;
}

double fixed_point_residual(const TransferMatrix& tm, std::span<const double> p) {
    const auto mp = tm.apply(p);
    return kernels::max_abs_diff(mp, p);
}

std::vector<double> lazy_power_iteration(const TransferMatrix& tm, double tol) {
    const std::size_t d = tm.dim();
    std::vector<double> p(d, 1.0 / static_cast<double>(d));
    std::vector<double> next(d);
    for (std::size_t it = 0; it < kMaxPowerIterations; ++it) {
        kernels::matvec(tm.entries(), p, next);
        for (std::size_t i = 0; i < d; ++i) next[i] = 0.5 * (next[i] + p[i]);
        const double step = kernels::max_abs_diff(next, p);
        p.swap(next);
        if (step < tol / 10.0) return normalized_nonneg(std::move(p));
    }
    throw std::runtime_error("stationary_distribution: power iteration did not converge");
}

}  // namespace

StationaryResult stationary_distribution(const TransferMatrix& tm, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("stationary_distribution: tol must be positive");
    const std::size_t d = tm.dim();
    if (d == 1) return {CatalystDistribution::trivial(), true, 0.0};

    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    Eigen::Map<const RowMajor> m(tm.entries().data(), static_cast<Eigen::Index>(d),
                                 static_cast<Eigen::Index>(d));
    const Eigen::MatrixXd a = m - Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(d),
                                                            static_cast<Eigen::Index>(d));
    // Pivots count toward the rank only above an absolute 1e-13. Eigen's
    // threshold is relative to the largest pivot, which for M ≈ I is itself
    // rounding noise, so it is rescaled here.
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    const double max_pivot = lu.maxPivot();
    std::size_t nullity = d;
    if (max_pivot > kPivotThreshold) {
        lu.setThreshold(kPivotThreshold / max_pivot);
        nullity = d - static_cast<std::size_t>(lu.rank());
    }

    std::vector<double> p;
    bool unique = true;
    if (nullity == 1) {
        const Eigen::VectorXd k = lu.kernel().col(0);
        p.assign(k.data(), k.data() + k.size());
        if (std::accumulate(p.begin(), p.end(), 0.0) < 0.0) {
            for (double& x : p) x = -x;
        }
        p = normalized_nonneg(std::move(p));
    } else {
        unique = nullity == 0;  // rank-full only through rounding; iterate anyway
        p = lazy_power_iteration(tm, tol);
    }
    const double residual = fixed_point_residual(tm, p);
    return {CatalystDistribution(std::move(p)), unique, residual};
}

StationaryResult stationary_catalyst(const MachineSpec& spec, const Permutation& perm,
                                     std::size_t d, double tol) {
    return stationary_distribution(transfer_matrix(spec, perm, d), tol);
}

bool is_catalytic(const MachineSpec& spec, const Permutation& perm,
                  const CatalystDistribution& cat, double tol) {
    const JointState after = apply(perm, build_joint_state(spec, cat));
    return kernels::max_abs_diff(after.catalyst_marginal(), cat.probabilities()) <= tol;
}

namespace {

// True if a should receive the oriented flow rather than b.
bool receives(std::size_t a, std::size_t b) {
    if (hot_of(a) != hot_of(b)) return hot_of(a) > hot_of(b);
    if (cold_of(a) != cold_of(b)) return cold_of(a) < cold_of(b);
    return node_of(a) < node_of(b);
}

}  // namespace

FlowReport node_flows(const MachineSpec& spec, const Permutation& perm,
                      const CatalystDistribution& cat) {
    const auto swaps = as_transpositions(perm);
    if (!swaps) {
        throw std::invalid_argument("node_flows: permutation has a cycle longer than two");
    }
    const JointState rho = build_joint_state(spec, cat);
    if (perm.size() != rho.size()) throw std::invalid_argument("node_flows: dimension mismatch");

    FlowReport report;
    for (auto [u, v] : *swaps) {
        if (node_of(u) == node_of(v)) continue;
        const std::size_t target = receives(u, v) ? u : v;
        const std::size_t source = target == u ? v : u;
        report.records.push_back(
            {node_of(source), node_of(target), source, target, rho[source] - rho[target]});
    }
    if (!report.records.empty()) {
        const double first = report.records.front().delta_p;
        const bool agree = std::all_of(report.records.begin(), report.records.end(), [&](const auto& r) {
            return std::abs(r.delta_p - first) <= kUniformFlowTolerance;
        });
        if (agree) report.uniform_flow = first;
    }
    return report;
}

}  // namespace qfridge
