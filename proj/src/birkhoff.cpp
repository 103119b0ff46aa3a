#include "qfridge/birkhoff.hpp"

#include "qfridge/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qfridge {

BistochasticMatrix::BistochasticMatrix(std::size_t dim, std::vector<double> entries)
    : dim_(dim), entries_(std::move(entries)) {
    if (dim_ == 0 || entries_.size() != dim_ * dim_) {
        throw std::invalid_argument("bistochastic matrix must be square with dim >= 1");
    }
    std::vector<double> col(dim_, 0.0);
    for (std::size_t r = 0; r < dim_; ++r) {
        double row = 0.0;
        for (std::size_t c = 0; c < dim_; ++c) {
            const double v = entries_[r * dim_ + c];
            if (!std::isfinite(v) || v < 0.0) {
                throw std::invalid_argument("bistochastic matrix entries must be non-negative");
            }
            row += v;
            col[c] += v;
        }
        if (std::abs(row - 1.0) > kSumTolerance) {
            throw std::invalid_argument("row " + std::to_string(r) + " sums to " + std::to_string(row));
        }
    }
    for (std::size_t c = 0; c < dim_; ++c) {
        if (std::abs(col[c] - 1.0) > kSumTolerance) {
            throw std::invalid_argument("column " + std::to_string(c) + " sums to " +
                                        std::to_string(col[c]));
        }
    }
}

BistochasticMatrix BistochasticMatrix::from_permutation(const Permutation& perm) {
    std::vector<double> e(perm.size() * perm.size(), 0.0);
    for (std::size_t r = 0; r < perm.size(); ++r) e[r * perm.size() + perm[r]] = 1.0;
    return BistochasticMatrix(perm.size(), std::move(e));
}

BistochasticMatrix BistochasticMatrix::from_mixture(const ConvexMixture& mixture) {
    const std::size_t n = mixture.dim();
    if (n == 0) throw std::invalid_argument("from_mixture: empty mixture");
    std::vector<double> e(n * n, 0.0);
    for (const auto& term : mixture.terms) {
        if (term.perm.size() != n) throw std::invalid_argument("from_mixture: mixed dimensions");
        for (std::size_t r = 0; r < n; ++r) e[r * n + term.perm[r]] += term.weight;
    }
    return BistochasticMatrix(n, std::move(e));
}

std::vector<double> BistochasticMatrix::apply(std::span<const double> x) const {
    if (x.size() != dim_) throw std::invalid_argument("bistochastic apply: dimension mismatch");
    std::vector<double> y(dim_);
    kernels::matvec(entries_, x, y);
    return y;
}

namespace {

class Matcher {
public:
    Matcher(const std::vector<double>& residual, std::size_t n, double tol)
        : residual_(residual), n_(n), tol_(tol), row_of_col_(n, kFree), seen_(n, false) {}

    // perm[r] = column matched to row r, or empty if no perfect matching.
    std::vector<std::int32_t> perfect_matching() {
        for (std::size_t r = 0; r < n_; ++r) {
            std::fill(seen_.begin(), seen_.end(), false);
            if (!augment(r)) return {};
        }
        std::vector<std::int32_t> perm(n_);
        for (std::size_t c = 0; c < n_; ++c) perm[row_of_col_[c]] = static_cast<std::int32_t>(c);
        return perm;
    }

private:
    static constexpr std::size_t kFree = static_cast<std::size_t>(-1);

    bool augment(std::size_t r) {
        for (std::size_t c = 0; c < n_; ++c) {
            if (residual_[r * n_ + c] <= tol_ || seen_[c]) continue;
            seen_[c] = true;
            if (row_of_col_[c] == kFree || augment(row_of_col_[c])) {
                row_of_col_[c] = r;
                return true;
            }
        }
        return false;
    }

    const std::vector<double>& residual_;
    std::size_t n_;
    double tol_;
    std::vector<std::size_t> row_of_col_;
    std::vector<bool> seen_;
};

}  // namespace

ConvexMixture birkhoff_decompose(const BistochasticMatrix& lambda, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("birkhoff_decompose: tol must be positive");
    const std::size_t n = lambda.dim();
    std::vector<double> residual(lambda.entries().begin(), lambda.entries().end());
    ConvexMixture out;
    const std::size_t max_terms = (n - 1) * (n - 1) + 1;

    while (*std::max_element(residual.begin(), residual.end()) > tol) {
        auto perm = Matcher(residual, n, tol).perfect_matching();
        if (perm.empty()) {
            throw std::domain_error("birkhoff_decompose: no perfect matching on the residual "
                                    "support; input is not bistochastic within tol");
        }
        double alpha = residual[perm[0]];
        for (std::size_t r = 1; r < n; ++r) alpha = std::min(alpha, residual[r * n + perm[r]]);
        for (std::size_t r = 0; r < n; ++r) {
            double& v = residual[r * n + perm[r]];
            v = std::max(0.0, v - alpha);
        }
        out.terms.push_back({alpha, Permutation(std::move(perm))});
        if (out.terms.size() > max_terms) {
            throw std::domain_error("birkhoff_decompose: exceeded (dim-1)^2+1 terms");
        }
    }
    return out;
}

}  // namespace qfridge
