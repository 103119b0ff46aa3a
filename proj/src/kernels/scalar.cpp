#include "qfridge/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace qfridge::kernels {
namespace {

void gather_scalar(const double* src, const std::int32_t* map, double* dst, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = src[map[i]];
}

double permuted_delta_dot_scalar(const double* w, const double* pop, const std::int32_t* map,
                                 std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += w[i] * (pop[map[i]] - pop[i]);
    return acc;
}

void block_sums4_scalar(const double* x, double* out, std::size_t blocks) {
    for (std::size_t b = 0; b < blocks; ++b) {
        const double* blk = x + 4 * b;
        out[b] = (blk[0] + blk[1]) + (blk[2] + blk[3]);
    }
}

double max_abs_diff_scalar(const double* a, const double* b, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

void matvec_scalar(const double* a, const double* x, double* y, std::size_t rows,
                   std::size_t cols) {
    for (std::size_t r = 0; r < rows; ++r) {
        const double* row = a + r * cols;
        double acc = 0.0;
        for (std::size_t c = 0; c < cols; ++c) acc += row[c] * x[c];
        y[r] = acc;
    }
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

constexpr KernelTable kScalar{
    Isa::Scalar,          "scalar",           gather_scalar, permuted_delta_dot_scalar,
    block_sums4_scalar,   max_abs_diff_scalar, matvec_scalar, axpy_scalar,
};

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

}  // namespace qfridge::kernels
