#pragma once

// Arithmetic inner loops over population vectors.
//
// Every kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant compiled in its own translation unit with -mavx2 -mfma. The variant
// is chosen once at startup from the CPU feature bits; QFRIDGE_SIMD=scalar
// (or avx2) overrides the choice. Both variants are equivalence-tested.
//
// The AVX2 reductions sum in a different order than the scalar loop, so the
// two tables agree to rounding, not bit-for-bit. Within one process the table
// never changes, which keeps outputs reproducible run to run.

#include <cassert>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace qfridge::kernels {

enum class Isa { Scalar, Avx2 };

struct KernelTable {
    Isa isa;
    std::string_view name;

    // dst[i] = src[map[i]]
    void (*gather)(const double* src, const std::int32_t* map, double* dst, std::size_t n);

    // sum_i w[i] * (pop[map[i]] - pop[i])
    double (*permuted_delta_dot)(const double* w, const double* pop, const std::int32_t* map,
                                 std::size_t n);

    // out[b] = x[4b] + x[4b+1] + x[4b+2] + x[4b+3]
    void (*block_sums4)(const double* x, double* out, std::size_t blocks);

    // max_i |a[i] - b[i]|
    double (*max_abs_diff)(const double* a, const double* b, std::size_t n);

    // y = A x, A row-major rows x cols
    void (*matvec)(const double* a, const double* x, double* y, std::size_t rows,
                   std::size_t cols);

    // y += alpha * x
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
};

const KernelTable& scalar_table() noexcept;

/// AVX2 table, or nullptr when it was not compiled in or the CPU lacks AVX2/FMA.
const KernelTable* avx2_table() noexcept;

/// The table selected for this process.
const KernelTable& active() noexcept;

inline void gather(std::span<const double> src, std::span<const std::int32_t> map,
                   std::span<double> dst) {
    assert(map.size() == dst.size() && src.size() == map.size());
    active().gather(src.data(), map.data(), dst.data(), map.size());
}

inline double permuted_delta_dot(std::span<const double> w, std::span<const double> pop,
                                 std::span<const std::int32_t> map) {
    assert(w.size() == pop.size() && map.size() == pop.size());
    return active().permuted_delta_dot(w.data(), pop.data(), map.data(), map.size());
}

inline void block_sums4(std::span<const double> x, std::span<double> out) {
    assert(x.size() == 4 * out.size());
    active().block_sums4(x.data(), out.data(), out.size());
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    assert(a.size() == b.size());
    return active().max_abs_diff(a.data(), b.data(), a.size());
}

inline void matvec(std::span<const double> a, std::span<const double> x, std::span<double> y) {
    assert(a.size() == x.size() * y.size());
    active().matvec(a.data(), x.data(), y.data(), y.size(), x.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    assert(x.size() == y.size());
    active().axpy(alpha, x.data(), y.data(), x.size());
}

}  // namespace qfridge::kernels
