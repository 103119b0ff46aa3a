// Compiled with -mavx2 -mfma; only reached through the dispatch table after a
// runtime CPU check.

#include "qfridge/kernels.hpp"

#include <immintrin.h>

#include <algorithm>
#include <cmath>

namespace qfridge::kernels {
namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

inline __m128i load_idx4(const std::int32_t* p) {
    return _mm_loadu_si128(reinterpret_cast<const __m128i*>(p));
}

void gather_avx2(const double* src, const std::int32_t* map, double* dst, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(dst + i, _mm256_i32gather_pd(src, load_idx4(map + i), 8));
    }
    for (; i < n; ++i) dst[i] = src[map[i]];
}

double permuted_delta_dot_avx2(const double* w, const double* pop, const std::int32_t* map,
                               std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d moved = _mm256_i32gather_pd(pop, load_idx4(map + i), 8);
        const __m256d diff = _mm256_sub_pd(moved, _mm256_loadu_pd(pop + i));
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), diff, acc);
    }
    double tail = 0.0;
    for (; i < n; ++i) tail += w[i] * (pop[map[i]] - pop[i]);
    return hsum(acc) + tail;
}

// One catalyst node is exactly one 256-bit lane group, so each block sum is a
// single load plus a horizontal add. Pairing matches the scalar reference:
// (x0 + x1) + (x2 + x3).
void block_sums4_avx2(const double* x, double* out, std::size_t blocks) {
    for (std::size_t b = 0; b < blocks; ++b) {
        const __m256d v = _mm256_loadu_pd(x + 4 * b);
        const __m256d h = _mm256_hadd_pd(v, v);
        const __m128d s = _mm_add_sd(_mm256_castpd256_pd128(h), _mm256_extractf128_pd(h, 1));
        out[b] = _mm_cvtsd_f64(s);
    }
}

double max_abs_diff_avx2(const double* a, const double* b, std::size_t n) {
    const __m256d sign = _mm256_set1_pd(-0.0);
    __m256d m = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        m = _mm256_max_pd(m, _mm256_andnot_pd(sign, d));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, m);
    double r = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
    for (; i < n; ++i) r = std::max(r, std::abs(a[i] - b[i]));
    return r;
}

void matvec_avx2(const double* a, const double* x, double* y, std::size_t rows,
                 std::size_t cols) {
    for (std::size_t r = 0; r < rows; ++r) {
        const double* row = a + r * cols;
        __m256d acc = _mm256_setzero_pd();
        std::size_t c = 0;
        for (; c + 4 <= cols; c += 4) {
            acc = _mm256_fmadd_pd(_mm256_loadu_pd(row + c), _mm256_loadu_pd(x + c), acc);
        }
        double tail = 0.0;
        for (; c < cols; ++c) tail += row[c] * x[c];
        y[r] = hsum(acc) + tail;
    }
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

constexpr KernelTable kAvx2{
    Isa::Avx2,        "avx2",            gather_avx2, permuted_delta_dot_avx2,
    block_sums4_avx2, max_abs_diff_avx2, matvec_avx2, axpy_avx2,
};

}  // namespace

namespace detail {
const KernelTable& avx2_table_unchecked() noexcept { return kAvx2; }
}  // namespace detail

}  // namespace qfridge::kernels
