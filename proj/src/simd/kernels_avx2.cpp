// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.

#include "tecc/simd/kernels.hpp"

#include <immintrin.h>

#include <cmath>

namespace tecc::simd::detail {
namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d swapped = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

// Vectorized across output positions: each lane owns one output and walks
// the taps in the same order as the scalar loop.
void correlate_avx2(const double* padded, std::size_t out_len, const double* taps,
                    std::size_t num_taps, double* out) {
    std::size_t n = 0;
    for (; n + 16 <= out_len; n += 16) {
        __m256d a0 = _mm256_setzero_pd();
        __m256d a1 = _mm256_setzero_pd();
        __m256d a2 = _mm256_setzero_pd();
        __m256d a3 = _mm256_setzero_pd();
        const double* base = padded + n;
        for (std::size_t t = 0; t < num_taps; ++t) {
            const __m256d h = _mm256_broadcast_sd(taps + t);
            a0 = _mm256_fmadd_pd(h, _mm256_loadu_pd(base + t), a0);
            a1 = _mm256_fmadd_pd(h, _mm256_loadu_pd(base + t + 4), a1);
            a2 = _mm256_fmadd_pd(h, _mm256_loadu_pd(base + t + 8), a2);
            a3 = _mm256_fmadd_pd(h, _mm256_loadu_pd(base + t + 12), a3);
        }
        _mm256_storeu_pd(out + n, a0);
        _mm256_storeu_pd(out + n + 4, a1);
        _mm256_storeu_pd(out + n + 8, a2);
        _mm256_storeu_pd(out + n + 12, a3);
    }
    for (; n + 4 <= out_len; n += 4) {
        __m256d acc = _mm256_setzero_pd();
        for (std::size_t t = 0; t < num_taps; ++t) {
            acc = _mm256_fmadd_pd(_mm256_broadcast_sd(taps + t), _mm256_loadu_pd(padded + n + t),
                                  acc);
        }
        _mm256_storeu_pd(out + n, acc);
    }
    for (; n < out_len; ++n) {
        double acc = 0.0;
        for (std::size_t t = 0; t < num_taps; ++t) acc = std::fma(taps[t], padded[n + t], acc);
        out[n] = acc;
    }
}

void teager_avx2(const double* x, std::size_t n, double* out) {
    if (n < 3) return;
    const std::size_t last = n - 1;
    std::size_t i = 1;
    for (; i + 4 <= last; i += 4) {
        const __m256d c = _mm256_loadu_pd(x + i);
        const __m256d prev = _mm256_loadu_pd(x + i - 1);
        const __m256d next = _mm256_loadu_pd(x + i + 1);
        _mm256_storeu_pd(out + i, _mm256_sub_pd(_mm256_mul_pd(c, c), _mm256_mul_pd(prev, next)));
    }
    for (; i < last; ++i) out[i] = x[i] * x[i] - x[i - 1] * x[i + 1];
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d a0 = _mm256_setzero_pd();
    __m256d a1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        a0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), a0);
        a1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), a1);
    }
    for (; i + 4 <= n; i += 4) {
        a0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), a0);
    }
    double acc = hsum(_mm256_add_pd(a0, a1));
    for (; i < n; ++i) acc = std::fma(a[i], b[i], acc);
    return acc;
}

double sum_avx2(const double* a, std::size_t n) {
    __m256d a0 = _mm256_setzero_pd();
    __m256d a1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        a0 = _mm256_add_pd(a0, _mm256_loadu_pd(a + i));
        a1 = _mm256_add_pd(a1, _mm256_loadu_pd(a + i + 4));
    }
    for (; i + 4 <= n; i += 4) a0 = _mm256_add_pd(a0, _mm256_loadu_pd(a + i));
    double acc = hsum(_mm256_add_pd(a0, a1));
    for (; i < n; ++i) acc += a[i];
    return acc;
}

}  // namespace

const KernelTable& avx2_table() {
    static const KernelTable table{correlate_avx2, teager_avx2, dot_avx2, sum_avx2};
    return table;
}

}  // namespace tecc::simd::detail
