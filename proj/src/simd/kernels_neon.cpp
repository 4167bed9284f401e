// aarch64 only. Advanced SIMD is part of the base ARMv8-A profile, so no
// runtime check is needed once this file is compiled in.

#include "tecc/simd/kernels.hpp"

#include <arm_neon.h>

#include <cmath>

namespace tecc::simd::detail {
namespace {

void correlate_neon(const double* padded, std::size_t out_len, const double* taps,
                    std::size_t num_taps, double* out) {
    std::size_t n = 0;
    for (; n + 8 <= out_len; n += 8) {
        float64x2_t a0 = vdupq_n_f64(0.0);
        float64x2_t a1 = vdupq_n_f64(0.0);
        float64x2_t a2 = vdupq_n_f64(0.0);
        float64x2_t a3 = vdupq_n_f64(0.0);
        const double* base = padded + n;
        for (std::size_t t = 0; t < num_taps; ++t) {
            const float64x2_t h = vdupq_n_f64(taps[t]);
            a0 = vfmaq_f64(a0, h, vld1q_f64(base + t));
            a1 = vfmaq_f64(a1, h, vld1q_f64(base + t + 2));
            a2 = vfmaq_f64(a2, h, vld1q_f64(base + t + 4));
            a3 = vfmaq_f64(a3, h, vld1q_f64(base + t + 6));
        }
        vst1q_f64(out + n, a0);
        vst1q_f64(out + n + 2, a1);
        vst1q_f64(out + n + 4, a2);
        vst1q_f64(out + n + 6, a3);
    }
    for (; n < out_len; ++n) {
        double acc = 0.0;
        for (std::size_t t = 0; t < num_taps; ++t) acc = std::fma(taps[t], padded[n + t], acc);
        out[n] = acc;
    }
}

void teager_neon(const double* x, std::size_t n, double* out) {
    if (n < 3) return;
    const std::size_t last = n - 1;
    std::size_t i = 1;
    for (; i + 2 <= last; i += 2) {
        const float64x2_t c = vld1q_f64(x + i);
        const float64x2_t cross = vmulq_f64(vld1q_f64(x + i - 1), vld1q_f64(x + i + 1));
        vst1q_f64(out + i, vsubq_f64(vmulq_f64(c, c), cross));
    }
    for (; i < last; ++i) out[i] = x[i] * x[i] - x[i - 1] * x[i + 1];
}

double dot_neon(const double* a, const double* b, std::size_t n) {
    float64x2_t a0 = vdupq_n_f64(0.0);
    float64x2_t a1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        a0 = vfmaq_f64(a0, vld1q_f64(a + i), vld1q_f64(b + i));
        a1 = vfmaq_f64(a1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
    }
    double acc = vaddvq_f64(vaddq_f64(a0, a1));
    for (; i < n; ++i) acc = std::fma(a[i], b[i], acc);
    return acc;
}

double sum_neon(const double* a, std::size_t n) {
    float64x2_t a0 = vdupq_n_f64(0.0);
    float64x2_t a1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        a0 = vaddq_f64(a0, vld1q_f64(a + i));
        a1 = vaddq_f64(a1, vld1q_f64(a + i + 2));
    }
    double acc = vaddvq_f64(vaddq_f64(a0, a1));
    for (; i < n; ++i) acc += a[i];
    return acc;
}

}  // namespace

const KernelTable& neon_table() {
    static const KernelTable table{correlate_neon, teager_neon, dot_neon, sum_neon};
    return table;
}

}  // namespace tecc::simd::detail
