#include "tecc/simd/kernels.hpp"

namespace tecc::simd::detail {
namespace {

void correlate_scalar(const double* padded, std::size_t out_len, const double* taps,
                      std::size_t num_taps, double* out) {
    for (std::size_t n = 0; n < out_len; ++n) {
        const double* window = padded + n;
        double acc = 0.0;
        for (std::size_t t = 0; t < num_taps; ++t) acc += taps[t] * window[t];
        out[n] = acc;
    }
}

void teager_scalar(const double* x, std::size_t n, double* out) {
    for (std::size_t i = 1; i + 1 < n; ++i) out[i] = x[i] * x[i] - x[i - 1] * x[i + 1];
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double sum_scalar(const double* a, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i];
    return acc;
}

}  // namespace

const KernelTable& scalar_table() {
    static const KernelTable table{correlate_scalar, teager_scalar, dot_scalar, sum_scalar};
    return table;
}

}  // namespace tecc::simd::detail
