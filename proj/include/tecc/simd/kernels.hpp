#pragma once

// Data-parallel inner loops shared by the front-ends.
//
// Every kernel has a scalar reference implementation and, where the target
// supports it, an AVX2/FMA (x86-64) or NEON (aarch64) variant. The variant is
// picked once at startup from CPU features; TECC_SIMD=scalar|avx2|neon in the
// environment overrides the choice. teager is bit-identical across variants;
// the accumulating kernels agree with the scalar reference up to
// reassociation and FMA rounding (see tests/unit/test_simd_equivalence.cpp).

#include <cstddef>
#include <span>
#include <string_view>

namespace tecc::simd {

enum class Isa { scalar, avx2, neon };

struct KernelTable {
    // out[n] = sum_t taps[t] * padded[n + t] for n in [0, out_len).
    // `padded` must hold out_len + num_taps - 1 values.
    void (*correlate)(const double* padded, std::size_t out_len, const double* taps,
                      std::size_t num_taps, double* out);
    // out[i] = x[i]^2 - x[i-1] * x[i+1] for i in [1, n - 1); n >= 3.
    // out[0] and out[n-1] are left untouched.
    void (*teager)(const double* x, std::size_t n, double* out);
    double (*dot)(const double* a, const double* b, std::size_t n);
    double (*sum)(const double* a, std::size_t n);
};

std::string_view isa_name(Isa isa);
bool isa_supported(Isa isa);

// Best ISA the running CPU supports.
Isa detect_isa();

Isa active_isa();
// Throws tecc::Error if the ISA is not supported on this CPU/build.
void set_active_isa(Isa isa);

const KernelTable& kernels(Isa isa);
const KernelTable& kernels();

// Span front-ends over the active table.
void correlate(std::span<const double> padded, std::span<const double> taps,
               std::span<double> out);
void teager(std::span<const double> x, std::span<double> out);
double dot(std::span<const double> a, std::span<const double> b);
double sum(std::span<const double> a);

namespace detail {
const KernelTable& scalar_table();
#if defined(TECC_HAVE_AVX2)
const KernelTable& avx2_table();
#endif
#if defined(TECC_HAVE_NEON)
const KernelTable& neon_table();
#endif
}  // namespace detail

}  // namespace tecc::simd
