#include "tecc/error.hpp"
#include "tecc/simd/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace tecc::simd {
namespace {

bool cpu_has_avx2() {
#if defined(TECC_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Isa initial_isa() {
    if (const char* env = std::getenv("TECC_SIMD")) {
        const std::string choice(env);
        if (choice == "scalar") return Isa::scalar;
        if (choice == "avx2" && isa_supported(Isa::avx2)) return Isa::avx2;
        if (choice == "neon" && isa_supported(Isa::neon)) return Isa::neon;
    }
    return detect_isa();
}

std::atomic<Isa>& active_slot() {
    static std::atomic<Isa> slot{initial_isa()};
    return slot;
}

}  // namespace

std::string_view isa_name(Isa isa) {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
        case Isa::neon: return "neon";
    }
    return "unknown";
}

bool isa_supported(Isa isa) {
    switch (isa) {
        case Isa::scalar: return true;
        case Isa::avx2: return cpu_has_avx2();
        case Isa::neon:
#if defined(TECC_HAVE_NEON)
            return true;
#else
            return false;
#endif
    }
    return false;
}

Isa detect_isa() {
    if (isa_supported(Isa::avx2)) return Isa::avx2;
    if (isa_supported(Isa::neon)) return Isa::neon;
    return Isa::scalar;
}

Isa active_isa() { return active_slot().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
    if (!isa_supported(isa)) {
        throw Error("SIMD variant '" + std::string(isa_name(isa)) + "' is not available here");
    }
    active_slot().store(isa, std::memory_order_relaxed);
}

const KernelTable& kernels(Isa isa) {
    switch (isa) {
#if defined(TECC_HAVE_AVX2)
        case Isa::avx2:
            if (cpu_has_avx2()) return detail::avx2_table();
            break;
#endif
#if defined(TECC_HAVE_NEON)
        case Isa::neon: return detail::neon_table();
#endif
        default: break;
    }
    return detail::scalar_table();
}

const KernelTable& kernels() { return kernels(active_isa()); }

void correlate(std::span<const double> padded, std::span<const double> taps,
               std::span<double> out) {
    if (taps.empty() || padded.size() + 1 < out.size() + taps.size()) {
        throw Error("correlate: padded input too short for the requested output");
    }
    kernels().correlate(padded.data(), out.size(), taps.data(), taps.size(), out.data());
}

void teager(std::span<const double> x, std::span<double> out) {
    if (out.size() < x.size()) throw Error("teager: output shorter than input");
    kernels().teager(x.data(), x.size(), out.data());
}

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw Error("dot: length mismatch");
    return kernels().dot(a.data(), b.data(), a.size());
}

double sum(std::span<const double> a) { return kernels().sum(a.data(), a.size()); }

}  // namespace tecc::simd
