#include "tecc/filterbank.hpp"

#include "tecc/error.hpp"
#include "tecc/fileio.hpp"
#include "tecc/simd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace tecc {

double hz_to_mel(double hz) {
    if (!(hz >= 0.0)) throw Error("hz_to_mel: frequency must be non-negative");
    return 2595.0 * std::log10(1.0 + hz / 700.0);
}

double mel_to_hz(double mel) {
    if (!(mel >= 0.0)) throw Error("mel_to_hz: mel value must be non-negative");
    return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

std::vector<double> mel_spaced_hz(double fmin_hz, double fmax_hz, int count) {
    if (count < 1) throw Error("need at least one Mel point");
    const double lo = hz_to_mel(fmin_hz);
    const double hi = hz_to_mel(fmax_hz);
    std::vector<double> out(static_cast<std::size_t>(count));
    if (count == 1) {
        out[0] = fmin_hz;
        return out;
    }
    const double step = (hi - lo) / (count - 1);
    for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = mel_to_hz(lo + step * i);
    // Pin the endpoints to the requested values exactly.
    out.front() = fmin_hz;
    out.back() = fmax_hz;
    return out;
}

GaborFilterbank::GaborFilterbank(std::vector<std::vector<double>> kernels,
                                 std::vector<double> center_freqs_hz,
                                 std::vector<double> sigmas_samples, int sample_rate_hz)
    : kernels_(std::move(kernels)),
      center_freqs_hz_(std::move(center_freqs_hz)),
      sigmas_samples_(std::move(sigmas_samples)),
      sample_rate_hz_(sample_rate_hz) {
    if (kernels_.empty()) throw Error("filterbank has no filters");
    if (center_freqs_hz_.size() != kernels_.size() || sigmas_samples_.size() != kernels_.size()) {
        throw Error("filterbank field sizes disagree");
    }
    for (const auto& k : kernels_) {
        if (k.size() % 2 == 0) throw Error("filter kernels must have odd length");
    }
}

std::size_t GaborFilterbank::max_half_length() const {
    std::size_t m = 0;
    for (const auto& k : kernels_) m = std::max(m, k.size() / 2);
    return m;
}

double kernel_magnitude_response(std::span<const double> kernel, double freq_hz,
                                 int sample_rate_hz) {
    const double omega = 2.0 * std::numbers::pi * freq_hz / sample_rate_hz;
    const auto half = static_cast<std::ptrdiff_t>(kernel.size() / 2);
    double re = 0.0;
    double im = 0.0;
    for (std::ptrdiff_t n = -half; n <= half; ++n) {
        const double h = kernel[static_cast<std::size_t>(n + half)];
        re += h * std::cos(omega * n);
        im -= h * std::sin(omega * n);
    }
    return std::hypot(re, im);
}

GaborFilterbank design_filterbank(const FilterbankSpec& spec, int sample_rate_hz) {
    if (spec.num_filters < 1) throw Error("filterbank needs at least one filter");
    if (!(spec.fmin_hz > 0.0) || !(spec.fmax_hz > spec.fmin_hz)) {
        throw Error("filterbank needs 0 < fmin < fmax");
    }
    if (!(spec.bandwidth_scale > 0.0)) throw Error("bandwidth_scale must be positive");
    if (sample_rate_hz <= 0) throw Error("sample rate must be positive");
    if (spec.fmax_hz > sample_rate_hz / 2.0) {
        throw Error("fmax " + std::to_string(spec.fmax_hz) + " Hz is above Nyquist for " +
                    std::to_string(sample_rate_hz) + " Hz audio");
    }

    const auto centers = mel_spaced_hz(spec.fmin_hz, spec.fmax_hz, spec.num_filters);
    const double mel_span = hz_to_mel(spec.fmax_hz) - hz_to_mel(spec.fmin_hz);
    const double mel_gap = spec.num_filters > 1 ? mel_span / (spec.num_filters - 1) : mel_span;

    std::vector<std::vector<double>> kernels;
    std::vector<double> sigmas;
    kernels.reserve(centers.size());
    sigmas.reserve(centers.size());
    for (double fc : centers) {
        // d(hz)/d(mel) at fc turns the Mel spacing into a local Hz bandwidth.
        const double hz_per_mel = (700.0 + fc) * std::numbers::ln10 / 2595.0;
        // The passband lobe stays at least 3 sigma clear of DC.
        const double sigma_hz = std::min(spec.bandwidth_scale * mel_gap * hz_per_mel, fc / 3.0);
        const double sigma_t = sample_rate_hz / (2.0 * std::numbers::pi * sigma_hz);
        const auto half = static_cast<std::ptrdiff_t>(
            std::min<double>(std::ceil(3.0 * sigma_t), (kMaxKernelTaps - 1) / 2));

        std::vector<double> kernel(static_cast<std::size_t>(2 * half + 1));
        const double omega = 2.0 * std::numbers::pi * fc / sample_rate_hz;
        for (std::ptrdiff_t n = -half; n <= half; ++n) {
            const double t = static_cast<double>(n);
            kernel[static_cast<std::size_t>(n + half)] =
                std::exp(-t * t / (2.0 * sigma_t * sigma_t)) * std::cos(omega * t);
        }
        // Symmetric kernel: the response at fc is real.
        double gain = 0.0;
        for (std::ptrdiff_t n = -half; n <= half; ++n) {
            gain += kernel[static_cast<std::size_t>(n + half)] * std::cos(omega * n);
        }
        if (!(std::abs(gain) > 0.0)) throw Error("degenerate Gabor kernel at " + std::to_string(fc) + " Hz");
        for (auto& c : kernel) c /= std::abs(gain);
        // Enforce exact symmetry after the floating-point normalisation.
        for (std::ptrdiff_t n = 1; n <= half; ++n) {
            kernel[static_cast<std::size_t>(half - n)] = kernel[static_cast<std::size_t>(half + n)];
        }

        kernels.push_back(std::move(kernel));
        sigmas.push_back(sigma_t);
    }
    return GaborFilterbank(std::move(kernels), centers, std::move(sigmas), sample_rate_hz);
}

SubbandSignals apply_filterbank(std::span<const double> samples, int sample_rate_hz,
                                const GaborFilterbank& fb) {
    if (sample_rate_hz != fb.sample_rate_hz()) {
        throw Error("filterbank designed for " + std::to_string(fb.sample_rate_hz()) +
                    " Hz applied to " + std::to_string(sample_rate_hz) + " Hz audio");
    }
    const std::size_t pad = fb.max_half_length();
    std::vector<double> padded(samples.size() + 2 * pad, 0.0);
    std::copy(samples.begin(), samples.end(), padded.begin() + static_cast<std::ptrdiff_t>(pad));

    SubbandSignals out;
    out.center_freqs_hz = fb.center_freqs_hz();
    out.bands.resize(fb.size());
    const std::span<const double> all(padded);
    for (std::size_t i = 0; i < fb.size(); ++i) {
        const auto taps = fb.kernel(i);
        const std::size_t offset = pad - taps.size() / 2;
        auto& band = out.bands[i];
        band.assign(samples.size(), 0.0);
        simd::correlate(all.subspan(offset, samples.size() + taps.size() - 1), taps, band);
    }
    return out;
}

SubbandSignals apply_filterbank(const AudioBuffer& buffer, const GaborFilterbank& fb) {
    return apply_filterbank(buffer.samples(), buffer.sample_rate_hz(), fb);
}

std::string format_filterbank_csv(const GaborFilterbank& fb) {
    std::string out = "index,center_hz,sigma_samples,kernel_len\n";
    for (std::size_t i = 0; i < fb.size(); ++i) {
        out += std::to_string(i) + ',' + format_double(fb.center_freqs_hz()[i]) + ',' +
               format_double(fb.sigmas_samples()[i]) + ',' + std::to_string(fb.kernel(i).size()) + '\n';
    }
    return out;
}

}  // namespace tecc
