#pragma once

#include "tecc/audio.hpp"

#include <span>
#include <string>
#include <vector>

namespace tecc {

// HTK-style Mel map: 2595 * log10(1 + f / 700). Both throw on negative input.
double hz_to_mel(double hz);
double mel_to_hz(double mel);

// `count` points equally spaced in Mel from fmin to fmax, endpoints included.
std::vector<double> mel_spaced_hz(double fmin_hz, double fmax_hz, int count);

struct FilterbankSpec {
    int num_filters = 40;
    double fmin_hz = 10.0;
    double fmax_hz = 8000.0;
    double bandwidth_scale = 1.0;
};

inline constexpr std::size_t kMaxKernelTaps = 16383;

/// Real cosine Gabor filters with Mel-spaced centres.
///
/// Filter i is exp(-n^2 / (2 sigma_i^2)) * cos(2 pi fc_i n / fs) on
/// [-L_i, L_i], L_i = ceil(3 sigma_i) (capped so the kernel stays within
/// kMaxKernelTaps), scaled to unit gain at fc_i. sigma_i comes from a
/// frequency-domain standard deviation equal to bandwidth_scale times the
/// local Mel spacing expressed in Hz at fc_i, capped at fc_i / 3 so the
/// passband never reaches DC. Both terms grow with fc_i, so bandwidth is
/// non-decreasing across the bank.
class GaborFilterbank {
public:
    GaborFilterbank(std::vector<std::vector<double>> kernels, std::vector<double> center_freqs_hz,
                    std::vector<double> sigmas_samples, int sample_rate_hz);

    std::size_t size() const { return kernels_.size(); }
    std::span<const double> kernel(std::size_t i) const { return kernels_.at(i); }
    const std::vector<double>& center_freqs_hz() const { return center_freqs_hz_; }
    const std::vector<double>& sigmas_samples() const { return sigmas_samples_; }
    int sample_rate_hz() const { return sample_rate_hz_; }
    std::size_t max_half_length() const;

private:
    std::vector<std::vector<double>> kernels_;
    std::vector<double> center_freqs_hz_;
    std::vector<double> sigmas_samples_;
    int sample_rate_hz_;
};

struct SubbandSignals {
    std::vector<std::vector<double>> bands;
    std::vector<double> center_freqs_hz;
};

GaborFilterbank design_filterbank(const FilterbankSpec& spec, int sample_rate_hz);

// Same-length, centre-aligned FIR filtering with zero padding at both edges.
SubbandSignals apply_filterbank(const AudioBuffer& buffer, const GaborFilterbank& fb);
SubbandSignals apply_filterbank(std::span<const double> samples, int sample_rate_hz,
                                const GaborFilterbank& fb);

// |H(f)| of a linear-phase kernel centred on its middle tap.
double kernel_magnitude_response(std::span<const double> kernel, double freq_hz, int sample_rate_hz);

// index,center_hz,sigma_samples,kernel_len
std::string format_filterbank_csv(const GaborFilterbank& fb);

}  // namespace tecc
