#pragma once

#include "tecc/audio.hpp"
#include "tecc/cepstral.hpp"
#include "tecc/dataset.hpp"
#include "tecc/filterbank.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace tecc {

enum class FrontendKind { tecc, mfcc };

std::string_view frontend_name(FrontendKind kind);
FrontendKind parse_frontend_kind(std::string_view name);

struct FrontendConfig {
    FrontendKind kind = FrontendKind::tecc;
    int num_filters = 40;
    int num_ceps = 40;
    double fmin_hz = 10.0;
    double fmax_hz = 8000.0;
    double window_ms = 25.0;
    double hop_ms = 10.0;
    bool add_deltas = true;
    bool apply_cmn = true;
    // Gabor bandwidth multiplier; TECC only.
    double bandwidth_scale = 1.0;

    // 40 Gabor bands, 40 cepstra: 120 dims with deltas.
    static FrontendConfig tecc_defaults();
    // 26 triangular bands, 13 cepstra including c0: 39 dims with deltas.
    static FrontendConfig mfcc_defaults();
    static FrontendConfig defaults(FrontendKind kind);

    FrameGrid grid() const { return {window_ms, hop_ms}; }
    std::size_t output_dim() const;
    void validate() const;
};

// Gabor subbands -> TEO -> frame mean -> log -> DCT -> CMN -> deltas.
FeatureMatrix extract_tecc(const AudioBuffer& buffer, const FrontendConfig& cfg);

// Hamming frames -> |FFT|^2 -> triangular Mel bands -> log -> DCT -> CMN -> deltas.
FeatureMatrix extract_mfcc(const AudioBuffer& buffer, const FrontendConfig& cfg);

FeatureMatrix extract_features(const AudioBuffer& buffer, const FrontendConfig& cfg);

/// Log frame-averaged Teager energies, the TECC intermediate before the DCT.
struct SpectralDensity {
    std::size_t num_filters = 0;
    std::size_t num_frames = 0;
    std::vector<double> values;  // num_filters x num_frames, row-major
    std::vector<double> center_freqs_hz;
    std::vector<double> frame_times_s;  // frame centres

    double at(std::size_t filter, std::size_t frame) const { return values[filter * num_frames + frame]; }
};

SpectralDensity teager_spectral_density(const AudioBuffer& buffer, const FrontendConfig& cfg);

// First column frame time (s), then one column per filter; the header row
// holds the filter centre frequencies in Hz.
std::string format_spectral_density_csv(const SpectralDensity& density);

// Loads and featurises every manifest entry on `jobs` workers; output is in
// manifest order.
std::vector<FeatureMatrix> extract_manifest(const DatasetManifest& manifest,
                                            const FrontendConfig& cfg, int jobs);

}  // namespace tecc
