#include "tecc/frontends.hpp"

#include "tecc/error.hpp"
#include "tecc/fileio.hpp"
#include "tecc/parallel.hpp"
#include "tecc/simd/kernels.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

namespace tecc {

std::string_view frontend_name(FrontendKind kind) {
    return kind == FrontendKind::tecc ? "tecc" : "mfcc";
}

FrontendKind parse_frontend_kind(std::string_view name) {
    if (name == "tecc") return FrontendKind::tecc;
    if (name == "mfcc") return FrontendKind::mfcc;
    throw Error("unknown front-end '" + std::string(name) + "' (expected tecc or mfcc)");
}

FrontendConfig FrontendConfig::tecc_defaults() { return FrontendConfig{}; }

FrontendConfig FrontendConfig::mfcc_defaults() {
    FrontendConfig cfg;
    cfg.kind = FrontendKind::mfcc;
    cfg.num_filters = 26;
    cfg.num_ceps = 13;
    return cfg;
}

FrontendConfig FrontendConfig::defaults(FrontendKind kind) {
    return kind == FrontendKind::tecc ? tecc_defaults() : mfcc_defaults();
}

std::size_t FrontendConfig::output_dim() const {
    const auto ceps = static_cast<std::size_t>(num_ceps);
    return add_deltas ? 3 * ceps : ceps;
}

void FrontendConfig::validate() const {
    if (num_filters < 1) throw Error("num_filters must be at least 1");
    if (num_ceps < 1 || num_ceps > num_filters) throw Error("num_ceps must be in [1, num_filters]");
    if (!(fmin_hz > 0.0) || !(fmax_hz > fmin_hz)) throw Error("front-end needs 0 < fmin < fmax");
    if (!(window_ms > 0.0) || !(hop_ms > 0.0)) throw Error("window and hop must be positive");
}

namespace {

struct FrameMatrix {
    std::size_t frames = 0;
    std::size_t bands = 0;
    std::vector<double> values;  // frames x bands
};

std::size_t checked_frame_count(const AudioBuffer& buffer, const FrameGrid& grid) {
    const std::size_t frames = grid.num_frames(buffer.size(), buffer.sample_rate_hz());
    if (frames == 0) {
        throw Error("recording '" + buffer.source_id() + "' is shorter than one " +
                    std::to_string(grid.window_ms) + " ms analysis window");
    }
    return frames;
}

// Shared by extract_tecc and teager_spectral_density.
FrameMatrix teager_log_energies(const AudioBuffer& buffer, const FrontendConfig& cfg,
                                std::vector<double>* centers) {
    cfg.validate();
    const FrameGrid grid = cfg.grid();
    const std::size_t frames = checked_frame_count(buffer, grid);
    const int fs = buffer.sample_rate_hz();
    const std::size_t window = grid.window_samples(fs);
    const std::size_t hop = grid.hop_samples(fs);

    const GaborFilterbank fb = design_filterbank(
        FilterbankSpec{cfg.num_filters, cfg.fmin_hz, cfg.fmax_hz, cfg.bandwidth_scale}, fs);
    if (centers) *centers = fb.center_freqs_hz();

    const auto samples = buffer.samples();
    const std::size_t pad = fb.max_half_length();
    std::vector<double> padded(samples.size() + 2 * pad, 0.0);
    std::copy(samples.begin(), samples.end(), padded.begin() + static_cast<std::ptrdiff_t>(pad));
    const std::span<const double> all(padded);

    FrameMatrix out;
    out.frames = frames;
    out.bands = fb.size();
    out.values.assign(frames * fb.size(), 0.0);

    // One band at a time keeps memory at O(samples) instead of O(bands * samples).
    std::vector<double> band(samples.size());
    for (std::size_t i = 0; i < fb.size(); ++i) {
        const auto taps = fb.kernel(i);
        simd::correlate(all.subspan(pad - taps.size() / 2, samples.size() + taps.size() - 1), taps, band);
        const TeagerEnergyProfile profile = teo(band, static_cast<int>(i));
        const auto energies = log_compress(frame_average(profile.values, window, hop));
        for (std::size_t t = 0; t < frames; ++t) out.values[t * out.bands + i] = energies[t];
    }
    return out;
}

FeatureMatrix cepstra_from_log_energies(const FrameMatrix& logs, const FrontendConfig& cfg,
                                        const std::string& recording_id) {
    const auto keep = static_cast<std::size_t>(cfg.num_ceps);
    const DctII dct(logs.bands, keep);
    std::vector<double> statics(logs.frames * keep);
    const std::span<const double> all(logs.values);
    for (std::size_t t = 0; t < logs.frames; ++t) {
        dct.apply(all.subspan(t * logs.bands, logs.bands),
                  std::span<double>(statics).subspan(t * keep, keep));
    }
    std::string name(frontend_name(cfg.kind));
    if (!cfg.add_deltas) name += "-static";
    FeatureMatrix m(logs.frames, keep, std::move(statics),
                    FeatureMeta{recording_id, name, FeatureLayout{keep, 0, 0}});
    if (cfg.apply_cmn) m = cmn(m);
    if (cfg.add_deltas) m = append_deltas(m);
    return m;
}

std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

// FFTW plans are created and destroyed under a global lock; execution on
// the plan's own arrays is thread-safe.
class RealFft {
public:
    explicit RealFft(std::size_t n) : n_(n) {
        in_ = fftw_alloc_real(n_);
        out_ = fftw_alloc_complex(n_ / 2 + 1);
        std::lock_guard lock(fftw_planner_mutex());
        plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(n_), in_, out_, FFTW_ESTIMATE);
    }
    ~RealFft() {
        {
            std::lock_guard lock(fftw_planner_mutex());
            fftw_destroy_plan(plan_);
        }
        fftw_free(in_);
        fftw_free(out_);
    }
    RealFft(const RealFft&) = delete;
    RealFft& operator=(const RealFft&) = delete;

    std::span<double> input() { return {in_, n_}; }

    void power_spectrum(std::span<double> power) {
        fftw_execute(plan_);
        for (std::size_t k = 0; k <= n_ / 2; ++k) power[k] = out_[k][0] * out_[k][0] + out_[k][1] * out_[k][1];
    }

private:
    std::size_t n_;
    double* in_ = nullptr;
    fftw_complex* out_ = nullptr;
    fftw_plan plan_ = nullptr;
};

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// num_filters x (nfft/2 + 1) triangular weights on Mel-spaced edges.
std::vector<double> mel_triangles(int num_filters, double fmin, double fmax, std::size_t nfft, int fs) {
    const auto edges = mel_spaced_hz(fmin, fmax, num_filters + 2);
    const std::size_t bins = nfft / 2 + 1;
    std::vector<double> weights(static_cast<std::size_t>(num_filters) * bins, 0.0);
    for (int j = 0; j < num_filters; ++j) {
        const double lo = edges[static_cast<std::size_t>(j)];
        const double mid = edges[static_cast<std::size_t>(j) + 1];
        const double hi = edges[static_cast<std::size_t>(j) + 2];
        for (std::size_t k = 0; k < bins; ++k) {
            const double f = static_cast<double>(k) * fs / static_cast<double>(nfft);
            double w = 0.0;
            if (f > lo && f <= mid) w = (f - lo) / (mid - lo);
            else if (f > mid && f < hi) w = (hi - f) / (hi - mid);
            weights[static_cast<std::size_t>(j) * bins + k] = w;
        }
    }
    return weights;
}

}  // namespace

FeatureMatrix extract_tecc(const AudioBuffer& buffer, const FrontendConfig& cfg) {
    if (cfg.kind != FrontendKind::tecc) throw Error("extract_tecc called with a non-TECC config");
    return cepstra_from_log_energies(teager_log_energies(buffer, cfg, nullptr), cfg, buffer.source_id());
}

FeatureMatrix extract_mfcc(const AudioBuffer& buffer, const FrontendConfig& cfg) {
    if (cfg.kind != FrontendKind::mfcc) throw Error("extract_mfcc called with a non-MFCC config");
    cfg.validate();
    const int fs = buffer.sample_rate_hz();
    if (cfg.fmax_hz > fs / 2.0) throw Error("fmax is above Nyquist");
    const FrameGrid grid = cfg.grid();
    const std::size_t frames = checked_frame_count(buffer, grid);
    const std::size_t window = grid.window_samples(fs);
    const std::size_t hop = grid.hop_samples(fs);
    const std::size_t nfft = next_pow2(window);
    const std::size_t bins = nfft / 2 + 1;

    std::vector<double> hamming(window);
    for (std::size_t n = 0; n < window; ++n) {
        hamming[n] = window > 1 ? 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(n) /
                                                          static_cast<double>(window - 1))
                                : 1.0;
    }
    const auto weights = mel_triangles(cfg.num_filters, cfg.fmin_hz, cfg.fmax_hz, nfft, fs);
    const auto bands = static_cast<std::size_t>(cfg.num_filters);

    RealFft fft(nfft);
    std::vector<double> power(bins);
    FrameMatrix logs;
    logs.frames = frames;
    logs.bands = bands;
    logs.values.resize(frames * bands);
    const auto samples = buffer.samples();
    const std::span<const double> w(weights);
    for (std::size_t t = 0; t < frames; ++t) {
        auto in = fft.input();
        std::fill(in.begin(), in.end(), 0.0);
        for (std::size_t n = 0; n < window; ++n) in[n] = samples[t * hop + n] * hamming[n];
        fft.power_spectrum(power);
        for (std::size_t j = 0; j < bands; ++j) {
            const double e = simd::dot(w.subspan(j * bins, bins), power);
            logs.values[t * bands + j] = std::log(std::max(e, kEnergyFloor));
        }
    }
    return cepstra_from_log_energies(logs, cfg, buffer.source_id());
}

FeatureMatrix extract_features(const AudioBuffer& buffer, const FrontendConfig& cfg) {
    return cfg.kind == FrontendKind::tecc ? extract_tecc(buffer, cfg) : extract_mfcc(buffer, cfg);
}

SpectralDensity teager_spectral_density(const AudioBuffer& buffer, const FrontendConfig& cfg) {
    if (cfg.kind != FrontendKind::tecc) throw Error("spectral density needs a TECC config");
    SpectralDensity out;
    const FrameMatrix logs = teager_log_energies(buffer, cfg, &out.center_freqs_hz);
    out.num_filters = logs.bands;
    out.num_frames = logs.frames;
    out.values.resize(logs.values.size());
    for (std::size_t t = 0; t < logs.frames; ++t) {
        for (std::size_t i = 0; i < logs.bands; ++i) out.values[i * logs.frames + t] = logs.values[t * logs.bands + i];
    }
    const int fs = buffer.sample_rate_hz();
    const FrameGrid grid = cfg.grid();
    const double window = static_cast<double>(grid.window_samples(fs));
    const double hop = static_cast<double>(grid.hop_samples(fs));
    out.frame_times_s.resize(logs.frames);
    for (std::size_t t = 0; t < logs.frames; ++t) {
        out.frame_times_s[t] = (static_cast<double>(t) * hop + window / 2.0) / fs;
    }
    return out;
}

std::string format_spectral_density_csv(const SpectralDensity& density) {
    std::string out = "time_s";
    for (double f : density.center_freqs_hz) out += ',' + format_double(f);
    out += '\n';
    for (std::size_t t = 0; t < density.num_frames; ++t) {
        out += format_double(density.frame_times_s[t]);
        for (std::size_t i = 0; i < density.num_filters; ++i) out += ',' + format_double(density.at(i, t));
        out += '\n';
    }
    return out;
}

std::vector<FeatureMatrix> extract_manifest(const DatasetManifest& manifest, const FrontendConfig& cfg,
                                            int jobs) {
    cfg.validate();
    return parallel_map(manifest.entries.size(), jobs, [&](std::size_t i) {
        const auto& entry = manifest.entries[i];
        AudioBuffer audio = load_audio(manifest.resolve_audio(entry));
        FeatureMatrix m = extract_features(audio, cfg);
        m.meta().recording_id = entry.recording_id;
        return m;
    });
}

}  // namespace tecc
