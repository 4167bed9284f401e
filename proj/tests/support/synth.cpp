#include "synth.hpp"

#include "tecc/audio.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace tecc::testing {

namespace fs = std::filesystem;
using std::numbers::pi;

std::vector<double> sine(std::size_t n, double fs, double freq_hz, double amplitude, double phase) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = amplitude * std::cos(2.0 * pi * freq_hz * i / fs + phase);
    return x;
}

std::vector<double> white_noise(std::size_t n, Rng& rng, double amplitude) {
    std::vector<double> x(n);
    for (auto& v : x) v = amplitude * (2.0 * rng.uniform01() - 1.0);
    return x;
}

std::vector<double> linear_chirp(std::size_t n, double fs, double f0, double f1, double amplitude) {
    std::vector<double> x(n);
    const double T = n / fs;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = i / fs;
        x[i] = amplitude * std::sin(2.0 * pi * (f0 * t + 0.5 * (f1 - f0) / T * t * t));
    }
    return x;
}

std::vector<double> bandpass_fir(double lo_hz, double hi_hz, double fs, std::size_t taps) {
    std::vector<double> h(taps);
    const double M = static_cast<double>(taps - 1);
    const double a = 2.0 * lo_hz / fs;
    const double b = 2.0 * hi_hz / fs;
    for (std::size_t i = 0; i < taps; ++i) {
        const double m = i - M / 2.0;
        const double ideal = m == 0.0 ? b - a : (std::sin(pi * b * m) - std::sin(pi * a * m)) / (pi * m);
        h[i] = ideal * (0.54 - 0.46 * std::cos(2.0 * pi * i / M));
    }
    return h;
}

std::vector<double> noise_bursts(double lo_hz, double hi_hz, double fs, double seconds, Rng& rng) {
    const auto n = static_cast<std::size_t>(seconds * fs);
    const auto h = bandpass_fir(lo_hz, hi_hz, fs);
    std::vector<double> noise(n + h.size());
    for (auto& v : noise) v = rng.normal();
    std::vector<double> band(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t k = 0; k < h.size(); ++k) acc += h[k] * noise[i + k];
        band[i] = acc;
    }

    std::vector<double> env(n, 0.05);
    const int bursts = 2 + static_cast<int>(rng.uniform_index(3));
    for (int b = 0; b < bursts; ++b) {
        const auto len = static_cast<std::size_t>((0.12 + 0.15 * rng.uniform01()) * fs);
        const auto start = static_cast<std::size_t>(rng.uniform_index(n - len));
        for (std::size_t i = 0; i < len; ++i) {
            const double w = 0.5 - 0.5 * std::cos(2.0 * pi * i / (len - 1));
            env[start + i] = std::max(env[start + i], w);
        }
    }
    double peak = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        band[i] *= env[i];
        peak = std::max(peak, std::abs(band[i]));
    }
    for (auto& v : band) v *= 0.8 / peak;
    return band;
}

DatasetManifest write_synthetic_dataset(const fs::path& dir, const SyntheticSpec& spec) {
    fs::create_directories(dir / "audio");
    Rng rng(spec.seed);
    DatasetManifest m;
    m.base_dir = dir;
    for (std::size_t i = 0; i < spec.recordings; ++i) {
        const bool positive = i % 2 == 1;
        const auto x = positive ? noise_bursts(1500.0, 4000.0, spec.sample_rate_hz, spec.seconds, rng)
                                : noise_bursts(300.0, 1200.0, spec.sample_rate_hz, spec.seconds, rng);
        char id[32];
        std::snprintf(id, sizeof id, "rec%03zu", i);
        const std::string rel = std::string("audio/") + id + ".wav";
        write_wav(dir / rel, AudioBuffer(x, spec.sample_rate_hz, id));
        ManifestEntry e;
        e.recording_id = id;
        e.audio_path = rel;
        e.label = positive ? Label::positive : Label::negative;
        e.gender = i % 3 == 0 ? Gender::female : Gender::male;
        e.nationality = "Other";
        m.entries.push_back(e);
    }
    if (spec.permute_labels) {
        std::vector<Label> labels;
        for (const auto& e : m.entries) labels.push_back(e.label);
        rng.shuffle(std::span<Label>(labels));
        for (std::size_t i = 0; i < labels.size(); ++i) m.entries[i].label = labels[i];
    }
    write_manifest(dir / "manifest.csv", m);
    return m;
}

fs::path scratch_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("tecc_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace tecc::testing
