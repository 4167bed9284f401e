#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace tecc {

inline constexpr int kMinSampleRateHz = 16000;

/// Mono signal in [-1, 1] at a known sample rate.
///
/// The constructor enforces the invariants (non-empty, finite samples with
/// |x| <= 1, sample rate >= 16 kHz) and throws tecc::Error otherwise.
class AudioBuffer {
public:
    AudioBuffer(std::vector<double> samples, int sample_rate_hz, std::string source_id = {});

    std::span<const double> samples() const { return samples_; }
    std::size_t size() const { return samples_.size(); }
    int sample_rate_hz() const { return sample_rate_hz_; }
    const std::string& source_id() const { return source_id_; }
    double duration_s() const { return static_cast<double>(samples_.size()) / sample_rate_hz_; }

private:
    std::vector<double> samples_;
    int sample_rate_hz_;
    std::string source_id_;
};

enum class WavEncoding { pcm16, float32 };

// Reads RIFF/WAVE with PCM int16 (format 1) or IEEE float32 (format 3),
// mono or stereo. Stereo is mixed down by averaging the two channels; int16
// is scaled by 1/32768. Float samples outside [-1, 1] are clipped.
AudioBuffer load_audio(const std::filesystem::path& path);
AudioBuffer decode_wav(std::span<const std::uint8_t> bytes, std::string source_id = {});

// Interleaved channels, each in [-1, 1]. Used by the synthetic-data tooling.
std::vector<std::uint8_t> encode_wav(std::span<const double> interleaved, int channels,
                                     int sample_rate_hz, WavEncoding encoding);
void write_wav(const std::filesystem::path& path, const AudioBuffer& buffer,
               WavEncoding encoding = WavEncoding::pcm16);

}  // namespace tecc
