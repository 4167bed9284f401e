#include "tecc/audio.hpp"

#include "tecc/error.hpp"
#include "tecc/fileio.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace tecc {

AudioBuffer::AudioBuffer(std::vector<double> samples, int sample_rate_hz, std::string source_id)
    : samples_(std::move(samples)), sample_rate_hz_(sample_rate_hz), source_id_(std::move(source_id)) {
    if (samples_.empty()) throw Error("audio '" + source_id_ + "' is empty");
    if (sample_rate_hz_ < kMinSampleRateHz) {
        throw Error("audio '" + source_id_ + "' has sample rate " + std::to_string(sample_rate_hz_) +
                    " Hz; at least 16000 Hz is required");
    }
    for (double s : samples_) {
        if (!std::isfinite(s) || std::abs(s) > 1.0) {
            throw Error("audio '" + source_id_ + "' contains a sample outside [-1, 1]");
        }
    }
}

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t read_u16(const std::uint8_t* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t read_u32(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
}

void put_tag(std::vector<std::uint8_t>& out, const char* tag) { out.insert(out.end(), tag, tag + 4); }

struct WavFormat {
    std::uint16_t format = 0;
    std::uint16_t channels = 0;
    std::uint32_t sample_rate = 0;
    std::uint16_t bits = 0;
};

}  // namespace

AudioBuffer decode_wav(std::span<const std::uint8_t> bytes, std::string source_id) {
    const auto fail = [&](const std::string& why) -> Error {
        return Error("'" + source_id + "': " + why);
    };
    if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
        std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
        throw fail("not a RIFF/WAVE file");
    }

    WavFormat fmt;
    bool have_fmt = false;
    std::span<const std::uint8_t> data;
    bool have_data = false;

    std::size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        const std::uint8_t* hdr = bytes.data() + pos;
        const std::uint32_t chunk_size = read_u32(hdr + 4);
        const std::size_t body = pos + 8;
        // Truncated data chunks are common in the wild; take what is there.
        const std::size_t available = std::min<std::size_t>(chunk_size, bytes.size() - body);
        if (std::memcmp(hdr, "fmt ", 4) == 0) {
            if (available < 16) throw fail("fmt chunk too short");
            const std::uint8_t* p = bytes.data() + body;
            fmt.format = read_u16(p);
            fmt.channels = read_u16(p + 2);
            fmt.sample_rate = read_u32(p + 4);
            fmt.bits = read_u16(p + 14);
            if (fmt.format == kFormatExtensible) {
                if (available < 40) throw fail("extensible fmt chunk too short");
                // First two bytes of the sub-format GUID carry the format code.
                fmt.format = read_u16(p + 24);
            }
            have_fmt = true;
        } else if (std::memcmp(hdr, "data", 4) == 0) {
            data = bytes.subspan(body, available);
            have_data = true;
        }
        pos = body + chunk_size + (chunk_size & 1u);
    }

    if (!have_fmt) throw fail("missing fmt chunk");
    if (!have_data) throw fail("missing data chunk");
    if (fmt.channels != 1 && fmt.channels != 2) {
        throw fail("unsupported channel count " + std::to_string(fmt.channels));
    }
    const bool is_pcm16 = fmt.format == kFormatPcm && fmt.bits == 16;
    const bool is_float32 = fmt.format == kFormatFloat && fmt.bits == 32;
    if (!is_pcm16 && !is_float32) {
        throw fail("unsupported encoding (format " + std::to_string(fmt.format) + ", " +
                   std::to_string(fmt.bits) + " bits); expected 16-bit PCM or 32-bit float");
    }

    const std::size_t frame_bytes = static_cast<std::size_t>(fmt.channels) * (fmt.bits / 8);
    const std::size_t num_frames = data.size() / frame_bytes;
    if (num_frames == 0) throw fail("no audio samples");
    if (fmt.sample_rate < static_cast<std::uint32_t>(kMinSampleRateHz)) {
        throw fail("sample rate " + std::to_string(fmt.sample_rate) +
                   " Hz is below the 16000 Hz minimum");
    }

    auto sample_at = [&](std::size_t index) -> double {
        const std::uint8_t* p = data.data() + index * (fmt.bits / 8);
        if (is_pcm16) {
            return static_cast<double>(static_cast<std::int16_t>(read_u16(p))) / 32768.0;
        }
        const std::uint32_t raw = read_u32(p);
        float f;
        std::memcpy(&f, &raw, sizeof f);
        if (!std::isfinite(f)) throw fail("non-finite float sample");
        return std::clamp(static_cast<double>(f), -1.0, 1.0);
    };

    std::vector<double> mono(num_frames);
    if (fmt.channels == 1) {
        for (std::size_t i = 0; i < num_frames; ++i) mono[i] = sample_at(i);
    } else {
        for (std::size_t i = 0; i < num_frames; ++i) {
            mono[i] = 0.5 * (sample_at(2 * i) + sample_at(2 * i + 1));
        }
    }
    return AudioBuffer(std::move(mono), static_cast<int>(fmt.sample_rate), std::move(source_id));
}

AudioBuffer load_audio(const std::filesystem::path& path) {
    const auto bytes = read_file_bytes(path);
    return decode_wav(bytes, path.string());
}

std::vector<std::uint8_t> encode_wav(std::span<const double> interleaved, int channels,
                                     int sample_rate_hz, WavEncoding encoding) {
    if (channels != 1 && channels != 2) throw Error("encode_wav: channels must be 1 or 2");
    if (interleaved.size() % static_cast<std::size_t>(channels) != 0) {
        throw Error("encode_wav: sample count is not a multiple of the channel count");
    }
    const std::uint16_t bits = encoding == WavEncoding::pcm16 ? 16 : 32;
    const std::uint16_t block_align = static_cast<std::uint16_t>(channels * bits / 8);
    const auto data_bytes = static_cast<std::uint32_t>(interleaved.size() * (bits / 8));

    std::vector<std::uint8_t> out;
    out.reserve(44 + data_bytes);
    put_tag(out, "RIFF");
    put_u32(out, 36 + data_bytes);
    put_tag(out, "WAVE");
    put_tag(out, "fmt ");
    put_u32(out, 16);
    put_u16(out, encoding == WavEncoding::pcm16 ? kFormatPcm : kFormatFloat);
    put_u16(out, static_cast<std::uint16_t>(channels));
    put_u32(out, static_cast<std::uint32_t>(sample_rate_hz));
    put_u32(out, static_cast<std::uint32_t>(sample_rate_hz) * block_align);
    put_u16(out, block_align);
    put_u16(out, bits);
    put_tag(out, "data");
    put_u32(out, data_bytes);
    for (double s : interleaved) {
        if (encoding == WavEncoding::pcm16) {
            const double scaled = std::nearbyint(s * 32768.0);
            const auto v = static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0));
            put_u16(out, static_cast<std::uint16_t>(v));
        } else {
            const float f = static_cast<float>(s);
            std::uint32_t raw;
            std::memcpy(&raw, &f, sizeof raw);
            put_u32(out, raw);
        }
    }
    return out;
}

void write_wav(const std::filesystem::path& path, const AudioBuffer& buffer, WavEncoding encoding) {
    write_file_atomic(path, encode_wav(buffer.samples(), 1, buffer.sample_rate_hz(), encoding));
}

}  // namespace tecc
